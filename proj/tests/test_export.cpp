#include <unistd.h>

#include <filesystem>

#include "doctest.h"
#include "fixtures.hpp"
#include "fpnav/dataset/export.hpp"
#include "fpnav/io.hpp"
#include "fpnav/render/image.hpp"
#include "json.hpp"

using namespace fpnav;
using namespace fpnav::dataset;
namespace fs = std::filesystem;

namespace {

struct Exported {
  fs::path dir;
  ExportManifest manifest;

  Exported(ExportLayout layout, const std::string& tag) {
    dir = fs::temp_directory_path() / ("fpnav-export-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    auto w = fpnav::testing::world_of(fpnav::testing::row_plan());
    const std::vector<Episode> eps = {fpnav::testing::row_episode()};
    manifest = export_dataset(eps, [w](const Episode&) { return w; }, layout, dir);
  }
  ~Exported() { fs::remove_all(dir); }
};

}  // namespace

TEST_CASE("dual-view export writes one frame per action at frame_ref") {
  Exported ex(ExportLayout::dual_view, "dual");
  REQUIRE(ex.manifest.episodes.size() == 1);
  const auto& e = ex.manifest.episodes[0];
  CHECK(e.frames.size() == 41);
  CHECK(e.frames[5] == frame_ref("row-0000", 5));
  const auto bytes = read_text_file(ex.dir / e.frames[5]);
  const auto img = render::decode_png(std::vector<std::uint8_t>(bytes.begin(), bytes.end()));
  CHECK(img.width() > img.height());
  const auto manifest = nlohmann::json::parse(read_text_file(ex.dir / "manifest.json"));
  CHECK(manifest.at("layout") == "dual_view");
}

TEST_CASE("other layouts split observation and plan streams") {
  Exported stream(ExportLayout::dual_stream, "stream");
  CHECK(stream.manifest.episodes[0].obs_frames.size() == 41);
  CHECK(stream.manifest.episodes[0].plan_frames.size() == 41);
  Exported inter(ExportLayout::interleaved, "inter");
  CHECK(inter.manifest.episodes[0].frames.size() == 82);
  Exported stat(ExportLayout::static_separate, "static");
  REQUIRE(stat.manifest.episodes[0].static_plan);
  CHECK(fs::exists(stat.dir / *stat.manifest.episodes[0].static_plan));
  CHECK(stat.manifest.episodes[0].plan_frames.empty());
  CHECK_THROWS(export_layout_from_string("mosaic"));
}

TEST_CASE("dataset statistics count actions and regions") {
  auto w = fpnav::testing::world_of(fpnav::testing::row_plan());
  const std::vector<Episode> eps = {fpnav::testing::row_episode()};
  const auto st = dataset_stats(eps, [w](const Episode&) { return w; });
  CHECK(st.episodes == 1);
  CHECK(st.primitive_actions.at("MoveForward") == 40);
  CHECK(st.merged_actions.at("MoveForward") == 1);
  CHECK(st.regions_per_trajectory.at(3) == 1);
  CHECK(st.trajectory_length_m.at(10) == 1);
}
