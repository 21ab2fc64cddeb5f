#include "fpnav/dataset/catalog.hpp"

#include <map>

namespace fpnav::dataset {

const std::array<std::string_view, 30>& region_type_catalog() {
  static constexpr std::array<std::string_view, 30> kTypes = {
      "balcony",     "bar",          "bathroom",   "bedroom",      "classroom",   "closet",
      "corridor",    "dining booth", "dining room", "entryway",    "family room", "garage",
      "gym",         "hallway",      "kitchen",    "laundry room", "library",     "living room",
      "lounge",      "meeting room", "office",     "outdoor area", "porch",       "recreation room",
      "spa",         "stairs",       "storage room", "toilet",     "tv room",     "utility room",
  };
  return kTypes;
}

const std::vector<std::string>& stop_phrases(std::string_view region_type) {
  static const std::map<std::string, std::vector<std::string>, std::less<>> kBank = {
      {"balcony", {"by the railing", "next to the potted plants"}},
      {"bar", {"in front of the counter", "next to the stools"}},
      {"bathroom", {"in front of the sink", "next to the bathtub"}},
      {"bedroom", {"next to the bed", "in front of the wardrobe"}},
      {"classroom", {"in front of the whiteboard", "beside the first row of desks"}},
      {"closet", {"in front of the shelves", "just inside the door"}},
      {"corridor", {"at the end of the corridor", "by the painting on the wall"}},
      {"dining booth", {"next to the booth table", "by the window seat"}},
      {"dining room", {"next to the dining table", "beside the sideboard"}},
      {"entryway", {"next to the front door", "by the coat rack"}},
      {"family room", {"in front of the sofa", "next to the fireplace"}},
      {"garage", {"next to the car", "by the workbench"}},
      {"gym", {"next to the treadmill", "in front of the mirror"}},
      {"hallway", {"at the end of the hallway", "next to the side table"}},
      {"kitchen", {"in front of the sink", "next to the refrigerator"}},
      {"laundry room", {"in front of the washing machine", "next to the dryer"}},
      {"library", {"in front of the bookshelf", "next to the reading chair"}},
      {"living room", {"in front of the television", "next to the couch"}},
      {"lounge", {"next to the armchairs", "by the coffee table"}},
      {"meeting room", {"at the head of the table", "in front of the screen"}},
      {"office", {"next to the desk", "in front of the filing cabinet"}},
      {"outdoor area", {"next to the bench", "by the planter"}},
      {"porch", {"next to the rocking chair", "by the steps"}},
      {"recreation room", {"next to the pool table", "by the dartboard"}},
      {"spa", {"next to the sauna door", "by the towel rack"}},
      {"stairs", {"at the bottom of the stairs", "next to the banister"}},
      {"storage room", {"in front of the boxes", "next to the shelves"}},
      {"toilet", {"in front of the toilet", "next to the small sink"}},
      {"tv room", {"in front of the television", "next to the recliner"}},
      {"utility room", {"next to the water heater", "by the breaker panel"}},
  };
  static const std::vector<std::string> kGeneric = {"in the middle of the room", "just inside the entrance"};
  auto it = kBank.find(region_type);
  return it == kBank.end() ? kGeneric : it->second;
}

}  // namespace fpnav::dataset
