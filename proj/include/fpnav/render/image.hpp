#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace fpnav::render {

using Rgb = std::array<std::uint8_t, 3>;

// Row-major 8-bit RGB raster.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {0, 0, 0});

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }
  const std::vector<std::uint8_t>& data() const { return data_; }

  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
  // Bounds-checked write; out-of-range pixels are ignored.
  void plot(int x, int y, Rgb c) {
    if (in_bounds(x, y)) set(x, y, c);
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// Nearest-neighbour resize preserving aspect ratio to the given height.
Image resize_to_height(const Image& src, int height);

void fill_rect(Image& img, int x0, int y0, int x1, int y1, Rgb c);
// Bresenham line; returns the number of pixels written.
std::size_t draw_line(Image& img, int x0, int y0, int x1, int y1, Rgb c, int thickness = 1);
void draw_number(Image& img, int cx, int cy, int value, Rgb c, int scale);

// Deterministic PNG (8-bit RGB, filter 0, fixed deflate level, no
// ancillary chunks).
std::vector<std::uint8_t> encode_png(const Image& img);
// Decodes the subset written by encode_png. Throws ParseError otherwise.
Image decode_png(std::span<const std::uint8_t> bytes);
void write_png(const std::filesystem::path& path, const Image& img);

}  // namespace fpnav::render
