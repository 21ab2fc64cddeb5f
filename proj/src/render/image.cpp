#include "fpnav/render/image.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <string>

#include <zlib.h>

#include "fpnav/error.hpp"
#include "fpnav/io.hpp"

namespace fpnav::render {

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw Error("negative image size");
  data_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill[0];
    data_[i + 1] = fill[1];
    data_[i + 2] = fill[2];
  }
}

Rgb Image::at(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  return {data_[i], data_[i + 1], data_[i + 2]};
}

void Image::set(int x, int y, Rgb c) {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  data_[i] = c[0];
  data_[i + 1] = c[1];
  data_[i + 2] = c[2];
}

Image resize_to_height(const Image& src, int height) {
  if (src.empty() || height <= 0) throw Error("cannot resize an empty image");
  if (src.height() == height) return src;
  const int width = std::max(1, static_cast<int>(
                                    (static_cast<long long>(src.width()) * height + src.height() / 2) / src.height()));
  Image out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(src.height() - 1, static_cast<int>(static_cast<long long>(y) * src.height() / height));
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(src.width() - 1, static_cast<int>(static_cast<long long>(x) * src.width() / width));
      out.set(x, y, src.at(sx, sy));
    }
  }
  return out;
}

void fill_rect(Image& img, int x0, int y0, int x1, int y1, Rgb c) {
  for (int y = std::max(0, y0); y <= std::min(img.height() - 1, y1); ++y) {
    for (int x = std::max(0, x0); x <= std::min(img.width() - 1, x1); ++x) img.set(x, y, c);
  }
}

std::size_t draw_line(Image& img, int x0, int y0, int x1, int y1, Rgb c, int thickness) {
  const int dx = std::abs(x1 - x0);
  const int dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1;
  const int sy = y0 < y1 ? 1 : -1;
  const int lo = -(thickness - 1) / 2;
  const int hi = thickness / 2;
  int err = dx + dy;
  std::size_t written = 0;
  while (true) {
    for (int oy = lo; oy <= hi; ++oy) {
      for (int ox = lo; ox <= hi; ++ox) img.plot(x0 + ox, y0 + oy, c);
    }
    ++written;
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
  return written;
}

namespace {

// 3x5 digit glyphs, one row per nibble (bit 2 = left column).
constexpr std::uint8_t kDigits[10][5] = {
    {7, 5, 5, 5, 7}, {2, 6, 2, 2, 7}, {7, 1, 7, 4, 7}, {7, 1, 7, 1, 7}, {5, 5, 7, 1, 1},
    {7, 4, 7, 1, 7}, {7, 4, 7, 5, 7}, {7, 1, 1, 1, 1}, {7, 5, 7, 5, 7}, {7, 5, 7, 1, 7},
};

}  // namespace

void draw_number(Image& img, int cx, int cy, int value, Rgb c, int scale) {
  const std::string text = std::to_string(value);
  const int advance = 4 * scale;
  const int total_w = static_cast<int>(text.size()) * advance - scale;
  const int x_start = cx - total_w / 2;
  const int y_start = cy - (5 * scale) / 2;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') continue;
    const auto& glyph = kDigits[text[i] - '0'];
    const int gx = x_start + static_cast<int>(i) * advance;
    for (int row = 0; row < 5; ++row) {
      for (int col = 0; col < 3; ++col) {
        if (glyph[row] & (4 >> col)) {
          fill_rect(img, gx + col * scale, y_start + row * scale, gx + col * scale + scale - 1,
                    y_start + row * scale + scale - 1, c);
        }
      }
    }
  }
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) | (std::uint32_t{b[at + 2]} << 8) |
         std::uint32_t{b[at + 3]};
}

void put_chunk(std::vector<std::uint8_t>& out, const char* type, const std::vector<std::uint8_t>& payload) {
  put_u32(out, static_cast<std::uint32_t>(payload.size()));
  const std::size_t type_at = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), payload.begin(), payload.end());
  const uLong crc = crc32(0L, out.data() + type_at, static_cast<uInt>(payload.size() + 4));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

constexpr std::uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& img) {
  if (img.empty()) throw Error("cannot encode an empty image");
  std::vector<std::uint8_t> raw;
  const std::size_t stride = static_cast<std::size_t>(img.width()) * 3;
  raw.reserve((stride + 1) * img.height());
  for (int y = 0; y < img.height(); ++y) {
    raw.push_back(0);
    const auto* row = img.data().data() + y * stride;
    raw.insert(raw.end(), row, row + stride);
  }
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> compressed(bound);
  if (compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
    throw Error("deflate failed");
  }
  compressed.resize(bound);

  std::vector<std::uint8_t> out(std::begin(kSignature), std::end(kSignature));
  std::vector<std::uint8_t> ihdr;
  put_u32(ihdr, static_cast<std::uint32_t>(img.width()));
  put_u32(ihdr, static_cast<std::uint32_t>(img.height()));
  ihdr.insert(ihdr.end(), {8, 2, 0, 0, 0});  // depth 8, RGB, deflate, filter 0, no interlace
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT", compressed);
  put_chunk(out, "IEND", {});
  return out;
}

Image decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kSignature, 8) != 0) throw ParseError("not a PNG file");
  std::size_t at = 8;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> idat;
  while (at + 12 <= bytes.size()) {
    const std::uint32_t len = get_u32(bytes, at);
    if (at + 12 + len > bytes.size()) throw ParseError("truncated PNG chunk");
    const std::string type(reinterpret_cast<const char*>(bytes.data() + at + 4), 4);
    const auto payload = bytes.subspan(at + 8, len);
    if (type == "IHDR") {
      width = static_cast<int>(get_u32(payload, 0));
      height = static_cast<int>(get_u32(payload, 4));
      if (payload[8] != 8 || payload[9] != 2 || payload[12] != 0) throw ParseError("unsupported PNG format");
    } else if (type == "IDAT") {
      idat.insert(idat.end(), payload.begin(), payload.end());
    } else if (type == "IEND") {
      break;
    }
    at += 12 + len;
  }
  const std::size_t stride = static_cast<std::size_t>(width) * 3;
  std::vector<std::uint8_t> raw((stride + 1) * height);
  uLongf raw_len = static_cast<uLongf>(raw.size());
  if (uncompress(raw.data(), &raw_len, idat.data(), static_cast<uLong>(idat.size())) != Z_OK ||
      raw_len != raw.size()) {
    throw ParseError("corrupt PNG image data");
  }
  Image img(width, height);
  for (int y = 0; y < height; ++y) {
    if (raw[y * (stride + 1)] != 0) throw ParseError("unsupported PNG row filter");
    for (int x = 0; x < width; ++x) {
      const std::size_t i = y * (stride + 1) + 1 + static_cast<std::size_t>(x) * 3;
      img.set(x, y, {raw[i], raw[i + 1], raw[i + 2]});
    }
  }
  return img;
}

void write_png(const std::filesystem::path& path, const Image& img) {
  const auto bytes = encode_png(img);
  write_file_atomic(path, std::span<const std::uint8_t>(bytes));
}

}  // namespace fpnav::render
