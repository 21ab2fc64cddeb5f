#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace fpnav {

std::string read_text_file(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames over `path`. Parent
// directories are created as needed.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// 64-bit FNV-1a; stable across platforms, used for content-addressed ids.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

void log_warning(std::string_view message);

}  // namespace fpnav
