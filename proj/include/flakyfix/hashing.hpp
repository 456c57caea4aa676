#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace flakyfix {

/// Lowercase hex SHA-256 digest of `data`.
std::string sha256_hex(std::string_view data);

/// SHA-256 of a file's bytes; throws flakyfix::Error if unreadable.
std::string sha256_file(const std::string& path);

/// 64-bit FNV-1a. Stable across platforms; used for feature hashing.
constexpr std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace flakyfix
