#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace bgpburst::ingest {

enum class Compression { none, gzip, bzip2 };

/// Sniffs the leading magic bytes.
Compression detect_compression(std::span<const std::uint8_t> head) noexcept;

/// Decompresses gzip or bzip2 data; returns a copy for uncompressed input.
std::vector<std::uint8_t> decompress(std::span<const std::uint8_t> data);

/// Reads a whole file and transparently decompresses it.
/// Throws bgpburst::Error when the file cannot be read or decoded.
std::vector<std::uint8_t> read_input(const std::filesystem::path& path);

} // namespace bgpburst::ingest
