#include "bgpburst/ingest/decompress.hpp"

#include <boost/iostreams/copy.hpp>
#include <boost/iostreams/device/array.hpp>
#include <boost/iostreams/device/back_inserter.hpp>
#include <boost/iostreams/filter/bzip2.hpp>
#include <boost/iostreams/filter/gzip.hpp>
#include <boost/iostreams/filtering_stream.hpp>

#include <fstream>
#include <iterator>

#include "bgpburst/error.hpp"

namespace bgpburst::ingest {

namespace io = boost::iostreams;

Compression detect_compression(std::span<const std::uint8_t> head) noexcept {
  if (head.size() >= 2 && head[0] == 0x1f && head[1] == 0x8b)
    return Compression::gzip;
  if (head.size() >= 3 && head[0] == 'B' && head[1] == 'Z' && head[2] == 'h')
    return Compression::bzip2;
  return Compression::none;
}

std::vector<std::uint8_t> decompress(std::span<const std::uint8_t> data) {
  auto kind = detect_compression(data);
  if (kind == Compression::none)
    return {data.begin(), data.end()};
  std::vector<char> out;
  try {
    io::filtering_istreambuf in;
    if (kind == Compression::gzip)
      in.push(io::gzip_decompressor{});
    else
      in.push(io::bzip2_decompressor{});
    in.push(io::array_source{reinterpret_cast<const char*>(data.data()),
                             data.size()});
    io::copy(in, io::back_inserter(out));
  } catch (const std::exception& e) {
    throw Error(std::string{"decompression failed: "} + e.what());
  }
  return {out.begin(), out.end()};
}

std::vector<std::uint8_t> read_input(const std::filesystem::path& path) {
  std::ifstream f{path, std::ios::binary};
  if (!f)
    throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> raw{std::istreambuf_iterator<char>{f},
                                std::istreambuf_iterator<char>{}};
  if (f.bad())
    throw Error("cannot read " + path.string());
  return decompress(raw);
}

} // namespace bgpburst::ingest
