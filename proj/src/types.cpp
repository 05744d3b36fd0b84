#include "bgpburst/types.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace bgpburst {

Prefix Prefix::from_bytes(Family family, const std::uint8_t* bytes,
                          std::size_t n, unsigned length) {
  if (length > max_length(family))
    throw std::invalid_argument("prefix length " + std::to_string(length)
                                + " exceeds address size");
  Prefix p;
  p.family_ = family;
  p.length_ = static_cast<std::uint8_t>(length);
  auto width = family == Family::v4 ? 4u : 16u;
  std::copy_n(bytes, std::min<std::size_t>(n, width), p.bytes_.begin());
  // Zero host bits.
  for (unsigned i = 0; i < 16; ++i) {
    auto bit = i * 8;
    if (bit >= length)
      p.bytes_[i] = 0;
    else if (bit + 8 > length)
      p.bytes_[i] &= static_cast<std::uint8_t>(0xff << (8 - (length - bit)));
  }
  return p;
}

Prefix Prefix::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos)
    throw std::invalid_argument("prefix '" + std::string{text}
                                + "' lacks a mask length");
  std::string addr{text.substr(0, slash)};
  auto len_text = text.substr(slash + 1);
  unsigned length = 0;
  auto [ptr, ec] = std::from_chars(len_text.data(),
                                   len_text.data() + len_text.size(), length);
  if (ec != std::errc{} || ptr != len_text.data() + len_text.size()
      || len_text.empty())
    throw std::invalid_argument("bad mask length in '" + std::string{text}
                                + "'");
  std::array<std::uint8_t, 16> buf{};
  if (inet_pton(AF_INET, addr.c_str(), buf.data()) == 1)
    return from_bytes(Family::v4, buf.data(), 4, length);
  if (inet_pton(AF_INET6, addr.c_str(), buf.data()) == 1)
    return from_bytes(Family::v6, buf.data(), 16, length);
  throw std::invalid_argument("bad address in prefix '" + std::string{text}
                              + "'");
}

std::string Prefix::to_string() const {
  char buf[INET6_ADDRSTRLEN];
  auto af = family_ == Family::v4 ? AF_INET : AF_INET6;
  inet_ntop(af, bytes_.data(), buf, sizeof(buf));
  return std::string{buf} + "/" + std::to_string(length_);
}

} // namespace bgpburst
