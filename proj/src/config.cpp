#include "bgpburst/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace bgpburst {

namespace {

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view text) {
  double v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size() || text.empty())
    throw ConfigError("config key '" + std::string{key}
                      + "': not a number: '" + std::string{text} + "'");
  return v;
}

std::size_t to_count(std::string_view key, std::string_view text) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size() || text.empty())
    throw ConfigError("config key '" + std::string{key}
                      + "': not a nonnegative integer: '" + std::string{text}
                      + "'");
  return v;
}

} // namespace

void apply_config_entry(DetectorConfig& c, std::string_view key,
                        std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "r") {
    if (auto slash = value.find('/'); slash != std::string_view::npos) {
      auto den = to_double(key, trim(value.substr(slash + 1)));
      if (den == 0)
        throw ConfigError("config key 'r': zero denominator");
      c.r = to_double(key, trim(value.substr(0, slash))) / den;
    } else {
      c.r = to_double(key, value);
    }
  } else if (key == "omega") {
    c.omega = to_count(key, value);
  } else if (key == "delta") {
    c.delta = to_double(key, value);
  } else if (key == "warmup") {
    c.warmup = to_count(key, value);
  } else if (key == "variance_floor") {
    c.variance_floor = to_double(key, value);
  } else if (key == "min_events") {
    c.min_events = to_count(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string{key} + "'");
  }
}

DetectorConfig parse_detector_config(std::string_view text,
                                     DetectorConfig base) {
  auto body = trim(text);
  if (!body.empty() && body.front() == '{') {
    auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw ConfigError("config is not a valid JSON object");
    for (const auto& [key, v] : j.items()) {
      std::string value = v.is_string() ? v.get<std::string>() : v.dump();
      apply_config_entry(base, key, value);
    }
  } else {
    std::istringstream in{std::string{text}};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string_view l = line;
      if (auto hash = l.find('#'); hash != std::string_view::npos)
        l = l.substr(0, hash);
      l = trim(l);
      if (l.empty())
        continue;
      auto eq = l.find('=');
      if (eq == std::string_view::npos)
        throw ConfigError("config line " + std::to_string(line_no)
                          + ": expected key = value");
      apply_config_entry(base, l.substr(0, eq), l.substr(eq + 1));
    }
  }
  base.validate();
  return base;
}

DetectorConfig load_detector_config(const std::filesystem::path& path,
                                    DetectorConfig base) {
  std::ifstream f{path};
  if (!f)
    throw ConfigError("cannot open config " + path.string());
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_detector_config(buf.str(), base);
}

} // namespace bgpburst
