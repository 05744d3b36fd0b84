#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bgpburst {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input. `position()` is a byte offset for binary input and a
/// 1-based line number for line-delimited input.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t position)
    : Error(what), position_(position) {}

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

/// A statistic is not defined for the given sample (e.g. sigma + mu == 0).
class UndefinedStatistic : public Error {
public:
  using Error::Error;
};

/// Fewer events than a statistic requires.
class InsufficientData : public Error {
public:
  using Error::Error;
};

/// Fewer than the required number of usable null windows.
class InsufficientNullData : public InsufficientData {
public:
  using InsufficientData::InsufficientData;
};

class DegenerateTable : public Error {
public:
  using Error::Error;
};

class OutOfOrder : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class OutOfBounds : public Error {
public:
  using Error::Error;
};

} // namespace bgpburst
