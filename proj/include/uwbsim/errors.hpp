#pragma once

#include <stdexcept>
#include <string>

namespace uwbsim {

/// Invalid argument or violated precondition. Maps to CLI exit code 2.
class ParameterError : public std::invalid_argument {
public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed input file. The message names the offending field.
class FormatError : public std::runtime_error {
public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem failure, always carrying the path. Maps to CLI exit code 3.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace uwbsim
