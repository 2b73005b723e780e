#pragma once

#include <stdexcept>
#include <string>

namespace ltldstar {

/// Caller violated an operation precondition (bad index, mismatched universe, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input text. Carries the 1-based position of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    return std::to_string(line) + ":" + std::to_string(column) + ": " + what;
  }
  int line_;
  int column_;
};

/// Well-formed HOA that uses something outside the supported subset.
class UnsupportedFeature : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Edge lookup failed for a delete/reweight/apply request.
class UnknownEdge : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// No accepting state has both a finite prefix and a finite loop.
class NoAcceptingRun : public std::runtime_error {
 public:
  NoAcceptingRun() : std::runtime_error("no accepting run") {}
  using std::runtime_error::runtime_error;
};

}  // namespace ltldstar
