#pragma once

#include <stdexcept>
#include <string>

namespace xcsbm {

/// A model or configuration parameter is outside its admissible range.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Input is well-formed but degenerate (empty class, zero degree, zero denominator).
struct DegenerateInputError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Matrix/vector dimensions do not line up.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// Text input could not be parsed. `line` is 1-based, 0 when not applicable.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t line_no)
      : std::runtime_error(line_no ? what + " (line " + std::to_string(line_no) + ")" : what),
        line(line_no) {}
  std::size_t line;
};

}  // namespace xcsbm
