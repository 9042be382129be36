// Exception hierarchy shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace flange {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// The requested bounding box cannot determine the module being built
/// (a summand's corner degree would touch or leave the box interior).
class BoxNotDetermining : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed.  This signals a bug in the
/// library, never a problem with user input.
class AssertionFailure : public Error {
 public:
  using Error::Error;
};

/// A resolution did not terminate within the global-dimension bound.
class LengthOverflow : public Error {
 public:
  using Error::Error;
};

/// The operation only applies to single-parameter modules (n == 1).
class WrongDimension : public Error {
 public:
  using Error::Error;
};

/// A relation carries a nonzero coefficient on a generator whose degree
/// does not divide the relation's degree.
class DegreeViolation : public Error {
 public:
  using Error::Error;
};

/// Failure while reading one of the text formats.  Carries a position
/// (line/column for the presentation format, a JSON path for grid files).
class ParseError : public Error {
 public:
  ParseError(int line_, int column_, const std::string& expected)
      : Error("parse error at line " + std::to_string(line_) + ", column " +
              std::to_string(column_) + ": expected " + expected),
        line(line_),
        column(column_) {}

  ParseError(const std::string& json_path, const std::string& what)
      : Error("schema violation at " + json_path + ": " + what),
        line(0),
        column(0),
        path(json_path) {}

  int line;
  int column;
  std::string path;  // empty for line/column errors
};

}  // namespace flange
