#pragma once

#include <stdexcept>
#include <string>

namespace socsim {

// Malformed input file. Messages carry "path:line:" prefixes where known.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally valid input that violates a model precondition
// (duplicate link, negative coefficient, spectral radius >= 1, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace socsim
