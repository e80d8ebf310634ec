#pragma once

#include <stdexcept>
#include <string>

namespace pqr {

/// Invalid or malformed input data (files, flags, corpora). Maps to exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Usage errors: bad parameter combinations caught before any work starts.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pqr
