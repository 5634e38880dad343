#pragma once

#include <stdexcept>
#include <string>

namespace qce {

/// Malformed input document (JSON spec files, flag values).
struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

/// A state or coarse-graining violating one of its declared invariants.
struct invalid_state_error : std::runtime_error {
  explicit invalid_state_error(const std::string& what) : std::runtime_error(what) {}
};

/// Violation of an internal consistency guarantee (e.g. an entropy gap
/// coming out significantly negative, or an eigensolver failing to converge).
struct internal_error : std::runtime_error {
  explicit internal_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qce
