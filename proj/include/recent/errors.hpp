#pragma once

#include <stdexcept>
#include <string>

namespace recent {

// Malformed input data (bad JSON, wrong field types).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally well-formed input that violates a domain invariant.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unknown relation / missing key lookups.
struct LookupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Model artifact with an unsupported format_version.
struct VersionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace recent
