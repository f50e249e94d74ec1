#pragma once

#include <stdexcept>
#include <string>

namespace primbound {

/// A computation refused to run because an input exceeds a configured ceiling.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed (e.g. a merge ratio above one).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A cached table belongs to a different basis or count kind.
class FingerprintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cache file could not be parsed.
class CacheFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace primbound
