#pragma once

#include <stdexcept>
#include <string>

namespace hwid {

/// Raised for bad input data or usage: unreadable files, invalid manifests,
/// contract violations the caller can fix.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hwid
