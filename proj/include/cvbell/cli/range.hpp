#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cvbell::cli {

/// Raised for any invalid user configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar "x" or a grid "lo:hi:count", optionally "lo:hi(log):count" or
/// "lo:hi:count(log)" for geometric spacing.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
  bool log = false;
  std::string text;

  std::vector<double> values() const;
};

Range parse_range(const std::string& text);

}  // namespace cvbell::cli
