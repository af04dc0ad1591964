#include "cvbell/cli/range.hpp"

#include <cmath>
#include <cstdlib>

namespace cvbell::cli {
namespace {

double parse_number(const std::string& s, const std::string& whole) {
  if (s.empty()) throw ConfigError("range '" + whole + "': empty field");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ConfigError("range '" + whole + "': '" + s + "' is not a finite number");
  }
  return v;
}

}  // namespace

std::vector<double> Range::values() const {
  if (count == 1) return {lo};
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    // log10 interpolation keeps decades exact, e.g. 1:1000(log):4 -> 1, 10, 100, 1000
    v[i] = log ? std::pow(10.0, std::log10(lo) + f * (std::log10(hi) - std::log10(lo))) : lo + (hi - lo) * f;
  }
  v.back() = hi;
  return v;
}

Range parse_range(const std::string& text) {
  Range r;
  r.text = text;
  std::string s = text;
  const std::string tag = "(log)";
  if (const auto pos = s.find(tag); pos != std::string::npos) {
    r.log = true;
    s.erase(pos, tag.size());
    if (s.find(tag) != std::string::npos) throw ConfigError("range '" + text + "': repeated (log)");
  }
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = s.find(':', start);
    parts.push_back(s.substr(start, colon == std::string::npos ? std::string::npos : colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (parts.size() == 1) {
    if (r.log) throw ConfigError("range '" + text + "': (log) needs lo:hi:count");
    r.lo = r.hi = parse_number(parts[0], text);
    return r;
  }
  if (parts.size() != 3) throw ConfigError("range '" + text + "': expected lo:hi:count");
  r.lo = parse_number(parts[0], text);
  r.hi = parse_number(parts[1], text);
  const double c = parse_number(parts[2], text);
  if (c != std::floor(c) || c < 2 || c > 100000) {
    throw ConfigError("range '" + text + "': count must be an integer in [2, 100000]");
  }
  r.count = static_cast<int>(c);
  if (!(r.lo < r.hi)) throw ConfigError("range '" + text + "': lo must be < hi");
  if (r.log && !(r.lo > 0.0)) throw ConfigError("range '" + text + "': (log) spacing needs lo > 0");
  return r;
}

}  // namespace cvbell::cli
