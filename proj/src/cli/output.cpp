#include "cvbell/cli/output.hpp"

#include <charconv>
#include <cmath>

#include <openssl/sha.h>

namespace cvbell::cli {

std::string git_blob_hash(const std::string& content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob.push_back('\0');
  blob += content;
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(blob.data()), blob.size(), digest);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char c : digest) {
    out.push_back(hex[c >> 4]);
    out.push_back(hex[c & 15]);
  }
  return out;
}

std::string canonical(const nlohmann::json& config) { return config.dump(); }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  return std::get<std::string>(c);
}

nlohmann::json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json();
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  if (const auto* b = std::get_if<bool>(&c)) return *b;
  return std::get<std::string>(c);
}

}  // namespace

void write_csv(const Table& t, std::ostream& out) {
  const std::string cfg = canonical(t.config);
  out << "# tool: " << kToolName << " " << kToolVersion << "\n";
  out << "# command: " << t.command << "\n";
  out << "# config_hash: " << git_blob_hash(cfg) << "\n";
  out << "# seed: " << t.seed << "\n";
  out << "# config: " << cfg << "\n";
  out << "# units:";
  for (const Column& c : t.columns) out << " " << c.name << "=" << (c.unit.empty() ? "1" : c.unit);
  out << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i].name;
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << "\n";
  }
  for (const auto& [key, value] : t.extra.items()) out << "# " << key << ": " << value.dump() << "\n";
}

void write_json(const Table& t, std::ostream& out) {
  nlohmann::json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = t.command;
  j["config_hash"] = git_blob_hash(canonical(t.config));
  j["seed"] = t.seed;
  j["config"] = t.config;
  nlohmann::json cols = nlohmann::json::array();
  for (const Column& c : t.columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
  j["columns"] = cols;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const Cell& c : row) r.push_back(cell_json(c));
    rows.push_back(r);
  }
  j["rows"] = rows;
  for (const auto& [key, value] : t.extra.items()) j[key] = value;
  out << j.dump(2) << "\n";
}

}  // namespace cvbell::cli
