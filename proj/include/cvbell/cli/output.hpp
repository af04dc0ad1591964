#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace cvbell::cli {

inline constexpr const char* kToolName = "cvbell";
inline constexpr const char* kToolVersion = "0.1.0";

/// SHA-1 of "blob <size>\0<content>", the object id git gives `content`.
std::string git_blob_hash(const std::string& content);

/// Canonical (sorted-key, compact) serialisation used for hashing.
std::string canonical(const nlohmann::json& config);

using Cell = std::variant<double, long long, std::string, bool>;

struct Column {
  std::string name;
  std::string unit;  // "" when dimensionless
};

/// A result table with the metadata every output file carries.
struct Table {
  std::string command;
  nlohmann::json config;  // fully resolved
  std::uint64_t seed = 0;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::json extra = nlohmann::json::object();  // appended summaries
};

void write_csv(const Table& t, std::ostream& out);
void write_json(const Table& t, std::ostream& out);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace cvbell::cli
