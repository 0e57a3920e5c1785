#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "travwave/common.hpp"

namespace travwave::io {

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex16(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Writes through a sibling temp file and renames it into place.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) throw Error("short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

/// Plot-ready table; doubles go out with 17 significant digits.
class Table {
 public:
  using Cell = std::variant<double, long long, std::string>;

  explicit Table(std::vector<std::string> columns) : cols_(std::move(columns)) {}

  void add(std::vector<Cell> row) {
    if (row.size() != cols_.size()) throw Error("table row has the wrong number of cells");
    rows_.push_back(std::move(row));
  }

  [[nodiscard]] std::size_t rows() const { return rows_.size(); }

  [[nodiscard]] std::string csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < cols_.size(); ++i) os << (i ? "," : "") << cols_[i];
    os << '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) os << ',';
        if (auto d = std::get_if<double>(&r[i])) os << fmt17(*d);
        else if (auto n = std::get_if<long long>(&r[i])) os << *n;
        else os << std::get<std::string>(r[i]);
      }
      os << '\n';
    }
    return os.str();
  }

 private:
  std::vector<std::string> cols_;
  std::vector<std::vector<Cell>> rows_;
};

/// Serialises with every double at 17 significant digits.
inline std::string dump17(const nlohmann::ordered_json& j, int indent = 2, int depth = 0) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string end(static_cast<std::size_t>(indent * depth), ' ');
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (!std::isfinite(x)) return "null";
    std::string s = fmt17(x);
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
  }
  if (j.is_object()) {
    if (j.empty()) return "{}";
    std::string s = "{\n";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) s += ",\n";
      first = false;
      s += pad + nlohmann::ordered_json(k).dump() + ": " + dump17(v, indent, depth + 1);
    }
    return s + "\n" + end + "}";
  }
  if (j.is_array()) {
    if (j.empty()) return "[]";
    std::string s = "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ",\n" : "") + pad + dump17(j[i], indent, depth + 1);
    return s + "\n" + end + "]";
  }
  return j.dump();
}

/// One run's output directory. File names carry the FNV-1a hash of the resolved config.
class RunOutput {
 public:
  RunOutput(std::filesystem::path dir, const nlohmann::ordered_json& resolved_config)
      : dir_(std::move(dir)), config_(resolved_config) {
    auto keyed = config_;
    keyed.erase("output");
    keyed.erase("threads");
    hash_ = hex16(fnv1a(dump17(keyed)));
  }

  [[nodiscard]] const std::string& hash() const { return hash_; }
  [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }

  std::filesystem::path table(const std::string& name, const Table& t) {
    const auto path = dir_ / (name + "-" + hash_ + ".csv");
    write_atomic(path, t.csv());
    files_.push_back(path.filename().string());
    return path;
  }

  std::filesystem::path document(const std::string& name, const nlohmann::ordered_json& j) {
    const auto path = dir_ / (name + "-" + hash_ + ".json");
    write_atomic(path, dump17(j) + "\n");
    files_.push_back(path.filename().string());
    return path;
  }

  /// Summary plus manifest; the manifest can be fed back as a config.
  std::filesystem::path finish(const nlohmann::ordered_json& summary, int exit_code) {
    document("summary", summary);
    nlohmann::ordered_json m;
    m["manifest_version"] = 1;
    m["config_hash"] = hash_;
    m["exit_code"] = exit_code;
    m["config"] = config_;
    m["summary"] = summary;
    m["files"] = files_;
    const auto path = dir_ / ("manifest-" + hash_ + ".json");
    write_atomic(path, dump17(m) + "\n");
    return path;
  }

 private:
  std::filesystem::path dir_;
  nlohmann::ordered_json config_;
  std::string hash_;
  std::vector<std::string> files_;
};

}  // namespace travwave::io
