#pragma once

#include "lhv/quantum.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace lhv::io {

// Plain-text state records: one state per line, 15 whitespace-separated reals
// (a: 3, b: 3, T: 9 row-major). '#' starts a comment.
std::vector<quantum::BlochTwoQubit> read_states(const std::filesystem::path& path);
void write_states(const std::filesystem::path& path,
                  const std::vector<quantum::BlochTwoQubit>& states);

std::string format_state(const quantum::BlochTwoQubit& s);
quantum::BlochTwoQubit parse_state(const std::string& line);

// RFC-4180-style CSV: fields containing comma, quote or newline are quoted,
// embedded quotes doubled.
std::string csv_escape(const std::string& field);
std::string csv_row(const std::vector<std::string>& fields);

// Shortest round-trip decimal form; used for all numeric output so that
// reproducible runs are byte-identical.
std::string format_double(double v);

// SHA-256 of a byte string / file, lowercase hex.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

// Flat key = value configuration files. '#' comments; keys must be unique.
class Config {
 public:
  Config() = default;
  static Config parse_file(const std::filesystem::path& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  // Keys read so far; unknown-key detection for strict loading.
  const std::map<std::string, std::string>& values() const { return values_; }
  std::vector<std::string> unused_keys() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> touched_;
};

} // namespace lhv::io
