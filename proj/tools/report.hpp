#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace trscli {

/// Deterministic key-tree report: insertion-ordered `key = value` lines with
/// every scalar printed at 17 significant digits, so byte-identical inputs
/// produce byte-identical payloads. Timing lines are appended last and are
/// the only nondeterministic part.
class Report {
 public:
  explicit Report(int schema_version = 1);

  void put(const std::string& key, const std::string& value);
  void put(const std::string& key, double value);
  void put(const std::string& key, int64_t value);
  void put(const std::string& key, uint64_t value);
  void put_vector(const std::string& key, const double* data, int64_t n);
  void put_timing(const std::string& key, double milliseconds);

  void write(std::ostream& out) const;
  bool write_file(const std::string& path) const;

  static std::string format_scalar(double value);

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
  std::vector<std::pair<std::string, std::string>> timings_;
};

/// FNV-1a over the canonical little-endian byte image of the problem data.
class InputHash {
 public:
  void mix(const void* data, size_t bytes);
  void mix(double v) { mix(&v, sizeof v); }
  void mix(int64_t v) { mix(&v, sizeof v); }
  void mix(uint64_t v) { mix(&v, sizeof v); }
  void mix(const std::string& s) { mix(s.data(), s.size()); }
  void mix(const std::vector<double>& v) { mix(v.data(), v.size() * sizeof(double)); }
  std::string hex() const;

 private:
  uint64_t state_ = 1469598103934665603ull;
};

}  // namespace trscli
