#include "report.hpp"

#include <cstdio>
#include <fstream>

namespace trscli {

Report::Report(int schema_version) {
  put("schema", "trscond.report");
  put("schema_version", int64_t(schema_version));
}

std::string Report::format_scalar(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void Report::put(const std::string& key, const std::string& value) {
  lines_.push_back({key, value});
}

void Report::put(const std::string& key, double value) {
  lines_.push_back({key, format_scalar(value)});
}

void Report::put(const std::string& key, int64_t value) {
  lines_.push_back({key, std::to_string(value)});
}

void Report::put(const std::string& key, uint64_t value) {
  lines_.push_back({key, std::to_string(value)});
}

void Report::put_vector(const std::string& key, const double* data, int64_t n) {
  std::string joined;
  for (int64_t i = 0; i < n; ++i) {
    if (i) joined += ' ';
    joined += format_scalar(data[i]);
  }
  lines_.push_back({key, joined});
}

void Report::put_timing(const std::string& key, double milliseconds) {
  timings_.push_back({key, format_scalar(milliseconds)});
}

void Report::write(std::ostream& out) const {
  for (const auto& [key, value] : lines_) out << key << " = " << value << "\n";
  for (const auto& [key, value] : timings_) out << key << " = " << value << "\n";
}

bool Report::write_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) return false;
  write(out);
  return bool(out);
}

void InputHash::mix(const void* data, size_t bytes) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < bytes; ++i) {
    state_ ^= p[i];
    state_ *= 1099511628211ull;
  }
}

std::string InputHash::hex() const {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
  return buf;
}

}  // namespace trscli
