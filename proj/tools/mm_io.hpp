#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace trscli {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DenseMatrix {
  int64_t n = 0;
  std::vector<double> values;  // row-major n*n

  double& at(int64_t i, int64_t j) { return values[size_t(i * n + j)]; }
  double at(int64_t i, int64_t j) const { return values[size_t(i * n + j)]; }
};

/// Matrix Market reader for square real matrices in coordinate form.
/// Accepts the symmetric qualifier (mirror-filled) and general; the header
/// line must match the standard banner exactly up to case.
DenseMatrix read_matrix_market(const std::string& path);

/// Plain vector file: one real per line; blank lines and %-comments skipped.
std::vector<double> read_vector_file(const std::string& path);

/// Comma-separated list of reals (inline diagonal / eps ladders).
std::vector<double> parse_real_list(const std::string& text);

}  // namespace trscli
