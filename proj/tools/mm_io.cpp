#include "mm_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace trscli {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '%') continue;
    return true;
  }
  return false;
}

}  // namespace

DenseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file: " + path);

  std::string banner;
  if (!std::getline(in, banner)) throw ParseError("empty matrix file: " + path);
  std::istringstream bs(banner);
  std::string tag, object, format, field, symmetry;
  bs >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || lower(object) != "matrix")
    throw ParseError("not a Matrix Market file: " + path);
  if (lower(format) != "coordinate" || lower(field) != "real")
    throw ParseError("expected 'coordinate real' data in " + path);
  const std::string sym = lower(symmetry);
  if (sym != "symmetric" && sym != "general")
    throw ParseError("expected symmetric or general symmetry in " + path);

  std::string line;
  if (!next_data_line(in, line)) throw ParseError("missing size line in " + path);
  int64_t rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream ls(line);
    if (!(ls >> rows >> cols >> nnz)) throw ParseError("bad size line in " + path);
  }
  if (rows != cols || rows <= 0) throw ParseError("matrix must be square: " + path);

  DenseMatrix m;
  m.n = rows;
  m.values.assign(size_t(rows * rows), 0.0);
  for (int64_t k = 0; k < nnz; ++k) {
    if (!next_data_line(in, line)) throw ParseError("truncated entry list in " + path);
    std::istringstream ls(line);
    int64_t i = 0, j = 0;
    double v = 0.0;
    if (!(ls >> i >> j >> v)) throw ParseError("bad entry line in " + path);
    if (i < 1 || i > rows || j < 1 || j > rows)
      throw ParseError("entry index out of range in " + path);
    m.at(i - 1, j - 1) = v;
    if (sym == "symmetric") m.at(j - 1, i - 1) = v;
  }
  return m;
}

std::vector<double> read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open vector file: " + path);
  std::vector<double> v;
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '%') continue;
    std::istringstream ls(line);
    double value = 0.0;
    if (!(ls >> value)) throw ParseError("bad vector line in " + path + ": " + line);
    std::string extra;
    if (ls >> extra) throw ParseError("one real per line expected in " + path);
    v.push_back(value);
  }
  if (v.empty()) throw ParseError("vector file is empty: " + path);
  return v;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::string token;
  std::istringstream ts(text);
  while (std::getline(ts, token, ',')) {
    if (token.empty()) continue;
    size_t used = 0;
    const double v = std::stod(token, &used);
    while (used < token.size() && std::isspace(static_cast<unsigned char>(token[used])))
      ++used;
    if (used != token.size()) throw ParseError("bad number in list: " + token);
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("empty number list");
  return out;
}

}  // namespace trscli
