#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mm_io.hpp"
#include "report.hpp"

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = std::string("trscond_test_") + std::to_string(counter++) + ".tmp";
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("matrix market symmetric coordinate files mirror-fill") {
  TempFile f(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "% test fixture\n"
      "3 3 4\n"
      "1 1 2.0\n"
      "2 2 1.5\n"
      "3 1 -0.25\n"
      "3 3 1.0\n");
  auto m = trscli::read_matrix_market(f.path);
  CHECK(m.n == 3);
  CHECK(m.at(0, 0) == 2.0);
  CHECK(m.at(2, 0) == -0.25);
  CHECK(m.at(0, 2) == -0.25);  // mirror of the lower-triangle entry
  CHECK(m.at(1, 0) == 0.0);
}

TEST_CASE("matrix market general files are taken verbatim") {
  TempFile f(
      "%%MatrixMarket matrix coordinate real general\n"
      "2 2 3\n"
      "1 1 1.0\n"
      "1 2 0.5\n"
      "2 1 0.5\n");
  auto m = trscli::read_matrix_market(f.path);
  CHECK(m.at(0, 1) == 0.5);
  CHECK(m.at(1, 0) == 0.5);
  CHECK(m.at(1, 1) == 0.0);
}

TEST_CASE("matrix market rejects malformed input") {
  TempFile bad_banner("%%NotMatrixMarket x y z w\n1 1 0\n");
  CHECK_THROWS_AS(trscli::read_matrix_market(bad_banner.path), trscli::ParseError);
  TempFile bad_field(
      "%%MatrixMarket matrix coordinate complex symmetric\n1 1 1\n1 1 2.0\n");
  CHECK_THROWS_AS(trscli::read_matrix_market(bad_field.path), trscli::ParseError);
  TempFile not_square("%%MatrixMarket matrix coordinate real general\n2 3 1\n1 1 2.0\n");
  CHECK_THROWS_AS(trscli::read_matrix_market(not_square.path), trscli::ParseError);
  TempFile truncated("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 2.0\n");
  CHECK_THROWS_AS(trscli::read_matrix_market(truncated.path), trscli::ParseError);
  TempFile out_of_range(
      "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 2.0\n");
  CHECK_THROWS_AS(trscli::read_matrix_market(out_of_range.path), trscli::ParseError);
}

TEST_CASE("vector files take one real per line") {
  TempFile f("% heading comment\n1.5\n\n-2.25e-3\n42\n");
  auto v = trscli::read_vector_file(f.path);
  REQUIRE(v.size() == 3);
  CHECK(v[0] == 1.5);
  CHECK(v[1] == -2.25e-3);
  CHECK(v[2] == 42.0);

  TempFile two_per_line("1.0 2.0\n");
  CHECK_THROWS_AS(trscli::read_vector_file(two_per_line.path), trscli::ParseError);
  TempFile garbage("abc\n");
  CHECK_THROWS_AS(trscli::read_vector_file(garbage.path), trscli::ParseError);
}

TEST_CASE("real lists parse and reject trailing junk") {
  auto v = trscli::parse_real_list("1e-3, 2.5,-4");
  REQUIRE(v.size() == 3);
  CHECK(v[1] == 2.5);
  CHECK_THROWS_AS(trscli::parse_real_list("1.0x,2"), trscli::ParseError);
}

TEST_CASE("reports print 17 significant digits and round-trip losslessly") {
  trscli::Report rep;
  const double value = 0.1 + 0.2;  // not representable exactly
  rep.put("scalar", value);
  std::ostringstream out;
  rep.write(out);
  const std::string text = out.str();
  const auto pos = text.find("scalar = ");
  REQUIRE(pos != std::string::npos);
  const std::string printed = text.substr(pos + 9, text.find('\n', pos) - pos - 9);
  CHECK(std::stod(printed) == value);  // 17 digits recover the exact double
  CHECK(printed == "0.30000000000000004");
}

TEST_CASE("identical payloads are byte-identical; timings sit at the end") {
  auto make = [](double timing) {
    trscli::Report rep;
    rep.put("a", int64_t(1));
    rep.put("b", 2.5);
    rep.put_timing("timings.ms", timing);
    std::ostringstream out;
    rep.write(out);
    return out.str();
  };
  const std::string r1 = make(10.0), r2 = make(99.0);
  const auto strip = [](const std::string& s) { return s.substr(0, s.rfind("timings")); };
  CHECK(r1 != r2);
  CHECK(strip(r1) == strip(r2));
  CHECK(r1.rfind("timings.ms") > r1.rfind("b = "));
}

TEST_CASE("input hash separates payloads and is stable") {
  trscli::InputHash h1, h2, h3;
  h1.mix(std::vector<double>{1.0, 2.0});
  h2.mix(std::vector<double>{1.0, 2.0});
  h3.mix(std::vector<double>{1.0, 2.0 + 1e-15});
  CHECK(h1.hex() == h2.hex());
  CHECK(h1.hex() != h3.hex());
  CHECK(h1.hex().size() == 16);
}
