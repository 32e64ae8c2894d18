#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#ifndef TRSCOND_CLI_PATH
#define TRSCOND_CLI_PATH "trscond"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(TRSCOND_CLI_PATH) + " " + args + " 2>&1";
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (size_t got = fread(buf.data(), 1, buf.size(), pipe)) res.output.append(buf.data(), got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string grab(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + " = ");
  if (pos == std::string::npos) return {};
  const auto start = pos + key.size() + 3;
  return text.substr(start, text.find('\n', start) - start);
}

std::string strip_timings(const std::string& text) {
  return text.substr(0, text.find("timings."));
}

struct TempFile {
  std::string path;
  TempFile(const std::string& name, const std::string& contents) : path(name) {
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("solve reports the known boundary solution") {
  auto res = run_cli("solve --diag 2,1 --delta 1.1180339887498949");
  CHECK(res.exit_code == 0);
  CHECK(grab(res.output, "solution.case") == "easy_boundary_zero");
  CHECK(grab(res.output, "problem.source") == "diag");
}

TEST_CASE("identical spec and seed give byte-identical payloads") {
  auto r1 = run_cli("margins --gen c --n 500 --seed 11");
  auto r2 = run_cli("margins --gen c --n 500 --seed 11");
  auto r3 = run_cli("margins --gen c --n 500 --seed 12");
  REQUIRE(r1.exit_code == 0);
  CHECK(strip_timings(r1.output) == strip_timings(r2.output));
  CHECK(strip_timings(r1.output) != strip_timings(r3.output));
  CHECK(grab(r1.output, "problem.hash") != grab(r3.output, "problem.hash"));
}

TEST_CASE("matrix market input drives the dense path") {
  TempFile mm("cli_test_a.mtx",
              "%%MatrixMarket matrix coordinate real symmetric\n"
              "2 2 2\n"
              "1 1 2.0\n"
              "2 2 1.0\n");
  TempFile gv("cli_test_g.vec", "1.0\n1.0\n");
  auto res = run_cli("solve --matrix cli_test_a.mtx --gvec cli_test_g.vec --delta 1.1180339887498949");
  CHECK(res.exit_code == 0);
  CHECK(grab(res.output, "solution.case") == "easy_boundary_zero");
  CHECK(grab(res.output, "solution.lambda") == "0");
}

TEST_CASE("input failures exit with code 2") {
  CHECK(run_cli("solve --gen z --n 10").exit_code == 2);
  CHECK(run_cli("solve --matrix missing_file.mtx --gvec also_missing.vec --delta 1").exit_code == 2);
  CHECK(run_cli("solve").exit_code == 2);
  TempFile bad("cli_test_bad.mtx", "not a matrix market file\n");
  TempFile gv("cli_test_g2.vec", "1.0\n");
  CHECK(run_cli("solve --matrix cli_test_bad.mtx --gvec cli_test_g2.vec --delta 1").exit_code == 2);
}

TEST_CASE("numerical failures exit with code 3") {
  // margins on a gap-free spectrum (identity): ZERO_GAP is a numerical error
  auto res = run_cli("margins --diag 1,1,1 --delta 0.1");
  CHECK(res.exit_code == 3);
  CHECK(res.output.find("zero_gap") != std::string::npos);
}

TEST_CASE("perturb with the zero direction reports zero derivatives") {
  auto res = run_cli("perturb --gen a --n 12 --dir-zero --fd-eps 1e-4,1e-5");
  REQUIRE(res.exit_code == 0);
  CHECK(grab(res.output, "sensitivity.lambda_prime") == "0");
  CHECK(grab(res.output, "fd.0.lambda_quotient") == "0");
  CHECK(grab(res.output, "fd.1.x_slope") == "0");
}

TEST_CASE("gltr emits the csv history with the documented columns") {
  auto res = run_cli("gltr --gen a --n 300 --max-k 80 --out cli_test_gltr.txt --csv cli_test_gltr.csv");
  REQUIRE(res.exit_code == 0);
  std::ifstream csv("cli_test_gltr.csv");
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "k,lambda_k,eta1_k,eta2_k,s_lambda_k,s_x_k,residual");
  int rows = 0;
  std::string line;
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  CHECK(rows >= 2);
  std::remove("cli_test_gltr.txt");
  std::remove("cli_test_gltr.csv");
}

TEST_CASE("bench prints one row per generator") {
  auto res = run_cli("bench --gen a,b --n 200");
  REQUIRE(res.exit_code == 0);
  CHECK(res.output.find("gen") != std::string::npos);
  CHECK(res.output.find("\na ") != std::string::npos);
  CHECK(res.output.find("\nb ") != std::string::npos);
}
