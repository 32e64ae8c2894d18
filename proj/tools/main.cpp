// trscond CLI: problem ingestion, solve/analyze/margins/perturb/gltr/bench
// subcommands, and machine-readable report emission. Talks to the numerical
// core exclusively through the public C API.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <random>

#include "CLI11.hpp"
#include "mm_io.hpp"
#include "report.hpp"
#include "trscond.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct CliError : std::runtime_error {
  CliError(int code_, const std::string& what) : std::runtime_error(what), code(code_) {}
  int code;
};

int status_exit_code(trscond_status st) {
  switch (st) {
    case TRSCOND_OK:
      return kExitOk;
    case TRSCOND_ERR_INVALID_ARGUMENT:
    case TRSCOND_ERR_UNSUPPORTED_REPRESENTATION:
    case TRSCOND_ERR_DEGENERATE_GRADIENT:
    case TRSCOND_ERR_UNKNOWN_GENERATOR:
      return kExitInput;
    default:
      return kExitNumerical;
  }
}

void check(trscond_status st, const char* what) {
  if (st == TRSCOND_OK) return;
  std::string msg = std::string(what) + ": " + trscond_status_name(st);
  const char* detail = trscond_last_error();
  if (detail && *detail) msg += std::string(" (") + detail + ")";
  throw CliError(status_exit_code(st), msg);
}

struct ProblemHandle {
  trscond_problem* p = nullptr;
  ~ProblemHandle() { trscond_problem_destroy(p); }
};

struct ResultHandle {
  trscond_result* r = nullptr;
  ~ResultHandle() { trscond_result_destroy(r); }
};

struct GltrHandle {
  trscond_gltr* g = nullptr;
  ~GltrHandle() { trscond_gltr_destroy(g); }
};

// ---- problem specification -------------------------------------------------

struct SpecFlags {
  std::string gen;          // a|b|c|d
  int64_t n = 0;
  uint64_t seed = 0;
  double delta = 0.0;       // 0 = source default (1 for generators)
  std::string matrix_path;  // Matrix Market file for A
  std::string gvec_path;    // vector file for g
  std::string diag_list;    // inline diagonal, comma separated
  // tolerance overrides
  double tol_secular = 0.0;
  double cluster_tol = 0.0;
  double hard_tol = 0.0;
};

void add_spec_flags(CLI::App* cmd, SpecFlags& spec, bool need_delta_default) {
  cmd->add_option("--gen", spec.gen, "builtin generator id: a, b, c or d");
  cmd->add_option("--n", spec.n, "dimension for --gen");
  cmd->add_option("--seed", spec.seed, "seed for generators c/d");
  cmd->add_option("--delta", spec.delta, "trust-region radius");
  cmd->add_option("--matrix", spec.matrix_path, "Matrix Market file for A");
  cmd->add_option("--gvec", spec.gvec_path, "vector file for g (one real per line)");
  cmd->add_option("--diag", spec.diag_list, "inline diagonal, comma separated");
  cmd->add_option("--tol-secular", spec.tol_secular, "secular acceptance tolerance");
  cmd->add_option("--cluster-tol", spec.cluster_tol, "bottom-cluster width");
  cmd->add_option("--hard-tol", spec.hard_tol, "hard-case cosine threshold");
  (void)need_delta_default;
}

bool have_options(const SpecFlags& spec, trscond_options& opts) {
  trscond_options_init(&opts);
  bool any = false;
  if (spec.tol_secular > 0) opts.secular_tol = spec.tol_secular, any = true;
  if (spec.cluster_tol > 0) opts.cluster_tol = spec.cluster_tol, any = true;
  if (spec.hard_tol > 0) opts.hard_tol = spec.hard_tol, any = true;
  return any;
}

struct BuiltProblem {
  ProblemHandle handle;
  int64_t n = 0;
  double delta = 0.0;
  std::string source;
  std::string hash;
};

BuiltProblem build_problem(const SpecFlags& spec) {
  BuiltProblem built;
  trscli::InputHash hash;
  trscond_status st = TRSCOND_OK;

  if (!spec.gen.empty()) {
    if (spec.gen.size() != 1 || spec.gen.find_first_of("abcd") != 0)
      throw CliError(kExitInput, "unknown generator id: " + spec.gen);
    if (spec.n < 2) throw CliError(kExitInput, "--gen requires --n >= 2");
    built.delta = spec.delta > 0 ? spec.delta : 1.0;
    st = trscond_problem_generate(spec.gen[0], spec.n, spec.seed, built.delta,
                                  &built.handle.p);
    check(st, "generate");
    built.source = "gen:" + spec.gen;
    hash.mix(built.source);
    hash.mix(int64_t(spec.n));
    hash.mix(spec.seed);
    hash.mix(built.delta);
  } else if (!spec.diag_list.empty()) {
    auto d = trscli::parse_real_list(spec.diag_list);
    std::vector<double> g;
    if (!spec.gvec_path.empty())
      g = trscli::read_vector_file(spec.gvec_path);
    else
      g.assign(d.size(), 1.0);
    if (g.size() != d.size())
      throw CliError(kExitInput, "gradient length does not match the diagonal");
    built.delta = spec.delta > 0 ? spec.delta : 1.0;
    st = trscond_problem_create_diagonal(int64_t(d.size()), d.data(), g.data(),
                                         built.delta, &built.handle.p);
    check(st, "ingest diagonal");
    built.source = "diag";
    hash.mix(built.source);
    hash.mix(d);
    hash.mix(g);
    hash.mix(built.delta);
  } else if (!spec.matrix_path.empty()) {
    if (spec.gvec_path.empty())
      throw CliError(kExitInput, "--matrix requires --gvec");
    auto m = trscli::read_matrix_market(spec.matrix_path);
    auto g = trscli::read_vector_file(spec.gvec_path);
    if (int64_t(g.size()) != m.n)
      throw CliError(kExitInput, "gradient length does not match the matrix");
    if (spec.delta <= 0)
      throw CliError(kExitInput, "--matrix input requires an explicit --delta > 0");
    built.delta = spec.delta;
    st = trscond_problem_create_dense(m.n, m.values.data(), g.data(), built.delta,
                                      &built.handle.p);
    check(st, "ingest matrix");
    built.source = "matrix-market";
    hash.mix(built.source);
    hash.mix(m.values);
    hash.mix(g);
    hash.mix(built.delta);
  } else {
    throw CliError(kExitInput, "no problem source: use --gen, --diag or --matrix");
  }

  built.n = trscond_problem_dim(built.handle.p);
  built.hash = hash.hex();
  return built;
}

void echo_problem(trscli::Report& rep, const BuiltProblem& built, const SpecFlags& spec) {
  rep.put("problem.source", built.source);
  rep.put("problem.hash", built.hash);
  rep.put("problem.n", built.n);
  rep.put("problem.delta", built.delta);
  if (!spec.gen.empty()) rep.put("problem.seed", spec.seed);
}

// ---- shared report blocks --------------------------------------------------

const char* case_name(trscond_case c) {
  switch (c) {
    case TRSCOND_CASE_EASY_INTERIOR: return "easy_interior";
    case TRSCOND_CASE_EASY_BOUNDARY_POSITIVE: return "easy_boundary_positive";
    case TRSCOND_CASE_EASY_BOUNDARY_ZERO: return "easy_boundary_zero";
    case TRSCOND_CASE_HARD: return "hard";
  }
  return "unknown";
}

void solution_block(trscli::Report& rep, const trscond_problem* p,
                    const trscond_result* r, bool emit_x) {
  const int64_t n = trscond_problem_dim(p);
  rep.put("solution.case", case_name(trscond_result_case(r)));
  rep.put("solution.lambda", trscond_result_lambda(r));
  rep.put("solution.nearly_hard", int64_t(trscond_result_nearly_hard(r)));
  rep.put("solution.hard_gap", trscond_result_hard_gap(r));

  std::vector<double> x(static_cast<size_t>(n), 0.0);
  check(trscond_result_x(r, x.data()), "solution vector");
  double nx = 0.0;
  for (double v : x) nx += v * v;
  rep.put("solution.x_norm", std::sqrt(nx));
  if (emit_x || n <= 32) rep.put_vector("solution.x", x.data(), n);

  trscond_kkt kkt{};
  check(trscond_result_kkt(r, &kkt), "kkt residuals");
  rep.put("solution.kkt.stationarity", kkt.stationarity);
  rep.put("solution.kkt.complementarity", kkt.complementarity);
  rep.put("solution.kkt.feasibility", kkt.feasibility);
  rep.put("solution.kkt.curvature_margin", kkt.curvature_margin);

  double amax = 0, amin = 0, gap = 0;
  int64_t mult = 0;
  check(trscond_result_spectrum(r, &amax, &amin, &gap, &mult), "spectrum");
  rep.put("spectrum.alpha_max", amax);
  rep.put("spectrum.alpha_min", amin);
  rep.put("spectrum.gap", gap);
  rep.put("spectrum.multiplicity", mult);
}

void margins_block(trscli::Report& rep, const trscond_problem* p,
                   const trscond_result* r) {
  trscond_margins m{};
  check(trscond_compute_margins(p, r, &m), "margins");
  rep.put("margins.eta1", m.eta1);
  rep.put("margins.eta2", m.eta2);
  rep.put("margins.eta_max", m.eta_max);
  if (!std::isnan(m.spd_margin)) rep.put("margins.spd_margin", m.spd_margin);
  rep.put("margins.gap", m.gap);
  rep.put("margins.cos_bottom", m.cos_bottom);
  rep.put("margins.pinv_norm", m.pinv_norm);
}

void condition_block(trscli::Report& rep, const trscond_problem* p,
                     const trscond_result* r) {
  trscond_condition c{};
  check(trscond_compute_condition(p, r, &c), "condition numbers");
  if (std::isnan(c.s_lambda) && !std::isnan(c.kappa_astar))
    rep.put("condition.note", "interior solution: classical kappa(A) only");
  rep.put("condition.s_lambda", c.s_lambda);
  rep.put("condition.s_x", c.s_x);
  rep.put("condition.cond_lambda", c.cond_lambda);
  rep.put("condition.kappa_astar", c.kappa_astar);
  rep.put("condition.s_lambda_lower", c.s_lambda_lower);
  rep.put("condition.s_lambda_upper", c.s_lambda_upper);
  rep.put("condition.s_x_lower", c.s_x_lower);
  rep.put("condition.s_x_upper", c.s_x_upper);
}

void emit(const trscli::Report& rep, const std::string& out_path) {
  if (out_path.empty()) {
    rep.write(std::cout);
    return;
  }
  if (!rep.write_file(out_path))
    throw CliError(kExitInput, "cannot write report to " + out_path);
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

// ---- random perturbation directions ----------------------------------------

// 53-bit uniform and Box-Muller normal draws from a fixed-width stream, so
// directions are reproducible across platforms
struct DirectionStream {
  std::mt19937_64 eng;
  explicit DirectionStream(uint64_t seed) : eng(seed) {}
  double uniform() { return double(eng() >> 11) * 0x1.0p-53; }
  double normal() {
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
};

// spectral-norm estimate by power iteration; used only to normalize
// randomly drawn directions
double spectral_norm_estimate(const std::vector<double>& a, int64_t n) {
  std::vector<double> v(static_cast<size_t>(n), 1.0), w(static_cast<size_t>(n), 0.0);
  double norm = std::sqrt(double(n));
  for (auto& x : v) x /= norm;
  double est = 0.0;
  for (int sweep = 0; sweep < 60; ++sweep) {
    for (int64_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int64_t j = 0; j < n; ++j) acc += a[size_t(i * n + j)] * v[size_t(j)];
      w[size_t(i)] = acc;
    }
    est = 0.0;
    for (double x : w) est += x * x;
    est = std::sqrt(est);
    if (est == 0.0) return 0.0;
    for (int64_t i = 0; i < n; ++i) v[size_t(i)] = w[size_t(i)] / est;
  }
  return est;
}

struct Direction {
  std::vector<double> e_mat;  // row-major n*n; empty = zero
  std::vector<double> e_vec;  // length n; empty = zero
};

Direction random_direction(int64_t n, uint64_t seed) {
  DirectionStream stream(seed);
  Direction dir;
  dir.e_mat.assign(size_t(n * n), 0.0);
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = 0; j <= i; ++j) {
      const double v = stream.normal();
      dir.e_mat[size_t(i * n + j)] = v;
      dir.e_mat[size_t(j * n + i)] = v;
    }
  const double enorm = spectral_norm_estimate(dir.e_mat, n);
  if (enorm > 0)
    for (auto& v : dir.e_mat) v /= enorm;
  dir.e_vec.resize(size_t(n));
  double vnorm = 0.0;
  for (auto& v : dir.e_vec) {
    v = stream.normal();
    vnorm += v * v;
  }
  vnorm = std::sqrt(vnorm);
  if (vnorm > 0)
    for (auto& v : dir.e_vec) v /= vnorm;
  return dir;
}

// ---- subcommands ------------------------------------------------------------

struct CommonOut {
  std::string out_path;
  bool emit_x = false;
};

int run_solve(const SpecFlags& spec, const CommonOut& common) {
  const auto t0 = std::chrono::steady_clock::now();
  auto built = build_problem(spec);
  trscond_options opts;
  const bool custom = have_options(spec, opts);
  ResultHandle result;
  check(trscond_solve(built.handle.p, custom ? &opts : nullptr, &result.r), "solve");

  trscli::Report rep;
  rep.put("report.kind", "solve");
  echo_problem(rep, built, spec);
  solution_block(rep, built.handle.p, result.r, common.emit_x);
  rep.put_timing("timings.total_ms", elapsed_ms(t0));
  emit(rep, common.out_path);
  return kExitOk;
}

int run_analyze(const SpecFlags& spec, const CommonOut& common) {
  const auto t0 = std::chrono::steady_clock::now();
  auto built = build_problem(spec);
  trscond_options opts;
  const bool custom = have_options(spec, opts);
  ResultHandle result;
  check(trscond_solve(built.handle.p, custom ? &opts : nullptr, &result.r), "solve");

  trscli::Report rep;
  rep.put("report.kind", "analyze");
  echo_problem(rep, built, spec);
  solution_block(rep, built.handle.p, result.r, common.emit_x);
  condition_block(rep, built.handle.p, result.r);
  rep.put_timing("timings.total_ms", elapsed_ms(t0));
  emit(rep, common.out_path);
  return kExitOk;
}

int run_margins(const SpecFlags& spec, const CommonOut& common) {
  const auto t0 = std::chrono::steady_clock::now();
  auto built = build_problem(spec);
  trscond_options opts;
  const bool custom = have_options(spec, opts);
  ResultHandle result;
  check(trscond_solve(built.handle.p, custom ? &opts : nullptr, &result.r), "solve");

  trscli::Report rep;
  rep.put("report.kind", "margins");
  echo_problem(rep, built, spec);
  solution_block(rep, built.handle.p, result.r, common.emit_x);
  margins_block(rep, built.handle.p, result.r);
  rep.put_timing("timings.total_ms", elapsed_ms(t0));
  emit(rep, common.out_path);
  return kExitOk;
}

struct PerturbFlags {
  uint64_t dir_seed = 1;
  std::string dir_matrix;
  std::string dir_gvec;
  std::string fd_eps = "1e-3,1e-4,1e-5,1e-6";
  bool zero_dir = false;
};

int run_perturb(const SpecFlags& spec, const PerturbFlags& pf, const CommonOut& common) {
  const auto t0 = std::chrono::steady_clock::now();
  auto built = build_problem(spec);
  const int64_t n = built.n;
  trscond_options opts;
  const bool custom = have_options(spec, opts);
  ResultHandle result;
  check(trscond_solve(built.handle.p, custom ? &opts : nullptr, &result.r), "solve");

  Direction dir;
  std::string dir_source;
  if (pf.zero_dir) {
    dir_source = "zero";
  } else if (!pf.dir_matrix.empty() || !pf.dir_gvec.empty()) {
    if (!pf.dir_matrix.empty()) {
      auto m = trscli::read_matrix_market(pf.dir_matrix);
      if (m.n != n) throw CliError(kExitInput, "direction matrix dimension mismatch");
      dir.e_mat = std::move(m.values);
    }
    if (!pf.dir_gvec.empty()) {
      dir.e_vec = trscli::read_vector_file(pf.dir_gvec);
      if (int64_t(dir.e_vec.size()) != n)
        throw CliError(kExitInput, "direction vector dimension mismatch");
    }
    dir_source = "file";
  } else {
    dir = random_direction(n, pf.dir_seed);
    dir_source = "seeded";
  }

  trscli::Report rep;
  rep.put("report.kind", "perturb");
  echo_problem(rep, built, spec);
  solution_block(rep, built.handle.p, result.r, common.emit_x);
  rep.put("direction.source", dir_source);
  if (dir_source == "seeded") rep.put("direction.seed", pf.dir_seed);

  trscond_sensitivity sens{};
  std::vector<double> xp(static_cast<size_t>(n), 0.0), xpl(xp), xpr(xp);
  check(trscond_compute_sensitivity(built.handle.p, result.r,
                                    dir.e_mat.empty() ? nullptr : dir.e_mat.data(),
                                    dir.e_vec.empty() ? nullptr : dir.e_vec.data(), &sens,
                                    xp.data(), xpl.data(), xpr.data()),
        "sensitivity");
  const char* kind = sens.diff_kind == TRSCOND_DIFF_NON_DIFFERENTIABLE
                         ? "non_differentiable"
                         : (sens.diff_kind == TRSCOND_DIFF_INTERIOR ? "interior"
                                                                    : "differentiable");
  rep.put("sensitivity.differentiability", kind);
  if (sens.diff_kind == TRSCOND_DIFF_NON_DIFFERENTIABLE) {
    rep.put("sensitivity.t", sens.t);
    rep.put("sensitivity.left_lambda_prime", sens.left_lambda_prime);
    rep.put("sensitivity.right_lambda_prime", sens.right_lambda_prime);
    rep.put_vector("sensitivity.left_x_prime", xpl.data(), n);
    rep.put_vector("sensitivity.right_x_prime", xpr.data(), n);
  } else {
    rep.put("sensitivity.lambda_prime", sens.lambda_prime);
    if (n <= 32 || common.emit_x) rep.put_vector("sensitivity.x_prime", xp.data(), n);
    if (sens.diff_kind == TRSCOND_DIFF_DIFFERENTIABLE &&
        trscond_result_case(result.r) == TRSCOND_CASE_EASY_BOUNDARY_POSITIVE) {
      rep.put("sensitivity.lambda_bound_coeff", sens.lambda_bound_coeff);
      rep.put("sensitivity.x_bound_coeff", sens.x_bound_coeff);
    }
  }

  // finite-difference cross-check along the same direction
  auto eps = trscli::parse_real_list(pf.fd_eps);
  std::vector<double> lq(eps.size()), xs(eps.size());
  double limit = 0.0;
  check(trscond_fd_probe(built.handle.p,
                         dir.e_mat.empty() ? nullptr : dir.e_mat.data(),
                         dir.e_vec.empty() ? nullptr : dir.e_vec.data(), eps.data(),
                         int64_t(eps.size()), TRSCOND_FD_CENTRAL, lq.data(), xs.data(),
                         &limit),
        "fd probe");
  for (size_t i = 0; i < eps.size(); ++i) {
    const std::string prefix = "fd." + std::to_string(i);
    rep.put(prefix + ".eps", eps[i]);
    rep.put(prefix + ".lambda_quotient", lq[i]);
    rep.put(prefix + ".x_slope", xs[i]);
  }
  rep.put("fd.lambda_limit", limit);
  rep.put_timing("timings.total_ms", elapsed_ms(t0));
  emit(rep, common.out_path);
  return kExitOk;
}

struct GltrFlags {
  int64_t max_k = 0;
  std::string reorth = "full";
  double stop_rel = 0.0;
  std::string csv_path;
};

int run_gltr(const SpecFlags& spec, const GltrFlags& gf, const CommonOut& common) {
  const auto t0 = std::chrono::steady_clock::now();
  auto built = build_problem(spec);
  trscond_options opts;
  const bool custom = have_options(spec, opts);
  if (gf.reorth != "full" && gf.reorth != "none")
    throw CliError(kExitInput, "--reorth must be full or none");

  GltrHandle run;
  check(trscond_gltr_run(built.handle.p, gf.max_k, gf.stop_rel, gf.reorth == "full",
                         custom ? &opts : nullptr, &run.g),
        "gltr pipeline");

  std::string csv_path = gf.csv_path;
  if (csv_path.empty())
    csv_path = common.out_path.empty() ? "gltr_history.csv" : common.out_path + ".csv";
  {
    std::ofstream csv(csv_path);
    if (!csv) throw CliError(kExitInput, "cannot write history to " + csv_path);
    csv << "k,lambda_k,eta1_k,eta2_k,s_lambda_k,s_x_k,residual\n";
    const int64_t steps = trscond_gltr_steps(run.g);
    for (int64_t i = 0; i < steps; ++i) {
      trscond_gltr_row row{};
      check(trscond_gltr_get_row(run.g, i, &row), "history row");
      csv << row.k << ',' << trscli::Report::format_scalar(row.lambda_k) << ','
          << trscli::Report::format_scalar(row.eta1) << ','
          << trscli::Report::format_scalar(row.eta2) << ','
          << trscli::Report::format_scalar(row.s_lambda) << ','
          << trscli::Report::format_scalar(row.s_x) << ','
          << trscli::Report::format_scalar(row.residual) << '\n';
    }
  }

  trscli::Report rep;
  rep.put("report.kind", "gltr");
  echo_problem(rep, built, spec);
  const int64_t steps = trscond_gltr_steps(run.g);
  rep.put("gltr.steps", steps);
  rep.put("gltr.converged", int64_t(trscond_gltr_converged(run.g)));
  rep.put("gltr.breakdown", int64_t(trscond_gltr_breakdown(run.g)));
  rep.put("gltr.bottom_coupling_warning", int64_t(trscond_gltr_coupling_warning(run.g)));
  rep.put("gltr.history_csv", csv_path);
  if (steps > 0) {
    trscond_gltr_row row{};
    check(trscond_gltr_get_row(run.g, steps - 1, &row), "final row");
    rep.put("gltr.final.k", row.k);
    rep.put("gltr.final.lambda_k", row.lambda_k);
    rep.put("gltr.final.eta1", row.eta1);
    rep.put("gltr.final.eta2", row.eta2);
    rep.put("gltr.final.s_lambda", row.s_lambda);
    rep.put("gltr.final.s_x", row.s_x);
    rep.put("gltr.final.residual", row.residual);
    rep.put("gltr.final.ritz_bottom", row.ritz_bottom);
    rep.put("gltr.final.ritz_second", row.ritz_second);
  }
  rep.put_timing("timings.total_ms", elapsed_ms(t0));
  emit(rep, common.out_path);
  return kExitOk;
}

struct BenchFlags {
  std::string gens = "a,b";
  int64_t n = 5000;
  uint64_t seed = 0;
  double delta = 1.0;
  std::string out_dir;
};

struct BenchRow {
  char gen;
  double lambda, s_lambda, s_x, eta1, eta2;
};

BenchRow bench_one(char gen, int64_t n, uint64_t seed, double delta,
                   const std::string& out_dir) {
  ProblemHandle p;
  check(trscond_problem_generate(gen, n, seed, delta, &p.p), "generate");
  ResultHandle r;
  check(trscond_solve(p.p, nullptr, &r.r), "solve");
  trscond_condition cond{};
  check(trscond_compute_condition(p.p, r.r, &cond), "condition numbers");
  trscond_margins marg{};
  check(trscond_compute_margins(p.p, r.r, &marg), "margins");

  if (!out_dir.empty()) {
    trscli::Report rep;
    rep.put("report.kind", "bench");
    rep.put("problem.source", std::string("gen:") + gen);
    rep.put("problem.n", n);
    rep.put("problem.seed", seed);
    rep.put("problem.delta", delta);
    solution_block(rep, p.p, r.r, false);
    condition_block(rep, p.p, r.r);
    margins_block(rep, p.p, r.r);
    const std::string path = out_dir + "/bench_" + gen + ".txt";
    if (!rep.write_file(path)) throw CliError(kExitInput, "cannot write " + path);
  }
  return {gen,          trscond_result_lambda(r.r), cond.s_lambda,
          cond.s_x,     marg.eta1,                  marg.eta2};
}

int run_bench(const BenchFlags& bf) {
  std::vector<char> gens;
  for (char c : bf.gens)
    if (c != ',' && c != ' ') {
      if (std::string("abcd").find(c) == std::string::npos)
        throw CliError(kExitInput, std::string("unknown generator id: ") + c);
      gens.push_back(c);
    }
  if (gens.empty()) throw CliError(kExitInput, "no generators requested");

  // independent specs run concurrently; each report file has one writer
  std::vector<std::future<BenchRow>> futures;
  for (char gen : gens)
    futures.push_back(std::async(std::launch::async, bench_one, gen, bf.n, bf.seed,
                                 bf.delta, bf.out_dir));

  std::printf("%-6s %-14s %-12s %-14s %-14s %-14s\n", "gen", "lambda", "s_lambda", "s_x",
              "eta1", "eta2");
  for (auto& f : futures) {
    const BenchRow row = f.get();
    std::printf("%-6c %-14.5g %-12.5g %-14.5g %-14.4g %-14.5g\n", row.gen, row.lambda,
                row.s_lambda, row.s_x, row.eta1, row.eta2);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trust-region subproblem solver and sensitivity toolkit"};
  app.require_subcommand(1);

  SpecFlags spec;
  CommonOut common;
  PerturbFlags pf;
  GltrFlags gf;
  BenchFlags bf;

  auto* solve = app.add_subcommand("solve", "solve the TRS and report KKT residuals");
  add_spec_flags(solve, spec, true);
  solve->add_option("--out", common.out_path, "report file (default stdout)");
  solve->add_flag("--emit-x", common.emit_x, "always include the solution vector");

  auto* analyze = app.add_subcommand("analyze", "condition numbers s(lambda*), s(x*)");
  add_spec_flags(analyze, spec, true);
  analyze->add_option("--out", common.out_path, "report file (default stdout)");
  analyze->add_flag("--emit-x", common.emit_x, "always include the solution vector");

  auto* margins = app.add_subcommand("margins", "easy-case persistence margins");
  add_spec_flags(margins, spec, true);
  margins->add_option("--out", common.out_path, "report file (default stdout)");
  margins->add_flag("--emit-x", common.emit_x, "always include the solution vector");

  auto* perturb = app.add_subcommand("perturb", "first-order sensitivity along a direction");
  add_spec_flags(perturb, spec, true);
  perturb->add_option("--out", common.out_path, "report file (default stdout)");
  perturb->add_flag("--emit-x", common.emit_x, "always include the solution vector");
  perturb->add_option("--dir-seed", pf.dir_seed, "seed for the random direction");
  perturb->add_option("--dir-matrix", pf.dir_matrix, "Matrix Market file for E");
  perturb->add_option("--dir-gvec", pf.dir_gvec, "vector file for e");
  perturb->add_flag("--dir-zero", pf.zero_dir, "use the zero direction");
  perturb->add_option("--fd-eps", pf.fd_eps, "comma list of finite-difference steps");

  auto* gltr = app.add_subcommand("gltr", "Lanczos/GLTR pipeline with streaming estimates");
  add_spec_flags(gltr, spec, true);
  gltr->add_option("--out", common.out_path, "report file (default stdout)");
  gltr->add_option("--max-k", gf.max_k, "maximum Lanczos steps (default min(n, 1000))");
  gltr->add_option("--reorth", gf.reorth, "reorthogonalization: full or none");
  gltr->add_option("--stop-rel", gf.stop_rel, "stop target on estimate changes");
  gltr->add_option("--csv", gf.csv_path, "history CSV path");

  auto* bench = app.add_subcommand("bench", "summary table over builtin generators");
  bench->add_option("--gen", bf.gens, "comma list of generator ids (default a,b)");
  bench->add_option("--n", bf.n, "dimension (default 5000)");
  bench->add_option("--seed", bf.seed, "seed for generators c/d");
  bench->add_option("--delta", bf.delta, "trust-region radius (default 1)");
  bench->add_option("--out-dir", bf.out_dir, "directory for per-generator reports");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(spec, common);
    if (analyze->parsed()) return run_analyze(spec, common);
    if (margins->parsed()) return run_margins(spec, common);
    if (perturb->parsed()) return run_perturb(spec, pf, common);
    if (gltr->parsed()) return run_gltr(spec, gf, common);
    if (bench->parsed()) return run_bench(bf);
  } catch (const CliError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return err.code;
  } catch (const trscli::ParseError& err) {
    std::fprintf(stderr, "input error: %s\n", err.what());
    return kExitInput;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitNumerical;
  }
  return kExitInput;
}
