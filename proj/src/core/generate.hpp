#pragma once

#include <cstdint>

#include "solver.hpp"

namespace trscond {

/// Builtin diagonal test families. All of them use g = (1,...,1)^T and
/// delta = 1 unless the caller overrides delta.
///   a: alpha_i = i - n/2                     (linear, indefinite)
///   b: alpha_i = -i^2/n - n/2 - 1/n          (quadratic, negative definite)
///   c: alpha_i uniform on [1, 1000]          (seeded)
///   d: alpha_i uniform on [-1, 1000]         (seeded)
TrsProblem generate_problem(char gen, Index n, std::uint64_t seed, double delta = 1.0);

/// The deterministic 53-bit uniform stream behind generators c and d,
/// exposed so reports and tests can reproduce draws exactly.
Vector seeded_uniform(Index n, double lo, double hi, std::uint64_t seed);

}  // namespace trscond
