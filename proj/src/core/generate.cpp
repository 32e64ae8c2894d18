#include "generate.hpp"

#include <random>

namespace trscond {

Vector seeded_uniform(Index n, double lo, double hi, std::uint64_t seed) {
  // mt19937_64 with an explicit 53-bit mantissa map; uniform_real_distribution
  // is implementation-defined, this stream is reproducible everywhere
  std::mt19937_64 eng(seed);
  Vector v(n);
  for (Index i = 0; i < n; ++i) {
    const double u = double(eng() >> 11) * 0x1.0p-53;
    v(i) = lo + (hi - lo) * u;
  }
  return v;
}

TrsProblem generate_problem(char gen, Index n, std::uint64_t seed, double delta) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "generator needs n >= 2");
  Vector alpha(n);
  const double nd = double(n);
  switch (gen) {
    case 'a':
      for (Index i = 1; i <= n; ++i) alpha(i - 1) = double(i) - nd / 2.0;
      break;
    case 'b':
      for (Index i = 1; i <= n; ++i)
        alpha(i - 1) = -double(i) * double(i) / nd - nd / 2.0 - 1.0 / nd;
      break;
    case 'c':
      alpha = seeded_uniform(n, 1.0, 1000.0, seed);
      break;
    case 'd':
      alpha = seeded_uniform(n, -1.0, 1000.0, seed);
      break;
    default:
      fail(ErrorCode::UnknownGenerator, std::string("unknown generator id '") + gen + "'");
  }
  return TrsProblem(SymOperator::diagonal(std::move(alpha)), Vector::Ones(n), delta);
}

}  // namespace trscond
