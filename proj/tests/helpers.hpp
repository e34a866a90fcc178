#pragma once

// Shared deterministic generators for the property tests. Everything is
// seeded explicitly so identical runs produce identical samples.

#include <random>

#include "wgs/pauli.hpp"
#include "wgs/poly.hpp"
#include "wgs/rational.hpp"

namespace wgs::testing {

inline Rational random_rational(std::mt19937& rng, long num_lo = -9, long num_hi = 9,
                                long den_hi = 7) {
  std::uniform_int_distribution<long> num(num_lo, num_hi);
  std::uniform_int_distribution<long> den(1, den_hi);
  return Rational(num(rng), den(rng));
}

inline Rational random_nonzero_rational(std::mt19937& rng) {
  for (;;) {
    Rational r = random_rational(rng);
    if (!r.is_zero()) return r;
  }
}

inline GaussianRational random_gaussian(std::mt19937& rng) {
  return GaussianRational(random_rational(rng), random_rational(rng));
}

inline GaussianRational random_nonzero_gaussian(std::mt19937& rng) {
  for (;;) {
    GaussianRational g = random_gaussian(rng);
    if (!g.is_zero()) return g;
  }
}

inline PolyEU random_poly(std::mt19937& rng, int max_terms = 4, int max_deg = 3) {
  std::uniform_int_distribution<int> nterms(0, max_terms);
  std::uniform_int_distribution<int> deg(0, max_deg);
  PolyEU p;
  int k = nterms(rng);
  for (int i = 0; i < k; ++i) p.add_term({deg(rng), deg(rng)}, random_gaussian(rng));
  return p;
}

// Random sparse operator over exact scalars with a handful of terms.
inline SparseOp<GaussianRational> random_op(std::mt19937& rng, int n, int max_terms = 5) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> nib(0, 15);
  SparseOp<GaussianRational> op(n);
  int k = nterms(rng);
  for (int i = 0; i < k; ++i) {
    uint64_t code = 0;
    for (int j = 0; j < n; ++j) code = (code << 4) | static_cast<uint64_t>(nib(rng));
    op.add_term(code, random_gaussian(rng));
  }
  return op;
}

}  // namespace wgs::testing
