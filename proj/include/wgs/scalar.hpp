#pragma once

// Uniform scalar interface over the three coefficient rings used by the
// library: symbolic polynomials, exact Gaussian rationals at fixed parameters,
// and double-precision complex numbers.

#include <cmath>
#include <complex>

#include "wgs/poly.hpp"
#include "wgs/rational.hpp"

namespace wgs {

using ComplexF = std::complex<double>;

template <class S>
struct ScalarOps;

template <>
struct ScalarOps<PolyEU> {
  static PolyEU zero() { return PolyEU(); }
  static PolyEU one() { return PolyEU::one(); }
  static bool is_zero(const PolyEU& x) { return x.is_zero(); }
  static PolyEU conj(const PolyEU& x) { return x.conj(); }
  static PolyEU from_gaussian(const GaussianRational& c) { return PolyEU::constant(c); }
  static double abs_approx(const PolyEU& x) {
    double m = 0;
    for (const auto& [mono, c] : x.terms()) m += std::abs(c.to_complex());
    return m;
  }
};

template <>
struct ScalarOps<GaussianRational> {
  static GaussianRational zero() { return GaussianRational(); }
  static GaussianRational one() { return GaussianRational(1); }
  static bool is_zero(const GaussianRational& x) { return x.is_zero(); }
  static GaussianRational conj(const GaussianRational& x) { return x.conj(); }
  static GaussianRational from_gaussian(const GaussianRational& c) { return c; }
  static double abs_approx(const GaussianRational& x) { return std::abs(x.to_complex()); }
};

template <>
struct ScalarOps<ComplexF> {
  static ComplexF zero() { return {0.0, 0.0}; }
  static ComplexF one() { return {1.0, 0.0}; }
  static bool is_zero(const ComplexF& x) { return x.real() == 0.0 && x.imag() == 0.0; }
  static ComplexF conj(const ComplexF& x) { return std::conj(x); }
  static ComplexF from_gaussian(const GaussianRational& c) { return c.to_complex(); }
  static double abs_approx(const ComplexF& x) { return std::abs(x); }
};

// Parameter sets select the coefficient ring for a build.
struct SymbolicParams {
  using Scalar = PolyEU;
  PolyEU eps() const { return PolyEU::eps(); }
  PolyEU u() const { return PolyEU::u(); }
  PolyEU value(const PolyEU& p) const { return p; }
};

struct ExactParams {
  using Scalar = GaussianRational;
  Rational eps_v, u_v;
  ExactParams(Rational e, Rational u) : eps_v(std::move(e)), u_v(std::move(u)) {}
  GaussianRational eps() const { return GaussianRational(eps_v); }
  GaussianRational u() const { return GaussianRational(u_v); }
  GaussianRational value(const PolyEU& p) const { return p.eval(eps_v, u_v); }
};

struct FloatParams {
  using Scalar = ComplexF;
  double eps_v, u_v;
  FloatParams(double e, double u) : eps_v(e), u_v(u) {}
  ComplexF eps() const { return {eps_v, 0.0}; }
  ComplexF u() const { return {u_v, 0.0}; }
  ComplexF value(const PolyEU& p) const { return p.eval(ComplexF(eps_v), ComplexF(u_v)); }
};

template <class P>
using scalar_t = typename P::Scalar;

// View of a parameter set with the coupling rate negated. Substitution
// commutes with evaluation, so wrapping works uniformly for every ring.
template <class P>
struct NegatedEps {
  using Scalar = scalar_t<P>;
  P inner;
  explicit NegatedEps(P p) : inner(std::move(p)) {}
  Scalar eps() const { return ScalarOps<Scalar>::zero() - inner.eps(); }
  Scalar u() const { return inner.u(); }
  Scalar value(const PolyEU& p) const { return inner.value(p.eps_negated()); }
};

template <class P>
NegatedEps<P> negated_eps(P p) {
  return NegatedEps<P>(std::move(p));
}

}  // namespace wgs
