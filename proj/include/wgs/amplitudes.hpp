#pragma once

// Edge amplitudes: each graph edge carries a small matrix mapping the
// auxiliary space of its head to that of its tail. Entries are polynomials
// in the driving strength and the interaction, with Gaussian-rational
// coefficients; sign factors repeat with period 4 in the level index.

#include <array>
#include <sstream>
#include <string>
#include <vector>

#include "wgs/dense.hpp"
#include "wgs/graph.hpp"
#include "wgs/poly.hpp"
#include "wgs/util.hpp"

namespace wgs {

namespace detail {
inline long sgn_pow(int k) { return k % 2 == 0 ? 1 : -1; }            // (-1)^k
inline long sgn_half(int k) { return (k / 2) % 2 == 0 ? 1 : -1; }     // (-1)^floor(k/2)
inline long sgn_half1(int k) { return ((k + 1) / 2) % 2 == 0 ? 1 : -1; }  // (-1)^floor((k+1)/2)

inline PolyEU cst(const GaussianRational& c) { return PolyEU::constant(c); }
inline GaussianRational gr(long n, long d = 1) { return GaussianRational(Rational(n, d)); }
inline GaussianRational gi(long n, long d = 1) {
  return GaussianRational(Rational(0), Rational(n, d));
}
}  // namespace detail

struct AmplitudeTable {
  // Test hook: negates the ascending diagonal-to-diagonal family.
  bool mutate_diag_up = false;

  // The sign factors take their period-4 value at k_sign while the remaining
  // k-dependence is evaluated at k_poly; the two coincide in normal use.
  Mat<PolyEU> amplitude_split(EdgeFamily fam, int mu, int k_sign, int k_poly) const {
    using namespace detail;
    const PolyEU e = PolyEU::eps();
    const PolyEU u = PolyEU::u();
    const PolyEU ie = PolyEU::term(GaussianRational::i(), 1, 0);
    long s = sgn_pow(k_sign);
    long s2 = sgn_half(k_sign);
    long s12 = sgn_half1(k_sign);
    long k = k_poly;
    Mat<PolyEU> m;
    switch (fam) {
      case EdgeFamily::OriginLoop:
        m = Mat<PolyEU>(1, 1);
        if (mu > 0) m.at(0, 0) = PolyEU::one();
        return m;
      case EdgeFamily::OriginToDiag:
        m = Mat<PolyEU>(1, 2);
        m.at(0, 0) = cst(gi(2)) * e;
        return m;
      case EdgeFamily::DiagToOrigin:
        m = Mat<PolyEU>(2, 1);
        m.at(0, 0) = (ie - u) * cst(gr(1, 2));
        m.at(1, 0) = cst(gr(-1));
        return m;
      case EdgeFamily::OriginToHalf:
        m = Mat<PolyEU>(1, 1);
        m.at(0, 0) = e;
        return m;
      case EdgeFamily::HalfToOrigin:
        m = Mat<PolyEU>(1, 1);
        m.at(0, 0) = cst(gi(-1));
        return m;
      case EdgeFamily::DiagToHalfUp:
        m = Mat<PolyEU>(2, 1);
        m.at(0, 0) = e;
        return m;
      case EdgeFamily::DiagToHalfDown:
        m = Mat<PolyEU>(2, 1);
        m.at(0, 0) = (ie - u * cst(gr(k))) * e * cst(gr(-s, 4));
        m.at(1, 0) = e * cst(gr(s12, 2));
        return m;
      case EdgeFamily::HalfLoop:
        m = Mat<PolyEU>(1, 1);
        m.at(0, 0) = e * cst(gi(s, 2));
        return m;
      case EdgeFamily::HalfToDiagUp:
        m = Mat<PolyEU>(1, 2);
        m.at(0, 0) = e;
        return m;
      case EdgeFamily::HalfToDiagDown:
        m = Mat<PolyEU>(1, 2);
        m.at(0, 0) = (cst(gi(4)) - e * u * cst(gr(k))) * cst(gr(-s, 4));
        m.at(0, 1) = e * cst(gr(s12, 2));
        return m;
      case EdgeFamily::HalfSwap:
        m = Mat<PolyEU>(1, 1);
        m.at(0, 0) = e * cst(gi(-1));
        return m;
      case EdgeFamily::DiagUp:
        m = Mat<PolyEU>(2, 2);
        m.at(0, 0) = e * cst(gi(2 * s));
        if (mutate_diag_up) m.at(0, 0) = -m.at(0, 0);
        return m;
      case EdgeFamily::DiagDown:
        m = Mat<PolyEU>(2, 2);
        m.at(0, 0) = (cst(gi(2)) - e * u * cst(gr(k, 2))) * (e + u * cst(gi(k + 1))) * cst(gr(s, 4));
        m.at(0, 1) = (e + u * cst(gi(k + 1))) * e * cst(gr(-s12, 4));
        m.at(1, 0) = (e * u * cst(gi(k)) + cst(gr(4))) * cst(gr(-s2, 4));
        m.at(1, 1) = e * cst(gi(-1, 2));
        return m;
      case EdgeFamily::DiagLoop:
        m = Mat<PolyEU>(2, 2);
        if (mu == sgn_pow(k_sign)) {
          m.at(0, 0) = (e * u * cst(gi(k)) + cst(gr(4))) * cst(gr(s, 4));
          m.at(0, 1) = e * cst(gi(s12, 2));
        } else {
          m.at(0, 0) = (e + u * cst(gi(k))) * e * cst(gr(s, 4));
          m.at(1, 0) = e * cst(gi(s12, 2));
        }
        return m;
    }
    throw std::logic_error("amplitude_split: bad family");
  }

  Mat<PolyEU> amplitude_of(EdgeFamily fam, int k, int mu) const {
    return amplitude_split(fam, mu, k, k);
  }

  Mat<PolyEU> amplitude(const Edge& e) const { return amplitude_of(e.fam, e.k, e.mu); }
};

// Shape and periodicity audit over every family up to the given level.
inline void validate_table(const AmplitudeTable& table, const TruncatedGraph& g) {
  for (const Edge& e : g.edges) {
    Mat<PolyEU> a = table.amplitude(e);
    const Node& p = g.nodes[static_cast<size_t>(e.p)];
    const Node& q = g.nodes[static_cast<size_t>(e.q)];
    if (a.rows != p.dim || a.cols != q.dim)
      throw std::logic_error("validate_table: amplitude shape does not match node dims for " +
                             edge_text(g, e));
  }
  static const EdgeFamily kLevelFamilies[] = {
      EdgeFamily::DiagToHalfUp, EdgeFamily::DiagToHalfDown, EdgeFamily::HalfLoop,
      EdgeFamily::HalfToDiagUp, EdgeFamily::HalfToDiagDown, EdgeFamily::HalfSwap,
      EdgeFamily::DiagUp,       EdgeFamily::DiagDown,       EdgeFamily::DiagLoop};
  for (EdgeFamily fam : kLevelFamilies)
    for (int k = 1; k + 4 <= g.K; ++k)
      for (int mu : {+1, -1}) {
        if (fam != EdgeFamily::DiagLoop && mu < 0) continue;
        Mat<PolyEU> direct = table.amplitude_of(fam, k, mu);
        Mat<PolyEU> shifted = table.amplitude_split(fam, mu, k + 4, k);
        if (!(direct == shifted))
          throw std::logic_error("validate_table: sign factors not period 4");
      }
}

inline std::string poly_canonical(const PolyEU& p) {
  std::ostringstream os;
  for (const auto& [m, c] : p.terms())
    os << m.de << "," << m.du << ":" << c.re.str() << "," << c.im.str() << ";";
  return os.str();
}

// Stable fingerprint of the full amplitude table (levels 1..28), independent
// of graph truncation and coloring.
inline std::string amplitude_table_hash(const AmplitudeTable& table) {
  std::ostringstream os;
  auto emit = [&](EdgeFamily fam, int k, int mu) {
    Mat<PolyEU> a = table.amplitude_of(fam, k, mu);
    os << static_cast<int>(fam) << "|" << k << "|" << mu << "|" << a.rows << "x" << a.cols << "[";
    for (const PolyEU& e : a.a) os << poly_canonical(e) << "&";
    os << "]";
  };
  emit(EdgeFamily::OriginLoop, 0, +1);
  emit(EdgeFamily::OriginLoop, 0, -1);
  emit(EdgeFamily::OriginToDiag, 0, 0);
  emit(EdgeFamily::DiagToOrigin, 0, 0);
  emit(EdgeFamily::OriginToHalf, 0, 0);
  emit(EdgeFamily::HalfToOrigin, 0, 0);
  for (int k = 1; k <= 28; ++k) {
    emit(EdgeFamily::DiagToHalfUp, k, 0);
    emit(EdgeFamily::DiagToHalfDown, k, 0);
    emit(EdgeFamily::HalfLoop, k, 0);
    emit(EdgeFamily::HalfToDiagUp, k, 0);
    emit(EdgeFamily::HalfToDiagDown, k, 0);
    emit(EdgeFamily::HalfSwap, k, 0);
    emit(EdgeFamily::DiagUp, k, 0);
    emit(EdgeFamily::DiagDown, k, 0);
    emit(EdgeFamily::DiagLoop, k, +1);
    emit(EdgeFamily::DiagLoop, k, -1);
  }
  return hex16(fnv1a64(os.str()));
}

}  // namespace wgs
