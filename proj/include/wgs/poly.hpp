#pragma once

// Bivariate polynomials in the driving strength eps and interaction u, with
// Gaussian-rational coefficients. Both indeterminates are real parameters, so
// complex conjugation acts on the coefficients only.

#include <complex>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wgs/rational.hpp"

namespace wgs {

struct Monom {
  int de = 0, du = 0;
  friend bool operator<(const Monom& a, const Monom& b) {
    return a.de != b.de ? a.de < b.de : a.du < b.du;
  }
  friend bool operator==(const Monom& a, const Monom& b) {
    return a.de == b.de && a.du == b.du;
  }
};

class PolyEU {
 public:
  PolyEU() = default;

  static PolyEU constant(GaussianRational c) {
    PolyEU p;
    p.add_term({0, 0}, std::move(c));
    return p;
  }
  static PolyEU one() { return constant(GaussianRational(1)); }
  static PolyEU i() { return constant(GaussianRational::i()); }
  static PolyEU eps() { return term(GaussianRational(1), 1, 0); }
  static PolyEU u() { return term(GaussianRational(1), 0, 1); }
  static PolyEU term(GaussianRational c, int de, int du) {
    if (de < 0 || du < 0) throw std::domain_error("PolyEU: negative exponent");
    PolyEU p;
    p.add_term({de, du}, std::move(c));
    return p;
  }

  bool is_zero() const { return t_.empty(); }

  void add_term(Monom m, GaussianRational c) {
    if (c.is_zero()) return;
    auto it = t_.find(m);
    if (it == t_.end()) {
      t_.emplace(m, std::move(c));
    } else {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

  // (-1, -1) for the zero polynomial.
  std::pair<int, int> degrees() const {
    if (t_.empty()) return {-1, -1};
    int de = 0, du = 0;
    for (const auto& [m, c] : t_) {
      if (m.de > de) de = m.de;
      if (m.du > du) du = m.du;
    }
    return {de, du};
  }

  PolyEU conj() const {
    PolyEU r;
    for (const auto& [m, c] : t_) r.t_.emplace(m, c.conj());
    return r;
  }

  // Substitution eps -> -eps.
  PolyEU eps_negated() const {
    PolyEU r;
    for (const auto& [m, c] : t_) r.t_.emplace(m, m.de % 2 ? -c : c);
    return r;
  }

  GaussianRational eval(const Rational& e, const Rational& uu) const {
    auto [de, du] = degrees();
    std::vector<Rational> pe(static_cast<size_t>(de < 0 ? 0 : de) + 1, Rational(1));
    std::vector<Rational> pu(static_cast<size_t>(du < 0 ? 0 : du) + 1, Rational(1));
    for (size_t k = 1; k < pe.size(); ++k) pe[k] = pe[k - 1] * e;
    for (size_t k = 1; k < pu.size(); ++k) pu[k] = pu[k - 1] * uu;
    GaussianRational acc;
    for (const auto& [m, c] : t_)
      acc += c * GaussianRational(pe[static_cast<size_t>(m.de)] * pu[static_cast<size_t>(m.du)]);
    return acc;
  }

  std::complex<double> eval(std::complex<double> e, std::complex<double> uu) const {
    std::complex<double> acc = 0;
    for (const auto& [m, c] : t_) {
      std::complex<double> v = c.to_complex();
      for (int k = 0; k < m.de; ++k) v *= e;
      for (int k = 0; k < m.du; ++k) v *= uu;
      acc += v;
    }
    return acc;
  }

  // Coefficient of eps^1 as a polynomial in u alone.
  PolyEU d_eps_at_zero() const {
    PolyEU r;
    for (const auto& [m, c] : t_)
      if (m.de == 1) r.add_term({0, m.du}, c);
    return r;
  }

  const std::map<Monom, GaussianRational>& terms() const { return t_; }

  PolyEU operator-() const {
    PolyEU r;
    for (const auto& [m, c] : t_) r.t_.emplace(m, -c);
    return r;
  }
  PolyEU& operator+=(const PolyEU& o) {
    for (const auto& [m, c] : o.t_) add_term(m, c);
    return *this;
  }
  PolyEU& operator-=(const PolyEU& o) {
    for (const auto& [m, c] : o.t_) add_term(m, -c);
    return *this;
  }
  PolyEU& operator*=(const PolyEU& o) {
    PolyEU r;
    for (const auto& [ma, ca] : t_)
      for (const auto& [mb, cb] : o.t_)
        r.add_term({ma.de + mb.de, ma.du + mb.du}, ca * cb);
    t_ = std::move(r.t_);
    return *this;
  }

  friend PolyEU operator+(PolyEU a, const PolyEU& b) { return a += b; }
  friend PolyEU operator-(PolyEU a, const PolyEU& b) { return a -= b; }
  friend PolyEU operator*(PolyEU a, const PolyEU& b) { return a *= b; }
  friend bool operator==(const PolyEU& a, const PolyEU& b) { return a.t_ == b.t_; }
  friend bool operator!=(const PolyEU& a, const PolyEU& b) { return !(a == b); }

 private:
  std::map<Monom, GaussianRational> t_;
};

}  // namespace wgs
