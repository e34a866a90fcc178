#pragma once

// Steady-state machinery: the chain Hamiltonian, the boundary-driven master
// equation, and the two constructions of the steady-state factor (explicit
// walk enumeration and auxiliary-space contraction).

#include <map>
#include <utility>
#include <vector>

#include "wgs/amplitudes.hpp"
#include "wgs/dense.hpp"
#include "wgs/graph.hpp"
#include "wgs/pauli.hpp"
#include "wgs/scalar.hpp"

namespace wgs {

// Graph truncation sufficient for length-n walks from and to the origin.
inline int levels_for_sites(int n) { return n / 2 + 1; }

template <class S>
SparseOp<S> embed_one(int n, int j, SiteLabel l) {
  return SparseOp<S>::from_sites(n, {{j, l}}, ScalarOps<S>::one());
}

template <class S>
SparseOp<S> prepend_site(const SparseOp<S>& op, SiteLabel l) {
  SparseOp<S> r(op.n + 1);
  int sh = 4 * op.n;
  uint64_t head = static_cast<uint64_t>(l.nibble()) << sh;
  for (const auto& [code, c] : op.terms) r.add_term(head | code, c);
  return r;
}

template <class S>
SparseOp<S> append_site(const SparseOp<S>& op, SiteLabel l) {
  SparseOp<S> r(op.n + 1);
  for (const auto& [code, c] : op.terms) r.add_term((code << 4) | l.nibble(), c);
  return r;
}

// H = sum_j (hops on both ladders) + (u/4) sum_j sz_j tz_j.
template <class S>
SparseOp<S> hamiltonian(int n, const S& u) {
  using Ops = ScalarOps<S>;
  SparseOp<S> h(n);
  const SiteLabel sp{PIdx::Plus, PIdx::Id}, sm{PIdx::Minus, PIdx::Id};
  const SiteLabel tp{PIdx::Id, PIdx::Plus}, tm{PIdx::Id, PIdx::Minus};
  for (int j = 1; j < n; ++j) {
    h += SparseOp<S>::from_sites(n, {{j, sp}, {j + 1, sm}}, Ops::one());
    h += SparseOp<S>::from_sites(n, {{j, sm}, {j + 1, sp}}, Ops::one());
    h += SparseOp<S>::from_sites(n, {{j, tp}, {j + 1, tm}}, Ops::one());
    h += SparseOp<S>::from_sites(n, {{j, tm}, {j + 1, tp}}, Ops::one());
  }
  S u4 = u * Ops::from_gaussian(GaussianRational(Rational(1, 4)));
  for (int j = 1; j <= n; ++j)
    h += SparseOp<S>::from_sites(n, {{j, SiteLabel{PIdx::Zed, PIdx::Zed}}}, u4);
  return h;
}

// Master-equation action: -i[H, rho] plus source terms at site 1 (raising on
// both ladders) and drain terms at site n (lowering on both ladders), all at
// equal rate eps.
template <class S>
SparseOp<S> lindblad_apply(const SparseOp<S>& rho, const S& eps, const S& u) {
  using Ops = ScalarOps<S>;
  int n = rho.n;
  SparseOp<S> h = hamiltonian(n, u);
  S mi = Ops::zero() - Ops::from_gaussian(GaussianRational::i());
  SparseOp<S> out = commutator(h, rho).scaled(mi);
  S half = Ops::from_gaussian(GaussianRational(Rational(1, 2)));
  auto channel = [&](const SparseOp<S>& a) {
    SparseOp<S> ad = a.adjoint();
    SparseOp<S> term = op_mul(op_mul(a, rho), ad);
    SparseOp<S> ada = op_mul(ad, a);
    term -= op_mul(ada, rho).scaled(half);
    term -= op_mul(rho, ada).scaled(half);
    out += term.scaled(eps);
  };
  channel(embed_one<S>(n, 1, {PIdx::Plus, PIdx::Id}));
  channel(embed_one<S>(n, 1, {PIdx::Id, PIdx::Plus}));
  channel(embed_one<S>(n, n, {PIdx::Minus, PIdx::Id}));
  channel(embed_one<S>(n, n, {PIdx::Id, PIdx::Minus}));
  return out;
}

template <class P>
Mat<scalar_t<P>> eval_amp(const Mat<PolyEU>& a, const P& params) {
  Mat<scalar_t<P>> m(a.rows, a.cols);
  for (size_t i = 0; i < a.a.size(); ++i) m.a[i] = params.value(a.a[i]);
  return m;
}

template <class P>
std::vector<Mat<scalar_t<P>>> eval_all_amps(const TruncatedGraph& g, const AmplitudeTable& t,
                                            const P& params) {
  std::vector<Mat<scalar_t<P>>> amps;
  amps.reserve(g.edges.size());
  for (const Edge& e : g.edges) amps.push_back(eval_amp(t.amplitude(e), params));
  return amps;
}

// State factor via explicit walk enumeration: sum over closed origin walks of
// the amplitude product, each walk contributing its label string.
template <class P>
SparseOp<scalar_t<P>> state_factor_walks(const TruncatedGraph& g, const AmplitudeTable& t, int n,
                                         const P& params) {
  using S = scalar_t<P>;
  auto amps = eval_all_amps(g, t, params);
  SparseOp<S> result(n);
  for (const Walk& w : enumerate_walks(g, n, g.origin(), g.origin())) {
    Mat<S> prod = amps[static_cast<size_t>(w[0])];
    bool dead = prod.is_zero();
    for (size_t j = 1; j < w.size() && !dead; ++j) {
      prod = mat_mul(prod, amps[static_cast<size_t>(w[j])]);
      dead = prod.is_zero();
    }
    if (dead) continue;
    uint64_t code = 0;
    for (int eid : w) code = (code << 4) | g.edges[static_cast<size_t>(eid)].label.nibble();
    result.add_term(code, prod.at(0, 0));
  }
  return result;
}

// The sixteen auxiliary-space matrices of the factor, one per site label,
// assembled from the edge amplitudes. Shared by the contraction below, the
// transfer-matrix machinery, and the auxiliary-operator solver.
template <class P>
std::array<Mat<scalar_t<P>>, 16> mpo_site_matrices(const TruncatedGraph& g,
                                                   const AmplitudeTable& t, const P& params) {
  using S = scalar_t<P>;
  std::array<Mat<S>, 16> A;
  A.fill(Mat<S>(g.aux_dim, g.aux_dim));
  for (const Edge& e : g.edges) {
    Mat<S> a = eval_amp(t.amplitude(e), params);
    const Node& p = g.nodes[static_cast<size_t>(e.p)];
    const Node& q = g.nodes[static_cast<size_t>(e.q)];
    Mat<S>& target = A[e.label.nibble()];
    for (int r = 0; r < a.rows; ++r)
      for (int c = 0; c < a.cols; ++c) target.at(p.aux + r, q.aux + c) += a.at(r, c);
  }
  return A;
}

// The same factor by contracting the auxiliary-space matrices from the right.
template <class P>
SparseOp<scalar_t<P>> state_factor_mpo(const TruncatedGraph& g, const AmplitudeTable& t, int n,
                                       const P& params) {
  using S = scalar_t<P>;
  using Ops = ScalarOps<S>;
  std::array<Mat<S>, 16> A = mpo_site_matrices(g, t, params);
  std::map<std::pair<int, uint64_t>, S> frontier;
  frontier[{0, 0}] = Ops::one();
  for (int j = n; j >= 1; --j) {
    std::map<std::pair<int, uint64_t>, S> next;
    int sh = 4 * (n - j);
    for (const auto& [key, val] : frontier) {
      auto [col, suffix] = key;
      for (int nib = 0; nib < 16; ++nib) {
        const Mat<S>& mat = A[static_cast<size_t>(nib)];
        for (int row = 0; row < mat.rows; ++row) {
          const S& a = mat.at(row, col);
          if (Ops::is_zero(a)) continue;
          uint64_t code = (static_cast<uint64_t>(nib) << sh) | suffix;
          auto it = next.find({row, code});
          if (it == next.end())
            next.emplace(std::make_pair(row, code), a * val);
          else {
            it->second += a * val;
            if (Ops::is_zero(it->second)) next.erase(it);
          }
        }
      }
    }
    frontier = std::move(next);
  }
  SparseOp<S> result(n);
  for (const auto& [key, val] : frontier)
    if (key.first == 0) result.add_term(key.second, val);
  return result;
}

// Both construction paths, checked against each other.
template <class P>
SparseOp<scalar_t<P>> state_factor(const TruncatedGraph& g, const AmplitudeTable& t, int n,
                                   const P& params) {
  SparseOp<scalar_t<P>> walks = state_factor_walks(g, t, n, params);
  SparseOp<scalar_t<P>> mpo = state_factor_mpo(g, t, n, params);
  if (!(walks == mpo)) throw std::logic_error("state_factor: construction paths disagree");
  return walks;
}

template <class S>
SparseOp<S> steady_state(const SparseOp<S>& factor) {
  return op_mul(factor, factor.adjoint());
}

// The density operator annihilated by the master equation. The tabulated
// amplitudes fix the factor only up to complex conjugation (they satisfy
// conj(a(eps)) = a(-eps) entrywise); the branch that is stationary for a
// source at site 1 and a drain at site n is the one with the rate negated.
template <class P>
SparseOp<scalar_t<P>> build_rho(const TruncatedGraph& g, const AmplitudeTable& t, int n,
                                const P& params) {
  auto factor = state_factor(g, t, n, negated_eps(params));
  return steady_state(factor);
}

template <class S>
struct ResidualReport {
  bool exact_zero = false;
  double max_abs = 0.0;
  SparseOp<S> diff;
  bool ok(double tol) const { return exact_zero || max_abs <= tol; }
};

template <class S>
ResidualReport<S> residual_of(SparseOp<S> diff) {
  ResidualReport<S> r;
  r.max_abs = diff.max_abs_coeff();
  r.exact_zero = diff.empty();
  r.diff = std::move(diff);
  return r;
}

// Fixed-point test: the master-equation action annihilates the density built
// from the factor.
template <class P>
ResidualReport<scalar_t<P>> check_fixed_point(const TruncatedGraph& g, const AmplitudeTable& t,
                                              int n, const P& params) {
  auto rho = build_rho(g, t, n, params);
  return residual_of(lindblad_apply(rho, params.eps(), params.u()));
}

// Commutator closure: [H, S] reproduces the boundary projections of S itself,
// scaled by i eps / 2, with raising defects at site 1 and lowering defects at
// site n. This is the relation the tabulated amplitudes actually satisfy; it
// is a statement about the factor alone, independent of the drive.
template <class P>
ResidualReport<scalar_t<P>> check_defining_relation(const TruncatedGraph& g,
                                                    const AmplitudeTable& t, int n,
                                                    const P& params) {
  using S = scalar_t<P>;
  using Ops = ScalarOps<S>;
  auto factor = state_factor(g, t, n, params);
  SparseOp<S> lhs = commutator(hamiltonian(n, params.u()), factor);
  SparseOp<S> rhs(n);
  const PIdx kZ = PIdx::Zed;
  for (PIdx s : {PIdx::Id, PIdx::Plus}) {
    PIdx ms = s == PIdx::Plus ? PIdx::Minus : PIdx::Id;
    rhs += prepend_site(factor.hs_project(1, {PIdx::Id, s}), SiteLabel{kZ, s});
    rhs += prepend_site(factor.hs_project(1, {s, PIdx::Id}), SiteLabel{s, kZ});
    rhs -= append_site(factor.hs_project(n, {PIdx::Id, ms}), SiteLabel{kZ, ms});
    rhs -= append_site(factor.hs_project(n, {ms, PIdx::Id}), SiteLabel{ms, kZ});
  }
  S scale = params.eps() * Ops::from_gaussian(GaussianRational::i() * GaussianRational(Rational(1, 2)));
  return residual_of(lhs - rhs.scaled(scale));
}

// First-order coefficient of the factor in the driving strength; symbolic in
// the interaction.
inline SparseOp<PolyEU> charge_from_factor(const SparseOp<PolyEU>& factor) {
  SparseOp<PolyEU> z(factor.n);
  PolyEU mi = PolyEU::constant(-GaussianRational::i());
  for (const auto& [code, c] : factor.terms) z.add_term(code, mi * c.d_eps_at_zero());
  return z;
}

inline SparseOp<PolyEU> boundary_charge_target(int n) {
  SparseOp<PolyEU> b(n);
  PolyEU one = PolyEU::one();
  b += SparseOp<PolyEU>::from_sites(n, {{1, {PIdx::Zed, PIdx::Id}}}, one);
  b += SparseOp<PolyEU>::from_sites(n, {{1, {PIdx::Id, PIdx::Zed}}}, one);
  b -= SparseOp<PolyEU>::from_sites(n, {{n, {PIdx::Zed, PIdx::Id}}}, one);
  b -= SparseOp<PolyEU>::from_sites(n, {{n, {PIdx::Id, PIdx::Zed}}}, one);
  return b;
}

// Coefficient matrix of a bipartition of the chain after `cut` sites: rows are
// left label strings, columns right label strings.
template <class S>
Mat<S> cut_matrix(const SparseOp<S>& op, int cut) {
  if (cut < 1 || cut >= op.n) throw std::domain_error("cut_matrix: cut out of range");
  std::map<uint64_t, int> rows, cols;
  int rsh = 4 * (op.n - cut);
  for (const auto& [code, c] : op.terms) {
    rows.emplace(code >> rsh, 0);
    cols.emplace(code & ((uint64_t{1} << rsh) - 1), 0);
  }
  int idx = 0;
  for (auto& [k, v] : rows) v = idx++;
  idx = 0;
  for (auto& [k, v] : cols) v = idx++;
  Mat<S> m(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (const auto& [code, c] : op.terms)
    m.at(rows[code >> rsh], cols[code & ((uint64_t{1} << rsh) - 1)]) += c;
  return m;
}

}  // namespace wgs
