#pragma once

// Exploratory auxiliary-operator solver. The commutator closure of the factor
// is equivalent to a divergence-like relation for the one-site operator
// L = sum_{s,t} A_{s,t} sigma^s tau^t on (auxiliary space) x (one site):
//
//   [h, L *p L] = B *p L - L *p B
//
// where h is the symmetric two-site Hamiltonian density (interaction halved,
// so the chain sum reproduces the full model), *p couples two physical sites
// by a tensor product while multiplying auxiliary matrices, and B is an
// unknown operator of the same shape. This module assembles the relation on
// a level-truncated auxiliary space as an overdetermined linear system for
// the entries of B (block-tridiagonal in the level grading, like the A's),
// solves it in the least-squares sense at fixed numeric parameters, and
// reports how far the best B gets relative to doing nothing (B = 0).
// Equations are restricted to matrix entries whose assembly never touches
// the truncation boundary, so every retained row is exact for the infinite
// graph.

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseQR>

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wgs/amplitudes.hpp"
#include "wgs/graph.hpp"
#include "wgs/ness.hpp"
#include "wgs/pauli.hpp"
#include "wgs/scalar.hpp"

namespace wgs {

struct LodOptions {
  bool compute_rank = false;  // sparse QR rank/nullity (slow on large systems)
  double solver_tol = 1e-14;
  int max_iterations = 50000;
};

struct LodReport {
  int levels = 0;          // auxiliary truncation level
  int aux = 0;             // auxiliary dimension
  long rows = 0;           // assembled equations (complex)
  long cols = 0;           // unknown entries of B (complex)
  double baseline = 0;     // ||LHS|| with B = 0
  double residual = 0;     // ||LHS - (B *p L - L *p B)|| at the solution
  double relative = 0;     // residual / baseline
  double solution_norm = 0;  // ||B|| (nontriviality witness)
  double gauge_residual = 0;  // ||M vec(L)|| / ||vec(L)||: B = L solves the
                              // homogeneous part, so this must vanish
  long rank = -1;          // numerical rank (if requested)
  long nullity = -1;       // cols - rank (if requested)
  int iterations = 0;
  bool nontrivial(double rel_tol) const {
    return baseline > 0 && relative < rel_tol && solution_norm > 0;
  }
};

namespace detail {

// Level of each auxiliary-space index, from the node layout.
inline std::vector<int> aux_levels(const TruncatedGraph& g) {
  std::vector<int> lev(static_cast<size_t>(g.aux_dim), 0);
  for (const Node& node : g.nodes)
    for (int d = 0; d < node.dim; ++d) lev[static_cast<size_t>(node.aux + d)] = node.level;
  return lev;
}

}  // namespace detail

inline LodReport solve_lod(const TruncatedGraph& g, const AmplitudeTable& t, const Rational& eps,
                           const Rational& u, const LodOptions& opts = {}) {
  using C = std::complex<double>;
  using SpMat = Eigen::SparseMatrix<C>;

  FloatParams params(eps.to_double(), u.to_double());
  std::array<Mat<C>, 16> A = mpo_site_matrices(g, t, params);
  const int aux = g.aux_dim;
  std::vector<int> lev = detail::aux_levels(g);
  int top = 0;
  for (int l : lev) top = std::max(top, l);

  LodReport rep;
  rep.levels = top;
  rep.aux = aux;

  // Left-hand side: [h, w_a x w_b] expanded over the two-site basis gives the
  // structure constants; each (a, b) contributes its coefficient times the
  // auxiliary product A_a A_b to the (c, d) component.
  SparseOp<C> h = hamiltonian<C>(2, C(u.to_double() / 2, 0));
  std::vector<Mat<C>> lhs(256, Mat<C>(aux, aux));
  std::vector<bool> lhs_used(256, false);
  for (int a = 0; a < 16; ++a) {
    if (A[static_cast<size_t>(a)].is_zero()) continue;
    for (int b = 0; b < 16; ++b) {
      if (A[static_cast<size_t>(b)].is_zero()) continue;
      SparseOp<C> w = SparseOp<C>::from_sites(
          2, {{1, SiteLabel::from_nibble(static_cast<uint8_t>(a))},
              {2, SiteLabel::from_nibble(static_cast<uint8_t>(b))}},
          C(1, 0));
      SparseOp<C> comm = commutator(h, w);
      if (comm.empty()) continue;
      Mat<C> prod = mat_mul(A[static_cast<size_t>(a)], A[static_cast<size_t>(b)]);
      for (const auto& [code, coeff] : comm.terms) {
        int c = code_get(code, 2, 1), d = code_get(code, 2, 2);
        Mat<C>& target = lhs[static_cast<size_t>(c * 16 + d)];
        for (int r = 0; r < aux; ++r)
          for (int s = 0; s < aux; ++s) target.at(r, s) += coeff * prod.at(r, s);
        lhs_used[static_cast<size_t>(c * 16 + d)] = true;
      }
    }
  }

  // Unknowns: entries of B_c within one level of the diagonal blocks.
  std::vector<long> col_of(static_cast<size_t>(16) * aux * aux, -1);
  long ncols = 0;
  for (int c = 0; c < 16; ++c)
    for (int r = 0; r < aux; ++r)
      for (int s = 0; s < aux; ++s)
        if (std::abs(lev[static_cast<size_t>(r)] - lev[static_cast<size_t>(s)]) <= 1)
          col_of[(static_cast<size_t>(c) * aux + r) * aux + s] = ncols++;

  // Equations: component (c, d), interior entries (r, s) only.
  std::vector<Eigen::Triplet<C>> trips;
  std::vector<C> rhs_list;
  long nrows = 0;
  std::vector<std::pair<long, C>> row_entries;
  for (int c = 0; c < 16; ++c)
    for (int d = 0; d < 16; ++d) {
      const Mat<C>& L = lhs[static_cast<size_t>(c * 16 + d)];
      bool has_lhs = lhs_used[static_cast<size_t>(c * 16 + d)];
      const Mat<C>& Ad = A[static_cast<size_t>(d)];
      const Mat<C>& Ac = A[static_cast<size_t>(c)];
      if (!has_lhs && Ad.is_zero() && Ac.is_zero()) continue;
      for (int r = 0; r < aux; ++r) {
        if (lev[static_cast<size_t>(r)] >= top) continue;
        for (int s = 0; s < aux; ++s) {
          if (lev[static_cast<size_t>(s)] >= top) continue;
          row_entries.clear();
          for (int m = 0; m < aux; ++m) {
            C adv = Ad.at(m, s);
            if (adv != C(0, 0)) {
              long col = col_of[(static_cast<size_t>(c) * aux + r) * aux + m];
              if (col >= 0) row_entries.push_back({col, adv});
            }
            C acv = Ac.at(r, m);
            if (acv != C(0, 0)) {
              long col = col_of[(static_cast<size_t>(d) * aux + m) * aux + s];
              if (col >= 0) row_entries.push_back({col, -acv});
            }
          }
          C y = has_lhs ? L.at(r, s) : C(0, 0);
          if (row_entries.empty() && y == C(0, 0)) continue;
          for (const auto& [col, v] : row_entries)
            trips.emplace_back(static_cast<int>(nrows), static_cast<int>(col), v);
          rhs_list.push_back(y);
          ++nrows;
        }
      }
    }

  rep.rows = nrows;
  rep.cols = ncols;
  SpMat M(nrows, ncols);
  M.setFromTriplets(trips.begin(), trips.end());
  Eigen::VectorXcd y(nrows);
  for (long i = 0; i < nrows; ++i) y(i) = rhs_list[static_cast<size_t>(i)];
  rep.baseline = y.norm();

  // Self-check of the assembly: the shift B -> B + alpha L leaves the
  // divergence unchanged, so vec(L) must lie in the kernel of M.
  Eigen::VectorXcd xl = Eigen::VectorXcd::Zero(ncols);
  for (int c = 0; c < 16; ++c) {
    const Mat<C>& Ac = A[static_cast<size_t>(c)];
    if (Ac.is_zero()) continue;
    for (int r = 0; r < aux; ++r)
      for (int s = 0; s < aux; ++s) {
        long col = col_of[(static_cast<size_t>(c) * aux + r) * aux + s];
        if (col >= 0) xl(col) = Ac.at(r, s);
      }
  }
  double xl_norm = xl.norm();
  rep.gauge_residual = xl_norm > 0 ? (M * xl).norm() / xl_norm : 0.0;

  Eigen::LeastSquaresConjugateGradient<SpMat> solver;
  solver.setTolerance(opts.solver_tol);
  solver.setMaxIterations(opts.max_iterations);
  solver.compute(M);
  Eigen::VectorXcd x = solver.solve(y);
  rep.iterations = static_cast<int>(solver.iterations());
  rep.residual = (M * x - y).norm();
  rep.relative = rep.baseline > 0 ? rep.residual / rep.baseline : 0.0;
  rep.solution_norm = x.norm();

  if (opts.compute_rank) {
    Eigen::SparseQR<SpMat, Eigen::COLAMDOrdering<int>> qr;
    qr.compute(M);
    rep.rank = qr.rank();
    rep.nullity = ncols - rep.rank;
  }
  return rep;
}

}  // namespace wgs
