#pragma once

// Small dense matrices over a generic scalar ring, plus dense realization of
// sparse chain operators. Used for oracles, rank computations, and the
// auxiliary-space matrices.

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wgs/pauli.hpp"
#include "wgs/scalar.hpp"

namespace wgs {

template <class T>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, ScalarOps<T>::zero()) {}

  T& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  const T& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  bool is_zero() const {
    for (const T& x : a)
      if (!ScalarOps<T>::is_zero(x)) return false;
    return true;
  }

  friend bool operator==(const Mat& x, const Mat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
};

template <class T>
Mat<T> mat_mul(const Mat<T>& x, const Mat<T>& y) {
  if (x.cols != y.rows) throw std::domain_error("mat_mul: shape mismatch");
  Mat<T> r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const T& v = x.at(i, k);
      if (ScalarOps<T>::is_zero(v)) continue;
      for (int j = 0; j < y.cols; ++j) {
        const T& w = y.at(k, j);
        if (ScalarOps<T>::is_zero(w)) continue;
        r.at(i, j) += v * w;
      }
    }
  return r;
}

template <class T>
Mat<T> mat_add(Mat<T> x, const Mat<T>& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw std::domain_error("mat_add: shape mismatch");
  for (size_t i = 0; i < x.a.size(); ++i) x.a[i] += y.a[i];
  return x;
}

template <class T>
Mat<T> mat_sub(Mat<T> x, const Mat<T>& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw std::domain_error("mat_sub: shape mismatch");
  for (size_t i = 0; i < x.a.size(); ++i) x.a[i] -= y.a[i];
  return x;
}

template <class T>
Mat<T> mat_scale(Mat<T> x, const T& s) {
  for (T& v : x.a) v = v * s;
  return x;
}

template <class T>
void mat_add_scaled(Mat<T>& x, const Mat<T>& y, const T& s) {
  if (x.rows != y.rows || x.cols != y.cols) throw std::domain_error("mat_add_scaled: shape mismatch");
  if (ScalarOps<T>::is_zero(s)) return;
  for (size_t i = 0; i < x.a.size(); ++i) {
    if (ScalarOps<T>::is_zero(y.a[i])) continue;
    x.a[i] += y.a[i] * s;
  }
}

template <class T>
Mat<T> mat_conj(Mat<T> x) {
  for (T& v : x.a) v = ScalarOps<T>::conj(v);
  return x;
}

template <class T>
Mat<T> mat_adjoint(const Mat<T>& x) {
  Mat<T> r(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r.at(j, i) = ScalarOps<T>::conj(x.at(i, j));
  return r;
}

template <class T>
Mat<T> mat_kron(const Mat<T>& x, const Mat<T>& y) {
  Mat<T> r(x.rows * y.rows, x.cols * y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) {
      const T& v = x.at(i, j);
      if (ScalarOps<T>::is_zero(v)) continue;
      for (int p = 0; p < y.rows; ++p)
        for (int q = 0; q < y.cols; ++q) {
          const T& w = y.at(p, q);
          if (ScalarOps<T>::is_zero(w)) continue;
          r.at(i * y.rows + p, j * y.cols + q) = v * w;
        }
    }
  return r;
}

// Row/column order for dense realization: basis states of n sites (two qubits
// each), ordered by descending occupation word. The word takes site 1 as the
// most significant pair of bits, the first ladder above the second, up = 1.
// Index 0 is the all-up state.
inline int dense_dim(int n) { return 1 << (2 * n); }

inline int dense_index(uint32_t word, int n) { return dense_dim(n) - 1 - static_cast<int>(word); }

// Nonzero elements of a single ladder label: (bra bit, ket bit, sign).
struct LadderElem {
  uint8_t bra, ket;
  int8_t sign;
};
inline const std::vector<LadderElem>& ladder_elems(PIdx s) {
  static const std::vector<LadderElem> table[4] = {
      {{1, 0, 1}},          // raising
      {{0, 1, 1}},          // lowering
      {{0, 0, 1}, {1, 1, 1}},
      {{0, 0, -1}, {1, 1, 1}},
  };
  return table[static_cast<int>(s)];
}

template <class S>
Mat<S> to_dense(const SparseOp<S>& op) {
  if (op.n < 1 || op.n > 6) throw std::domain_error("to_dense: site count out of range");
  int dim = dense_dim(op.n);
  Mat<S> m(dim, dim);
  for (const auto& [code, coeff] : op.terms) {
    struct Partial {
      uint32_t bra, ket;
      int sign;
    };
    std::vector<Partial> cur{{0, 0, 1}};
    for (int j = 1; j <= op.n; ++j) {
      SiteLabel l = SiteLabel::from_nibble(code_get(code, op.n, j));
      const auto& se = ladder_elems(l.s);
      const auto& te = ladder_elems(l.t);
      std::vector<Partial> next;
      next.reserve(cur.size() * se.size() * te.size());
      for (const Partial& p : cur)
        for (const LadderElem& es : se)
          for (const LadderElem& et : te)
            next.push_back({(p.bra << 2) | static_cast<uint32_t>((es.bra << 1) | et.bra),
                            (p.ket << 2) | static_cast<uint32_t>((es.ket << 1) | et.ket),
                            p.sign * es.sign * et.sign});
      cur = std::move(next);
    }
    for (const Partial& p : cur) {
      S v = coeff;
      if (p.sign < 0) v = -v;
      m.at(dense_index(p.bra, op.n), dense_index(p.ket, op.n)) += v;
    }
  }
  return m;
}

// Exact rank by Gaussian elimination; requires a field scalar.
inline int rank_exact(Mat<GaussianRational> m) {
  int rank = 0;
  for (int col = 0; col < m.cols && rank < m.rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < m.rows; ++r)
      if (!m.at(r, col).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (int c = col; c < m.cols; ++c) std::swap(m.at(rank, c), m.at(pivot, c));
    GaussianRational inv = GaussianRational(1) / m.at(rank, col);
    for (int r = rank + 1; r < m.rows; ++r) {
      if (m.at(r, col).is_zero()) continue;
      GaussianRational f = m.at(r, col) * inv;
      for (int c = col; c < m.cols; ++c) m.at(r, c) -= f * m.at(rank, c);
    }
    ++rank;
  }
  return rank;
}

template <class T>
bool is_upper_triangular(const Mat<T>& m) {
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < r && c < m.cols; ++c)
      if (!ScalarOps<T>::is_zero(m.at(r, c))) return false;
  return true;
}

template <class T>
bool is_lower_triangular(const Mat<T>& m) {
  for (int r = 0; r < m.rows; ++r)
    for (int c = r + 1; c < m.cols; ++c)
      if (!ScalarOps<T>::is_zero(m.at(r, c))) return false;
  return true;
}

}  // namespace wgs
