#pragma once

// Sparse operator algebra on a chain of sites, each carrying two qubits
// (two Pauli ladders per site). Operators are stored as maps from packed
// label strings to coefficients in a generic scalar ring.
//
// Per-ladder basis {+, -, 0, z} = {raising, lowering, identity, sigma-z}.
// This basis is closed under multiplication with coefficients in {+-1, +-1/2};
// it is orthogonal (not orthonormal) under the trace inner product, with
// per-ladder weights tr(x^dag x) = 1, 1, 2, 2.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wgs/scalar.hpp"

namespace wgs {

enum class PIdx : uint8_t { Plus = 0, Minus = 1, Id = 2, Zed = 3 };

inline constexpr char kLabelChar[4] = {'+', '-', '0', 'z'};
inline constexpr int kLabelWeight[4] = {1, 1, 2, 2};

inline PIdx label_from_char(char c) {
  switch (c) {
    case '+': return PIdx::Plus;
    case '-': return PIdx::Minus;
    case '0': return PIdx::Id;
    case 'z': return PIdx::Zed;
    default: throw std::invalid_argument(std::string("bad ladder label '") + c + "'");
  }
}

struct SiteLabel {
  PIdx s = PIdx::Id, t = PIdx::Id;
  uint8_t nibble() const {
    return static_cast<uint8_t>((static_cast<uint8_t>(s) << 2) | static_cast<uint8_t>(t));
  }
  static SiteLabel from_nibble(uint8_t nib) {
    return {static_cast<PIdx>((nib >> 2) & 3), static_cast<PIdx>(nib & 3)};
  }
  friend bool operator==(const SiteLabel& a, const SiteLabel& b) {
    return a.s == b.s && a.t == b.t;
  }
  friend bool operator<(const SiteLabel& a, const SiteLabel& b) {
    return a.nibble() < b.nibble();
  }
};

// Packed strings: one nibble per site, site 1 in the most significant used
// nibble. With the label order above, unsigned comparison of codes matches
// lexicographic comparison of the text encoding.
inline constexpr int kMaxSites = 16;

inline int nibble_shift(int n, int j) { return 4 * (n - j); }

inline uint8_t code_get(uint64_t code, int n, int j) {
  return static_cast<uint8_t>((code >> nibble_shift(n, j)) & 0xF);
}

inline uint64_t code_set(uint64_t code, int n, int j, uint8_t nib) {
  int sh = nibble_shift(n, j);
  return (code & ~(uint64_t{0xF} << sh)) | (uint64_t{nib} << sh);
}

inline uint64_t identity_code(int n) {
  uint64_t c = 0;
  for (int j = 0; j < n; ++j) c = (c << 4) | 0xA;  // (0,0) on every site
  return c;
}

inline uint64_t code_weight(uint64_t code, int n) {
  uint64_t w = 1;
  for (int j = 1; j <= n; ++j) {
    SiteLabel l = SiteLabel::from_nibble(code_get(code, n, j));
    w *= static_cast<uint64_t>(kLabelWeight[static_cast<int>(l.s)] *
                               kLabelWeight[static_cast<int>(l.t)]);
  }
  return w;
}

inline std::string code_to_text(uint64_t code, int n) {
  std::string out;
  for (int j = 1; j <= n; ++j) {
    if (j > 1) out += '.';
    SiteLabel l = SiteLabel::from_nibble(code_get(code, n, j));
    out += kLabelChar[static_cast<int>(l.s)];
    out += kLabelChar[static_cast<int>(l.t)];
  }
  return out;
}

inline std::pair<int, uint64_t> code_from_text(const std::string& text) {
  uint64_t code = 0;
  int n = 0;
  size_t i = 0;
  while (i < text.size()) {
    if (i + 1 >= text.size()) throw std::invalid_argument("truncated site label");
    SiteLabel l{label_from_char(text[i]), label_from_char(text[i + 1])};
    code = (code << 4) | l.nibble();
    ++n;
    i += 2;
    if (i < text.size()) {
      if (text[i] != '.') throw std::invalid_argument("expected '.' between sites");
      ++i;
    }
  }
  if (n == 0 || n > kMaxSites) throw std::invalid_argument("bad site count");
  return {n, code};
}

// Product of two single-ladder labels, expanded over the basis.
struct ChainProdEntry {
  uint8_t idx;
  int8_t num;      // +-1
  uint8_t halves;  // coefficient num / 2^halves
};
struct ChainProd {
  uint8_t count;
  ChainProdEntry e[2];
};

inline const ChainProd& chain_mul(PIdx a, PIdx b) {
  static constexpr ChainProd kTable[4][4] = {
      // Plus * ...
      {{0, {}},
       {2, {{2, 1, 1}, {3, 1, 1}}},   // +- = 1/2(0+z)
       {1, {{0, 1, 0}}},
       {1, {{0, -1, 0}}}},
      // Minus * ...
      {{2, {{2, 1, 1}, {3, -1, 1}}},  // -+ = 1/2(0-z)
       {0, {}},
       {1, {{1, 1, 0}}},
       {1, {{1, 1, 0}}}},
      // Id * ...
      {{1, {{0, 1, 0}}}, {1, {{1, 1, 0}}}, {1, {{2, 1, 0}}}, {1, {{3, 1, 0}}}},
      // Zed * ...
      {{1, {{0, 1, 0}}}, {1, {{1, -1, 0}}}, {1, {{3, 1, 0}}}, {1, {{2, 1, 0}}}},
  };
  return kTable[static_cast<int>(a)][static_cast<int>(b)];
}

// Product of two site labels (both ladders), up to 4 basis terms.
struct SiteProdEntry {
  uint8_t nib;
  int8_t num;
  uint8_t halves;
};
struct SiteProd {
  uint8_t count = 0;
  SiteProdEntry e[4];
};

inline const SiteProd& site_mul(uint8_t na, uint8_t nb) {
  static const std::array<SiteProd, 256> table = [] {
    std::array<SiteProd, 256> t{};
    for (int a = 0; a < 16; ++a)
      for (int b = 0; b < 16; ++b) {
        SiteLabel la = SiteLabel::from_nibble(static_cast<uint8_t>(a));
        SiteLabel lb = SiteLabel::from_nibble(static_cast<uint8_t>(b));
        const ChainProd& ps = chain_mul(la.s, lb.s);
        const ChainProd& pt = chain_mul(la.t, lb.t);
        SiteProd& out = t[static_cast<size_t>(a * 16 + b)];
        for (int i = 0; i < ps.count; ++i)
          for (int j = 0; j < pt.count; ++j) {
            SiteProdEntry ent;
            ent.nib = static_cast<uint8_t>((ps.e[i].idx << 2) | pt.e[j].idx);
            ent.num = static_cast<int8_t>(ps.e[i].num * pt.e[j].num);
            ent.halves = static_cast<uint8_t>(ps.e[i].halves + pt.e[j].halves);
            out.e[out.count++] = ent;
          }
      }
    return t;
  }();
  return table[static_cast<size_t>(na) * 16 + nb];
}

inline uint8_t adjoint_nibble(uint8_t nib) {
  auto swap_pm = [](uint8_t x) -> uint8_t { return x < 2 ? x ^ 1 : x; };
  return static_cast<uint8_t>((swap_pm((nib >> 2) & 3) << 2) | swap_pm(nib & 3));
}

template <class S>
struct SparseOp {
  using Ops = ScalarOps<S>;

  int n = 0;
  std::map<uint64_t, S> terms;

  SparseOp() = default;
  explicit SparseOp(int sites) : n(sites) {
    if (sites < 0 || sites > kMaxSites) throw std::domain_error("SparseOp: bad site count");
  }

  static SparseOp identity(int n) {
    SparseOp a(n);
    a.terms.emplace(identity_code(n), Ops::one());
    return a;
  }

  static SparseOp from_sites(int n, const std::vector<std::pair<int, SiteLabel>>& labels,
                             const S& coeff) {
    SparseOp a(n);
    uint64_t code = identity_code(n);
    for (const auto& [site, l] : labels) {
      if (site < 1 || site > n) throw std::domain_error("SparseOp: site out of range");
      code = code_set(code, n, site, l.nibble());
    }
    a.add_term(code, coeff);
    return a;
  }

  bool empty() const { return terms.empty(); }
  size_t size() const { return terms.size(); }

  void add_term(uint64_t code, const S& c) {
    if (Ops::is_zero(c)) return;
    auto it = terms.find(code);
    if (it == terms.end()) {
      terms.emplace(code, c);
    } else {
      it->second += c;
      if (Ops::is_zero(it->second)) terms.erase(it);
    }
  }

  SparseOp& operator+=(const SparseOp& o) {
    check_same(o);
    for (const auto& [code, c] : o.terms) add_term(code, c);
    return *this;
  }
  SparseOp& operator-=(const SparseOp& o) {
    check_same(o);
    for (const auto& [code, c] : o.terms) add_term(code, -c);
    return *this;
  }
  friend SparseOp operator+(SparseOp a, const SparseOp& b) { return a += b; }
  friend SparseOp operator-(SparseOp a, const SparseOp& b) { return a -= b; }

  SparseOp scaled(const S& s) const {
    SparseOp r(n);
    if (Ops::is_zero(s)) return r;
    for (const auto& [code, c] : terms) {
      S v = c * s;
      if (!Ops::is_zero(v)) r.terms.emplace(code, v);
    }
    return r;
  }

  void add_scaled(const SparseOp& o, const S& s) {
    check_same(o);
    if (Ops::is_zero(s)) return;
    for (const auto& [code, c] : o.terms) add_term(code, c * s);
  }

  SparseOp adjoint() const {
    SparseOp r(n);
    for (const auto& [code, c] : terms) {
      uint64_t out = 0;
      for (int j = 1; j <= n; ++j)
        out = (out << 4) | adjoint_nibble(code_get(code, n, j));
      r.add_term(out, Ops::conj(c));
    }
    return r;
  }

  S trace() const {
    auto it = terms.find(identity_code(n));
    if (it == terms.end()) return Ops::zero();
    uint64_t dim = uint64_t{1} << (2 * n);
    return it->second * Ops::from_gaussian(GaussianRational(Rational(static_cast<long>(dim))));
  }

  // tr(A^dag A), exact in the exact rings; real by construction.
  S hs_norm_sq() const {
    S acc = Ops::zero();
    for (const auto& [code, c] : terms) {
      long w = static_cast<long>(code_weight(code, n));
      acc += c * Ops::conj(c) * Ops::from_gaussian(GaussianRational(Rational(w)));
    }
    return acc;
  }

  double max_abs_coeff() const {
    double m = 0;
    for (const auto& [code, c] : terms) {
      double a = Ops::abs_approx(c);
      if (a > m) m = a;
    }
    return m;
  }

  // Collect terms carrying the given label at site j, with that site removed.
  SparseOp hs_project(int j, SiteLabel l) const {
    if (j < 1 || j > n) throw std::domain_error("hs_project: site out of range");
    SparseOp r(n - 1);
    uint8_t want = l.nibble();
    for (const auto& [code, c] : terms) {
      if (code_get(code, n, j) != want) continue;
      int sh = nibble_shift(n, j);
      uint64_t high = code >> (sh + 4);
      uint64_t low = code & ((uint64_t{1} << sh) - 1);
      r.add_term((high << sh) | low, c);
    }
    return r;
  }

  friend bool operator==(const SparseOp& a, const SparseOp& b) {
    return a.n == b.n && a.terms == b.terms;
  }
  friend bool operator!=(const SparseOp& a, const SparseOp& b) { return !(a == b); }

 private:
  void check_same(const SparseOp& o) const {
    if (n != o.n) throw std::domain_error("SparseOp: site count mismatch");
  }
};

template <class S>
SparseOp<S> op_mul(const SparseOp<S>& a, const SparseOp<S>& b) {
  using Ops = ScalarOps<S>;
  if (a.n != b.n) throw std::domain_error("op_mul: site count mismatch");
  int n = a.n;
  SparseOp<S> r(n);
  if (n == 0) return r;
  struct Frame {
    const SiteProd* prod;
    int pos;
  };
  std::vector<Frame> stack(static_cast<size_t>(n));
  std::vector<uint64_t> codes(static_cast<size_t>(n) + 1, 0);
  std::vector<long> nums(static_cast<size_t>(n) + 1, 1);
  std::vector<int> halves(static_cast<size_t>(n) + 1, 0);
  for (const auto& [ca, va] : a.terms)
    for (const auto& [cb, vb] : b.terms) {
      S base = va * vb;
      if (Ops::is_zero(base)) continue;
      int depth = 0;
      stack[0] = {&site_mul(code_get(ca, n, 1), code_get(cb, n, 1)), 0};
      while (depth >= 0) {
        Frame& f = stack[static_cast<size_t>(depth)];
        if (f.pos >= f.prod->count) {
          --depth;
          if (depth >= 0) ++stack[static_cast<size_t>(depth)].pos;
          continue;
        }
        const SiteProdEntry& ent = f.prod->e[f.pos];
        codes[static_cast<size_t>(depth) + 1] =
            (codes[static_cast<size_t>(depth)] << 4) | ent.nib;
        nums[static_cast<size_t>(depth) + 1] =
            nums[static_cast<size_t>(depth)] * ent.num;
        halves[static_cast<size_t>(depth) + 1] =
            halves[static_cast<size_t>(depth)] + ent.halves;
        if (depth + 1 == n) {
          Rational f2(nums[static_cast<size_t>(n)], 1L << halves[static_cast<size_t>(n)]);
          r.add_term(codes[static_cast<size_t>(n)],
                     base * Ops::from_gaussian(GaussianRational(f2)));
          ++f.pos;
        } else {
          ++depth;
          stack[static_cast<size_t>(depth)] = {
              &site_mul(code_get(ca, n, depth + 1), code_get(cb, n, depth + 1)), 0};
        }
      }
    }
  return r;
}

template <class S>
SparseOp<S> commutator(const SparseOp<S>& a, const SparseOp<S>& b) {
  return op_mul(a, b) - op_mul(b, a);
}

// Per-ladder balance check: scanning sites left to right, the running count of
// raising minus lowering labels never goes negative and ends at zero, on each
// ladder separately.
inline bool code_ballot_ok(uint64_t code, int n) {
  int ds = 0, dt = 0;
  for (int j = 1; j <= n; ++j) {
    SiteLabel l = SiteLabel::from_nibble(code_get(code, n, j));
    if (l.s == PIdx::Plus) ++ds;
    if (l.s == PIdx::Minus) --ds;
    if (l.t == PIdx::Plus) ++dt;
    if (l.t == PIdx::Minus) --dt;
    if (ds < 0 || dt < 0) return false;
  }
  return ds == 0 && dt == 0;
}

template <class S>
bool ballot_check(const SparseOp<S>& a) {
  for (const auto& [code, c] : a.terms)
    if (!code_ballot_ok(code, a.n)) return false;
  return true;
}

}  // namespace wgs
