#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "wgs/coloring_search.hpp"
#include "wgs/dense.hpp"
#include "wgs/ness.hpp"
#include "wgs/serialize.hpp"

#include <Eigen/Dense>

using namespace wgs;
using wgs::testing::random_op;

namespace {
const Coloring kCol = resolved_coloring();
const AmplitudeTable kTable;

TruncatedGraph graph_for(int n) { return build_graph(levels_for_sites(n), kCol); }

PolyEU term_of(const SparseOp<PolyEU>& op, const char* text) {
  auto [n, code] = code_from_text(text);
  REQUIRE(n == op.n);
  auto it = op.terms.find(code);
  return it == op.terms.end() ? PolyEU() : it->second;
}
}  // namespace

TEST_CASE("chain Hamiltonian is Hermitian with the expected footprint") {
  SparseOp<PolyEU> h = hamiltonian<PolyEU>(3, PolyEU::u());
  CHECK(h.adjoint() == h);
  CHECK(h.terms.size() == 8 + 3);  // four hop pairs per bond, one onsite term per site
  SparseOp<PolyEU> h0 = hamiltonian<PolyEU>(3, PolyEU());
  CHECK(h0.terms.size() == 8);
}

TEST_CASE("master-equation action preserves trace and hermiticity") {
  std::mt19937 rng(20240828);
  GaussianRational eps(Rational(2, 3)), u(Rational(7, 5));
  for (int trial = 0; trial < 25; ++trial) {
    SparseOp<GaussianRational> x = random_op(rng, 2, 6);
    SparseOp<GaussianRational> lx = lindblad_apply(x, eps, u);
    CHECK(lx.trace().is_zero());
    CHECK(lindblad_apply(x.adjoint(), eps, u) == lx.adjoint());
  }
}

TEST_CASE("two-site factor has the pinned symbolic form") {
  SymbolicParams sym;
  auto s2 = state_factor(graph_for(2), kTable, 2, sym);
  REQUIRE(s2.terms.size() == 4);
  const PolyEU e = PolyEU::eps(), u = PolyEU::u(), i = PolyEU::i();
  CHECK(term_of(s2, "00.00") == PolyEU::one());
  CHECK(term_of(s2, "+0.-0") == -(i * e));
  CHECK(term_of(s2, "0+.0-") == -(i * e));
  CHECK(term_of(s2, "++.--") == -(e * e) - i * e * u);
}

TEST_CASE("factor term counts are stable") {
  SymbolicParams sym;
  CHECK(state_factor(graph_for(3), kTable, 3, sym).terms.size() == 17);
  CHECK(state_factor(graph_for(4), kTable, 4, sym).terms.size() == 76);
}

TEST_CASE("walk enumeration and auxiliary contraction agree symbolically") {
  SymbolicParams sym;
  for (int n = 2; n <= 5; ++n) {
    TruncatedGraph g = graph_for(n);
    CHECK(state_factor_walks(g, kTable, n, sym) == state_factor_mpo(g, kTable, n, sym));
  }
}

TEST_CASE("every factor string balances both ladders") {
  SymbolicParams sym;
  for (int n = 2; n <= 5; ++n) CHECK(ballot_check(state_factor(graph_for(n), kTable, n, sym)));
}

TEST_CASE("coefficient degrees stay inside the driving and interaction bounds") {
  SymbolicParams sym;
  for (int n = 2; n <= 5; ++n) {
    auto s = state_factor(graph_for(n), kTable, n, sym);
    for (const auto& [code, poly] : s.terms) {
      auto [de, du] = poly.degrees();
      CHECK(de <= 2 * n);
      CHECK(du <= n);
    }
  }
}

TEST_CASE("amplitude conjugation is rate reversal") {
  AmplitudeTable t;
  TruncatedGraph g = build_graph(9, kCol);
  for (const Edge& e : g.edges) {
    Mat<PolyEU> a = t.amplitude(e);
    for (const PolyEU& p : a.a) CHECK(p.conj() == p.eps_negated());
  }
}

TEST_CASE("stationarity, symbolically at two sites") {
  SymbolicParams sym;
  auto rho = build_rho(graph_for(2), kTable, 2, sym);
  CHECK(rho.adjoint() == rho);
  SparseOp<PolyEU> resid = lindblad_apply(rho, sym.eps(), sym.u());
  CHECK(resid.empty());
}

TEST_CASE("stationarity on rational grids") {
  for (int n : {2, 3}) {
    TruncatedGraph g = graph_for(n);
    for (auto [pe, pu] : {std::pair{Rational(1), Rational(4)},
                          std::pair{Rational(2, 3), Rational(7, 5)},
                          std::pair{Rational(-3, 2), Rational(1, 3)}}) {
      ExactParams p{pe, pu};
      CHECK(check_fixed_point(g, kTable, n, p).exact_zero);
    }
  }
}

TEST_CASE("the conjugate branch is the stationary one") {
  // The tabulated amplitudes fix the factor up to conjugation; the branch
  // taken verbatim is NOT annihilated, its rate-reversed twin is.
  TruncatedGraph g = graph_for(2);
  ExactParams p{Rational(1), Rational(4)};
  auto wrong = steady_state(state_factor(g, kTable, 2, p));
  CHECK(!lindblad_apply(wrong, p.eps(), p.u()).empty());
  auto right = steady_state(state_factor(g, kTable, 2, negated_eps(p)));
  CHECK(lindblad_apply(right, p.eps(), p.u()).empty());
}

TEST_CASE("commutator closure of the factor") {
  SymbolicParams sym;
  for (int n : {2, 3}) CHECK(check_defining_relation(graph_for(n), kTable, n, sym).exact_zero);
  ExactParams p{Rational(2, 3), Rational(7, 5)};
  CHECK(check_defining_relation(graph_for(4), kTable, 4, p).exact_zero);
}

TEST_CASE("float stationarity residuals are tiny") {
  for (int n : {4, 5}) {
    TruncatedGraph g = graph_for(n);
    FloatParams p(0.5, 2.0);
    auto rep = check_fixed_point(g, kTable, n, p);
    auto rho = build_rho(g, kTable, n, p);
    double scale = std::sqrt(std::abs(rho.hs_norm_sq()));
    CHECK(rep.max_abs / scale < 1e-10);
  }
}

TEST_CASE("factor is upper triangular in the pinned dense ordering") {
  for (int n : {2, 3}) {
    TruncatedGraph g = graph_for(n);
    for (auto [pe, pu] : {std::pair{Rational(1), Rational(4)},
                          std::pair{Rational(2, 3), Rational(7, 5)}}) {
      ExactParams p{pe, pu};
      Mat<GaussianRational> d = to_dense(state_factor(g, kTable, n, p));
      CHECK(is_upper_triangular(d));
      CHECK(!is_lower_triangular(d));
      // unit diagonal ancestry: the all-up corner carries the identity weight
      CHECK(d.at(0, 0) == GaussianRational(1));
    }
  }
}

TEST_CASE("auxiliary matrices are block tridiagonal in the level grading") {
  TruncatedGraph g = build_graph(6, kCol);
  SymbolicParams sym;
  auto A = mpo_site_matrices(g, kTable, sym);
  std::vector<int> lev(static_cast<size_t>(g.aux_dim));
  for (const Node& nd : g.nodes)
    for (int d = 0; d < nd.dim; ++d) lev[static_cast<size_t>(nd.aux + d)] = nd.level;
  for (const auto& m : A)
    for (int r = 0; r < m.rows; ++r)
      for (int c = 0; c < m.cols; ++c)
        if (!m.at(r, c).is_zero())
          CHECK(std::abs(lev[static_cast<size_t>(r)] - lev[static_cast<size_t>(c)]) <= 1);
  // labels touching the diagonal generator never appear in the factor
  for (int nib = 0; nib < 16; ++nib) {
    SiteLabel l = SiteLabel::from_nibble(static_cast<uint8_t>(nib));
    if (l.s == PIdx::Zed || l.t == PIdx::Zed) CHECK(A[static_cast<size_t>(nib)].is_zero());
  }
}

TEST_CASE("bipartition ranks obey the Schmidt bound") {
  ExactParams p{Rational(1), Rational(4)};
  for (int n = 2; n <= 4; ++n) {
    auto s = state_factor(graph_for(n), kTable, n, p);
    for (int cut = 1; cut < n; ++cut) {
      int r = rank_exact(cut_matrix(s, cut));
      CHECK(r <= 4 * (n / 2));
      if (n == 2 && cut == 1) CHECK(r == 4);
    }
  }
}

TEST_CASE("first driving-order coefficient closes the boundary-charge relation") {
  SymbolicParams sym;
  for (int n = 2; n <= 4; ++n) {
    auto s = state_factor(graph_for(n), kTable, n, sym);
    SparseOp<PolyEU> z = charge_from_factor(s);
    CHECK(commutator(hamiltonian<PolyEU>(n, PolyEU::u()), z) == boundary_charge_target(n));
  }
}

TEST_CASE("factors at different driving strengths commute") {
  Rational u(3, 7);
  for (int n : {2, 3}) {
    TruncatedGraph g = graph_for(n);
    // grid strictly beyond the coefficient degree bound in the rate
    for (long a = 0; a <= 2 * n + 1; ++a)
      for (long b = a + 1; b <= 2 * n + 1; ++b) {
        auto sa = state_factor(g, kTable, n, ExactParams{Rational(a, 2), u});
        auto sb = state_factor(g, kTable, n, ExactParams{Rational(b, 2), u});
        CHECK(commutator(sa, sb).empty());
      }
  }
}

TEST_CASE("state dump is sorted and exactly reproducible") {
  ExactParams p{Rational(1), Rational(4)};
  auto s = state_factor(graph_for(2), kTable, 2, p);
  ordered_json j = state_json(s, "1/1", "4/1", "exact");
  REQUIRE(j["terms"].size() == 4);
  CHECK(j["terms"][0]["string"] == "++.--");
  CHECK(j["terms"][0]["coeff"]["re"] == "-1/1");
  CHECK(j["terms"][0]["coeff"]["im"] == "-4/1");
  CHECK(j["terms"][3]["string"] == "00.00");
  std::vector<std::string> strings;
  for (const auto& t : j["terms"]) strings.push_back(t["string"].get<std::string>());
  CHECK(std::is_sorted(strings.begin(), strings.end()));
  CHECK(state_json(s, "1/1", "4/1", "exact").dump() == j.dump());
}

TEST_CASE("positive semidefiniteness at float parameters") {
  for (int n : {2, 3}) {
    TruncatedGraph g = graph_for(n);
    FloatParams p(1.0, 4.0);
    Mat<ComplexF> d = to_dense(build_rho(g, kTable, n, p));
    // Hermitian by construction; Gershgorin-style check via dense eigenvalues
    int dim = d.rows;
    Eigen::MatrixXcd m(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) m(r, c) = d.at(r, c);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    double lo = es.eigenvalues().minCoeff();
    double hi = es.eigenvalues().maxCoeff();
    CHECK(hi > 0);
    CHECK(lo >= -1e-12 * hi);
  }
}
