#include <catch2/catch_amalgamated.hpp>

#include "wgs/observables.hpp"
#include "wgs/serialize.hpp"

using namespace wgs;

namespace {
const Coloring kCol = resolved_coloring();
const AmplitudeTable kTable;

TruncatedGraph graph_for(int n) { return build_graph(levels_for_sites(n), kCol); }

GaussianRational q(long num, long den = 1) { return GaussianRational(Rational(num, den)); }

const ExactParams kA{Rational(1), Rational(4)};
const ExactParams kB{Rational(2, 3), Rational(7, 5)};
}  // namespace

TEST_CASE("normalization traces are frozen at two rational points") {
  struct Row {
    int n;
    ExactParams p;
    GaussianRational norm;
  };
  const Row rows[] = {
      {2, kA, q(41)},
      {2, kB, GaussianRational(Rational(41764, 2025))},
      {3, kA, GaussianRational(Rational(2337, 4))},
      {3, kB, GaussianRational(Rational(454475848, 4100625))},
      {4, kA, GaussianRational(Rational(191593, 16))},
      {4, kB, GaussianRational(Rational(5162274635872, 8303765625))},
  };
  for (const Row& r : rows) {
    TruncatedGraph g = graph_for(r.n);
    GaussianRational norm = norm_trace(g, kTable, r.n, r.p);
    CHECK(norm == r.norm);
    CHECK(norm == build_rho(g, kTable, r.n, r.p).trace());
  }
}

TEST_CASE("auxiliary contraction equals the direct trace at five sites") {
  TruncatedGraph g = graph_for(5);
  GaussianRational norm = norm_trace(g, kTable, 5, kB);
  CHECK(norm == GaussianRational(Rational(61464749645776864, 16815125390625)));
  CHECK(norm == build_rho(g, kTable, 5, kB).trace());
}

TEST_CASE("currents are uniform, ladder-symmetric, and frozen") {
  struct Row {
    int n;
    ExactParams p;
    GaussianRational j;
  };
  const Row rows[] = {
      {2, kA, q(20)},
      {2, kB, GaussianRational(Rational(320, 27))},
      {3, kA, q(205)},
      {3, kB, GaussianRational(Rational(668224, 10935))},
      {4, kA, GaussianRational(Rational(11685, 4))},
      {4, kB, GaussianRational(Rational(7271613568, 22143375))},
  };
  for (const Row& r : rows) {
    auto cur = current_profiles(graph_for(r.n), kTable, r.n, r.p);
    REQUIRE(cur.j_sigma.size() == static_cast<size_t>(r.n - 1));
    for (int b = 0; b < r.n - 1; ++b) {
      CHECK(cur.j_sigma[static_cast<size_t>(b)] == r.j);
      CHECK(cur.j_tau[static_cast<size_t>(b)] == r.j);
    }
    CHECK(cur.continuity_ok);
  }
}

TEST_CASE("discrete continuity holds as an operator identity") {
  for (int j = 1; j <= 4; ++j) {
    CHECK(current_continuity_residual(4, j, false).empty());
    CHECK(current_continuity_residual(4, j, true).empty());
  }
}

TEST_CASE("site profiles: frozen values, inversion antisymmetry, ladder symmetry") {
  auto sp2 = site_profiles(graph_for(2), kTable, 2, kA);
  CHECK(sp2.sz == std::vector<GaussianRational>{q(21), q(-21)});
  CHECK(sp2.tz == sp2.sz);
  CHECK(sp2.n_up == std::vector<GaussianRational>{q(10), q(31)});
  CHECK(sp2.n_dn == sp2.n_up);

  auto sp3 = site_profiles(graph_for(3), kTable, 3, kA);
  CHECK(sp3.sz == std::vector<GaussianRational>{GaussianRational(Rational(1517, 4)), q(0),
                                                GaussianRational(Rational(-1517, 4))});
  CHECK(sp3.tz == sp3.sz);
  CHECK(sp3.n_up == std::vector<GaussianRational>{GaussianRational(Rational(205, 2)),
                                                  GaussianRational(Rational(2337, 8)),
                                                  GaussianRational(Rational(1927, 4))});

  for (int n = 2; n <= 4; ++n) {
    auto sp = site_profiles(graph_for(n), kTable, n, kB);
    for (int j = 0; j < n; ++j) {
      CHECK(sp.sz[static_cast<size_t>(j)] + sp.sz[static_cast<size_t>(n - 1 - j)] ==
            GaussianRational());
      CHECK(sp.tz[static_cast<size_t>(j)] == sp.sz[static_cast<size_t>(j)]);
      // occupation mirrors the polarization through half filling
      CHECK(sp.n_up[static_cast<size_t>(j)] + sp.n_up[static_cast<size_t>(n - 1 - j)] == sp.norm);
    }
  }
}

TEST_CASE("half filling and zero magnetization") {
  for (int n = 2; n <= 5; ++n) {
    auto sp = site_profiles(graph_for(n), kTable, n, kA);
    GaussianRational fill, mag;
    for (int j = 0; j < n; ++j) {
      fill = fill + sp.n_up[static_cast<size_t>(j)] + sp.n_dn[static_cast<size_t>(j)];
      mag = mag + sp.n_up[static_cast<size_t>(j)] - sp.n_dn[static_cast<size_t>(j)];
    }
    CHECK(fill == sp.norm * q(n));
    CHECK(mag == GaussianRational());
  }
}

TEST_CASE("expectation cross-check against sparse multiplication") {
  TruncatedGraph g = graph_for(3);
  auto rho = build_rho(g, kTable, 3, kA);
  SparseOp<GaussianRational> z1 =
      SparseOp<GaussianRational>::from_sites(3, {{1, {PIdx::Zed, PIdx::Id}}}, q(1));
  CHECK(sparse_expectation_raw(z1, rho) == GaussianRational(Rational(1517, 4)));
}

TEST_CASE("symmetry report: identities hold, invariant traces are data") {
  const GaussianRational cas[] = {q(15), GaussianRational(Rational(7011, 32)),
                                  GaussianRational(Rational(259407, 64))};
  const double resid[] = {15.75, 438.1875, 13908.609375};
  for (int n = 2; n <= 4; ++n) {
    auto rep = symmetry_checks(graph_for(n), kTable, n, kA);
    CHECK(rep.ok(0.0));
    CHECK(rep.algebra_ok);
    CHECK(rep.casimir_trace == cas[n - 2]);
    CHECK(rep.casimir_resid == Catch::Approx(resid[n - 2]).epsilon(1e-12));
    // the finite-drive invariant trace does NOT sit at the zero-drive constant
    CHECK(rep.casimir_resid > 1.0);
  }
}

TEST_CASE("chemical-potential shifts leave the state stationary") {
  GaussianRational mu_up(Rational(3, 7)), mu_dn(Rational(-2, 5));
  for (int n = 2; n <= 4; ++n)
    CHECK(check_shifted_fixed_point(graph_for(n), kTable, n, kA, mu_up, mu_dn).exact_zero);
}

TEST_CASE("undriven limit is the infinite-temperature state") {
  for (int n = 2; n <= 4; ++n) {
    ExactParams p{Rational(0), Rational(4)};
    GaussianRational expect = q(1);
    for (int i = 0; i < n; ++i) expect = expect * q(4);
    CHECK(norm_trace(graph_for(n), kTable, n, p) == expect);
  }
}

TEST_CASE("float currents at five and six sites are frozen and uniform") {
  struct Row {
    int n;
    double eps, u, j;
  };
  const Row rows[] = {
      {5, 0.5, 2.0, 0.3784611021017199},
      {5, 1.0, 4.0, 0.16529861107426411},
      {6, 0.5, 2.0, 0.35303852585109979},
      {6, 1.0, 4.0, 0.11303802212280532},
  };
  for (const Row& r : rows) {
    auto cur = current_profiles(graph_for(r.n), kTable, r.n, FloatParams(r.eps, r.u));
    ComplexF j0 = cur.j_sigma[0] / cur.norm;
    CHECK(j0.real() == Catch::Approx(r.j).epsilon(1e-14));
    CHECK(std::abs(j0.imag()) < 1e-14);
    for (const ComplexF& v : cur.j_sigma) CHECK(std::abs(v / cur.norm - j0) < 1e-12);
    for (const ComplexF& v : cur.j_tau) CHECK(std::abs(v / cur.norm - j0) < 1e-12);
  }
}

TEST_CASE("profile tables serialize to the pinned text") {
  TruncatedGraph g = graph_for(2);
  CHECK(site_csv(site_profiles(g, kTable, 2, kA)) ==
        "site,sz,tz,n_up,n_down\n"
        "1,21/41,21/41,10/41,10/41\n"
        "2,-21/41,-21/41,31/41,31/41\n");
  CHECK(bond_csv(current_profiles(g, kTable, 2, kA)) ==
        "bond,j_sigma,j_tau\n"
        "1,20/41,20/41\n");
  FloatParams fp(0.5, 2.0);
  CHECK(site_csv(site_profiles(g, kTable, 2, fp)) ==
        "site,sz,tz,n_up,n_down\n"
        "1,0.10819672131147541,0.10819672131147541,0.4459016393442623,0.4459016393442623\n"
        "2,-0.10819672131147541,-0.10819672131147541,0.5540983606557377,0.5540983606557377\n");
  CHECK(bond_csv(current_profiles(g, kTable, 2, fp)) ==
        "bond,j_sigma,j_tau\n"
        "1,0.4459016393442623,0.4459016393442623\n");
}
