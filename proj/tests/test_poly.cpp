#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "wgs/poly.hpp"

using namespace wgs;
using wgs::testing::random_poly;
using wgs::testing::random_rational;

TEST_CASE("polynomial ring axioms on random triples") {
  std::mt19937 rng(20240819);
  for (int trial = 0; trial < 120; ++trial) {
    PolyEU a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK(a - a == PolyEU());
    CHECK(a * PolyEU::one() == a);
    CHECK((a * PolyEU()).is_zero());
  }
}

TEST_CASE("evaluation is a ring homomorphism at random rational points") {
  std::mt19937 rng(20240820);
  for (int trial = 0; trial < 60; ++trial) {
    PolyEU a = random_poly(rng), b = random_poly(rng);
    Rational e = random_rational(rng), uu = random_rational(rng);
    CHECK((a * b).eval(e, uu) == a.eval(e, uu) * b.eval(e, uu));
    CHECK((a + b).eval(e, uu) == a.eval(e, uu) + b.eval(e, uu));
  }
}

TEST_CASE("conjugation fixes the indeterminates and distributes over products") {
  CHECK(PolyEU::eps().conj() == PolyEU::eps());
  CHECK(PolyEU::u().conj() == PolyEU::u());
  CHECK(PolyEU::i().conj() == -PolyEU::i());
  std::mt19937 rng(20240821);
  for (int trial = 0; trial < 60; ++trial) {
    PolyEU a = random_poly(rng), b = random_poly(rng);
    CHECK((a * b).conj() == a.conj() * b.conj());
    CHECK(a.conj().conj() == a);
  }
}

TEST_CASE("rate negation flips odd powers only") {
  CHECK(PolyEU::eps().eps_negated() == -PolyEU::eps());
  PolyEU e2 = PolyEU::eps() * PolyEU::eps();
  CHECK(e2.eps_negated() == e2);
  std::mt19937 rng(20240822);
  for (int trial = 0; trial < 60; ++trial) {
    PolyEU p = random_poly(rng);
    Rational e = random_rational(rng), uu = random_rational(rng);
    CHECK(p.eps_negated().eval(e, uu) == p.eval(-e, uu));
    CHECK(p.eps_negated().eps_negated() == p);
  }
}

TEST_CASE("degree conventions") {
  CHECK(PolyEU().degrees() == std::pair{-1, -1});
  CHECK(PolyEU::one().degrees() == std::pair{0, 0});
  PolyEU t = PolyEU::term(GaussianRational(1), 3, 2);
  CHECK(t.degrees() == std::pair{3, 2});
  CHECK((t * t).degrees() == std::pair{6, 4});
  CHECK_THROWS(PolyEU::term(GaussianRational(1), -1, 0));
}

TEST_CASE("first-order coefficient extraction in the rate") {
  PolyEU p = PolyEU::one() + PolyEU::eps() * (PolyEU::u() + PolyEU::i()) +
             PolyEU::eps() * PolyEU::eps() * PolyEU::u();
  CHECK(p.d_eps_at_zero() == PolyEU::u() + PolyEU::i());
}

TEST_CASE("float evaluation agrees with the exact path") {
  std::mt19937 rng(20240823);
  for (int trial = 0; trial < 40; ++trial) {
    PolyEU p = random_poly(rng, 3, 2);
    Rational e(3, 2), uu(-5, 4);
    std::complex<double> exact = p.eval(e, uu).to_complex();
    std::complex<double> fl = p.eval(std::complex<double>(1.5), std::complex<double>(-1.25));
    CHECK(std::abs(exact - fl) < 1e-12);
  }
}
