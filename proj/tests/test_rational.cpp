#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "wgs/rational.hpp"

using namespace wgs;
using wgs::testing::random_gaussian;
using wgs::testing::random_nonzero_gaussian;
using wgs::testing::random_nonzero_rational;
using wgs::testing::random_rational;

TEST_CASE("rational arithmetic is exact") {
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, 3) / Rational(7, 5) == Rational(10, 21));
  CHECK(Rational(1, 3) * Rational(3) == Rational(1));
  CHECK(Rational(7, 2) - Rational(7, 2) == Rational(0));
  CHECK((Rational(1, 10) + Rational(2, 10)) == Rational(3, 10));
}

TEST_CASE("rational normalization and text form") {
  CHECK(Rational(4).str() == "4/1");
  CHECK(Rational(-3, 6).str() == "-1/2");
  CHECK(Rational(0, 5).str() == "0/1");
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-1, 2).sign() == -1);
  CHECK(Rational(0).is_zero());
  CHECK(Rational(1, 2).to_double() == 0.5);
}

TEST_CASE("rational field axioms on random triples") {
  std::mt19937 rng(20240817);
  for (int trial = 0; trial < 200; ++trial) {
    Rational a = random_rational(rng), b = random_rational(rng), c = random_rational(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    Rational d = random_nonzero_rational(rng);
    CHECK(a / d * d == a);
  }
}

TEST_CASE("gaussian rational is a field extension by i") {
  GaussianRational i = GaussianRational::i();
  CHECK(i * i == GaussianRational(Rational(-1)));
  CHECK(i.conj() == -i);
  GaussianRational z(Rational(3, 4), Rational(-2, 5));
  CHECK(z + z.conj() == GaussianRational(Rational(3, 2)));
  CHECK((z * z.conj()).im.is_zero());
  CHECK(z.re == Rational(3, 4));
  CHECK(z.im == Rational(-2, 5));
}

TEST_CASE("gaussian rational field axioms and conjugation on random triples") {
  std::mt19937 rng(20240818);
  for (int trial = 0; trial < 200; ++trial) {
    GaussianRational a = random_gaussian(rng), b = random_gaussian(rng),
                     c = random_gaussian(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a * b).conj() == a.conj() * b.conj());
    CHECK((a + b).conj() == a.conj() + b.conj());
    GaussianRational d = random_nonzero_gaussian(rng);
    CHECK(a / d * d == a);
  }
}

TEST_CASE("complex embedding matches componentwise doubles") {
  GaussianRational z(Rational(3, 4), Rational(-2, 5));
  std::complex<double> c = z.to_complex();
  CHECK(c.real() == 0.75);
  CHECK(c.imag() == -0.4);
}
