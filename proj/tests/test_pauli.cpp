#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "wgs/dense.hpp"
#include "wgs/pauli.hpp"

using namespace wgs;
using wgs::testing::random_op;

namespace {

using Op = SparseOp<GaussianRational>;

Op one_site(PIdx s, PIdx t, GaussianRational c = GaussianRational(1)) {
  return Op::from_sites(1, {{1, SiteLabel{s, t}}}, c);
}

const GaussianRational kHalf{Rational(1, 2)};
const GaussianRational kI = GaussianRational::i();

}  // namespace

TEST_CASE("single-ladder product table on the first ladder") {
  Op plus = one_site(PIdx::Plus, PIdx::Id);
  Op minus = one_site(PIdx::Minus, PIdx::Id);
  Op zed = one_site(PIdx::Zed, PIdx::Id);
  Op id = one_site(PIdx::Id, PIdx::Id);

  // raising times lowering resolves to the upper projector
  CHECK(op_mul(plus, minus) == id.scaled(kHalf) + zed.scaled(kHalf));
  CHECK(op_mul(minus, plus) == id.scaled(kHalf) - zed.scaled(kHalf));
  // diagonal label orients the ladder operators
  CHECK(op_mul(zed, plus) == plus);
  CHECK(op_mul(plus, zed) == plus.scaled(-GaussianRational(1)));
  CHECK(op_mul(zed, minus) == minus.scaled(-GaussianRational(1)));
  CHECK(op_mul(minus, zed) == minus);
  CHECK(op_mul(zed, zed) == id);
  CHECK(op_mul(plus, plus).empty());
  CHECK(op_mul(minus, minus).empty());
}

TEST_CASE("the two ladders commute within a site") {
  Op a = one_site(PIdx::Plus, PIdx::Zed);
  Op b = one_site(PIdx::Minus, PIdx::Plus);
  CHECK(commutator(one_site(PIdx::Plus, PIdx::Id), one_site(PIdx::Id, PIdx::Minus)).empty());
  // mixed product respects per-ladder tables
  CHECK(op_mul(a, b) ==
        (one_site(PIdx::Id, PIdx::Plus).scaled(kHalf) +
         one_site(PIdx::Zed, PIdx::Plus).scaled(kHalf)));
}

TEST_CASE("trace sees only the identity string") {
  Op op(2);
  op.add_term(identity_code(2), GaussianRational(Rational(3, 7)));
  op.add_term(0x5A, GaussianRational(1));  // one non-identity string
  CHECK(op.trace() == GaussianRational(Rational(3 * 16, 7)));
  CHECK(Op(3).trace().is_zero());
}

TEST_CASE("label text round trip") {
  std::mt19937 rng(20240824);
  std::uniform_int_distribution<int> nib(0, 15);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + trial % 6;
    uint64_t code = 0;
    for (int j = 0; j < n; ++j) code = (code << 4) | static_cast<uint64_t>(nib(rng));
    auto [n2, code2] = code_from_text(code_to_text(code, n));
    CHECK(n2 == n);
    CHECK(code2 == code);
  }
  CHECK_THROWS(code_from_text("+"));
  CHECK_THROWS(code_from_text("+0x-"));
}

TEST_CASE("adjoint is an involution and swaps ladder direction") {
  CHECK(one_site(PIdx::Plus, PIdx::Zed).adjoint() == one_site(PIdx::Minus, PIdx::Zed));
  std::mt19937 rng(20240825);
  for (int trial = 0; trial < 50; ++trial) {
    Op a = random_op(rng, 3), b = random_op(rng, 3);
    CHECK(a.adjoint().adjoint() == a);
    CHECK(op_mul(a, b).adjoint() == op_mul(b.adjoint(), a.adjoint()));
  }
}

TEST_CASE("commutator algebra") {
  std::mt19937 rng(20240826);
  for (int trial = 0; trial < 30; ++trial) {
    Op a = random_op(rng, 2, 3), b = random_op(rng, 2, 3), c = random_op(rng, 2, 3);
    CHECK(commutator(a, b) == (commutator(b, a).scaled(-GaussianRational(1))));
    // Jacobi identity
    Op j = commutator(a, commutator(b, c));
    j += commutator(b, commutator(c, a));
    j += commutator(c, commutator(a, b));
    CHECK(j.empty());
  }
}

TEST_CASE("sparse algebra matches dense matrices on random operators") {
  std::mt19937 rng(20240827);
  for (int trial = 0; trial < 150; ++trial) {
    Op a = random_op(rng, 3), b = random_op(rng, 3);
    Mat<GaussianRational> da = to_dense(a), db = to_dense(b);
    CHECK(to_dense(op_mul(a, b)) == mat_mul(da, db));
    CHECK(to_dense(a.adjoint()) == mat_adjoint(da));
    GaussianRational tr;
    for (int i = 0; i < da.rows; ++i) tr += da.at(i, i);
    CHECK(a.trace() == tr);
    // Hilbert-Schmidt norm against the dense trace of the square
    Mat<GaussianRational> sq = mat_mul(mat_adjoint(da), da);
    GaussianRational hs;
    for (int i = 0; i < sq.rows; ++i) hs += sq.at(i, i);
    CHECK(a.hs_norm_sq() == hs);
  }
}

TEST_CASE("site projection strips one site and keeps coefficients") {
  Op op = Op::from_sites(3, {{1, {PIdx::Plus, PIdx::Id}}, {3, {PIdx::Zed, PIdx::Minus}}},
                         GaussianRational(Rational(2, 3)));
  Op proj = op.hs_project(1, {PIdx::Plus, PIdx::Id});
  Op expect = Op::from_sites(2, {{2, {PIdx::Zed, PIdx::Minus}}}, GaussianRational(Rational(2, 3)));
  CHECK(proj == expect);
  CHECK(op.hs_project(1, {PIdx::Minus, PIdx::Id}).empty());
}

TEST_CASE("occupation-word balance predicate on label strings") {
  // balanced: raising and lowering counts agree on each ladder prefix-wise
  auto [n1, c1] = code_from_text("+0.-0");
  CHECK(code_ballot_ok(c1, n1));
  auto [n2, c2] = code_from_text("++.--");
  CHECK(code_ballot_ok(c2, n2));
  auto [n3, c3] = code_from_text("+0.00");
  CHECK(!code_ballot_ok(c3, n3));
  auto [n4, c4] = code_from_text("-0.+0");
  CHECK(!code_ballot_ok(c4, n4));

  Op good(2);
  good.add_term(c1, GaussianRational(1));
  CHECK(ballot_check(good));
  good.add_term(c3, GaussianRational(1));
  CHECK(!ballot_check(good));
}

TEST_CASE("weights multiply across sites") {
  auto [n, code] = code_from_text("+z.00");
  CHECK(code_weight(code, n) == 1 * 2 * 2 * 2);
  CHECK(code_weight(identity_code(3), 3) == 64);
}
