#include <catch2/catch_amalgamated.hpp>

#include "wgs/amplitudes.hpp"
#include "wgs/serialize.hpp"

using namespace wgs;

namespace {
PolyEU c_gr(long n, long d = 1) { return PolyEU::constant(GaussianRational(Rational(n, d))); }
PolyEU c_gi(long n, long d = 1) {
  return PolyEU::constant(GaussianRational(Rational(0), Rational(n, d)));
}
}  // namespace

TEST_CASE("table passes its structural audit on a deep graph") {
  AmplitudeTable t;
  TruncatedGraph g = build_graph(12, resolved_coloring());
  CHECK_NOTHROW(validate_table(t, g));
}

TEST_CASE("low-level entries are pinned") {
  AmplitudeTable t;
  const PolyEU e = PolyEU::eps();
  const PolyEU u = PolyEU::u();

  // origin ring
  Mat<PolyEU> od = t.amplitude_of(EdgeFamily::OriginToDiag, 1, 0);
  REQUIRE((od.rows == 1 && od.cols == 2));
  CHECK(od.at(0, 0) == c_gi(2) * e);
  CHECK(od.at(0, 1).is_zero());

  Mat<PolyEU> do_ = t.amplitude_of(EdgeFamily::DiagToOrigin, 1, 0);
  REQUIRE((do_.rows == 2 && do_.cols == 1));
  CHECK(do_.at(0, 0) == (PolyEU::i() * e - u) * c_gr(1, 2));
  CHECK(do_.at(1, 0) == c_gr(-1));

  CHECK(t.amplitude_of(EdgeFamily::OriginToHalf, 1, 0).at(0, 0) == e);
  CHECK(t.amplitude_of(EdgeFamily::HalfToOrigin, 1, 0).at(0, 0) == c_gi(-1));

  // the dead branch of the origin loop pair
  CHECK(t.amplitude_of(EdgeFamily::OriginLoop, 0, +1).at(0, 0) == PolyEU::one());
  CHECK(t.amplitude_of(EdgeFamily::OriginLoop, 0, -1).is_zero());

  // one level-dependent family, both branch signs
  CHECK(t.amplitude_of(EdgeFamily::HalfLoop, 1, 0).at(0, 0) == e * c_gi(-1, 2));
  CHECK(t.amplitude_of(EdgeFamily::HalfLoop, 2, 0).at(0, 0) == e * c_gi(1, 2));
}

TEST_CASE("sign factors repeat with period four") {
  AmplitudeTable t;
  for (EdgeFamily fam : {EdgeFamily::DiagToHalfDown, EdgeFamily::HalfLoop,
                         EdgeFamily::HalfToDiagDown, EdgeFamily::DiagUp, EdgeFamily::DiagDown}) {
    for (int k = 1; k <= 4; ++k)
      CHECK(t.amplitude_of(fam, k + 4, 0) == t.amplitude_split(fam, 0, k, k + 4));
  }
  for (int mu : {+1, -1})
    for (int k = 1; k <= 4; ++k)
      CHECK(t.amplitude_of(EdgeFamily::DiagLoop, k + 4, mu) ==
            t.amplitude_split(EdgeFamily::DiagLoop, mu, k, k + 4));
}

TEST_CASE("content hash is deterministic and sensitive to any entry") {
  AmplitudeTable t;
  CHECK(amplitude_table_hash(t) == "25bded3eb7712b49");
  CHECK(amplitude_table_hash(t) == amplitude_table_hash(AmplitudeTable{}));
  AmplitudeTable mutated;
  mutated.mutate_diag_up = true;
  CHECK(amplitude_table_hash(mutated) == "2d72464e3801e333");
}

TEST_CASE("the mutation hook flips exactly one entry family") {
  AmplitudeTable clean, mutated;
  mutated.mutate_diag_up = true;
  for (int k = 1; k <= 5; ++k) {
    Mat<PolyEU> a = clean.amplitude_of(EdgeFamily::DiagUp, k, 0);
    Mat<PolyEU> b = mutated.amplitude_of(EdgeFamily::DiagUp, k, 0);
    CHECK(b.at(0, 0) == -a.at(0, 0));
    CHECK(clean.amplitude_of(EdgeFamily::DiagDown, k, 0) ==
          mutated.amplitude_of(EdgeFamily::DiagDown, k, 0));
  }
}

TEST_CASE("audit dump covers every family at every requested level") {
  AmplitudeTable t;
  ordered_json audit = amplitude_audit_json(t, 8);
  // 2 origin-loop branches + 4 fixed low families + 8 levels x (8 families + 2 loop branches)
  CHECK(audit.size() == 2 + 4 + 8 * 10);
  for (const auto& entry : audit) {
    CHECK(entry.contains("family"));
    CHECK(entry.contains("entries"));
  }
}
