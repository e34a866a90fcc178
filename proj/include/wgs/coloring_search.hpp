#pragma once

// Resolution of the half-step node coloring. The colors fix the resting edge
// labels, so they are pinned behaviorally: a candidate survives when (a) its
// graph builds with well-defined, non-clashing edge labels, (b) every local
// bulk and boundary condition holds symbolically up to a level cap, and
// (c) the generated state is stationary on small chains at generic rational
// parameters. The search space is all colorings periodic in the level with
// period four, independent per branch (256 candidates). The cheap two-site
// stationarity check runs first to thin the field; the surviving set is the
// intersection of all three criteria regardless of that ordering.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wgs/ness.hpp"
#include "wgs/proof.hpp"

namespace wgs {

struct ColoringResolution {
  std::vector<uint8_t> structural;   // (a) graph builds, label maps well defined
  std::vector<uint8_t> stationary2;  // pre-filter: stationary at n=2
  std::vector<uint8_t> local;        // + (b) all local conditions to the level cap
  std::vector<uint8_t> survivors;    // + (c) stationary at n=3: the resolved set
  uint8_t chosen = 0;
  bool unique_state = false;  // survivors all generate the same state factor
  bool resolved = false;
};

inline bool coloring_builds(uint8_t code, int levels) {
  try {
    TruncatedGraph g = build_graph(levels, Coloring::from_code(code));
    for (const Node& nd : g.nodes) {
      out_label_map(g, nd.id);
      in_label_map(g, nd.id);
    }
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

inline bool coloring_fixes_small_chain(uint8_t code, int n, const AmplitudeTable& table) {
  Coloring c = Coloring::from_code(code);
  TruncatedGraph g = build_graph(levels_for_sites(n), c);
  ExactParams p1{Rational(1), Rational(1)};
  ExactParams p2{Rational(2, 3), Rational(7, 5)};
  try {
    return check_fixed_point(g, table, n, p1).exact_zero &&
           check_fixed_point(g, table, n, p2).exact_zero;
  } catch (const std::exception&) {
    return false;
  }
}

inline ColoringResolution resolve_coloring(int local_kmax = 4) {
  if (local_kmax < 3) throw std::domain_error("resolve_coloring: level cap too small");
  AmplitudeTable table;
  ColoringResolution res;
  for (int code = 0; code < 256; ++code)
    if (coloring_builds(static_cast<uint8_t>(code), local_kmax + 2))
      res.structural.push_back(static_cast<uint8_t>(code));
  for (uint8_t code : res.structural)
    if (coloring_fixes_small_chain(code, 2, table)) res.stationary2.push_back(code);
  for (uint8_t code : res.stationary2) {
    ProofOptions opts;
    opts.kmax = local_kmax;
    opts.max_violations_recorded = 1;
    opts.fail_fast = true;
    Certificate cert = run_proof(Coloring::from_code(code), table, opts);
    if (cert.ok()) res.local.push_back(code);
  }
  for (uint8_t code : res.local)
    if (coloring_fixes_small_chain(code, 3, table)) res.survivors.push_back(code);
  if (res.survivors.empty()) return res;

  // Multiple survivors are acceptable only if they generate identical states;
  // then the smallest code is the canonical representative. Distinct states
  // would be a genuine ambiguity, reported via resolved = false.
  res.unique_state = true;
  ExactParams pref{Rational(3, 2), Rational(5, 7)};
  for (int n = 2; n <= 5 && res.unique_state; ++n) {
    TruncatedGraph g0 =
        build_graph(levels_for_sites(n), Coloring::from_code(res.survivors.front()));
    SparseOp<GaussianRational> s0 = state_factor(g0, table, n, pref);
    for (size_t idx = 1; idx < res.survivors.size(); ++idx) {
      TruncatedGraph gi =
          build_graph(levels_for_sites(n), Coloring::from_code(res.survivors[idx]));
      if (!(state_factor(gi, table, n, pref) == s0)) res.unique_state = false;
    }
  }
  res.chosen = res.survivors.front();
  res.resolved = res.unique_state;
  return res;
}

}  // namespace wgs
