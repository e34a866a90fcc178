#pragma once

// Deterministic JSON/CSV emission: operator dumps, proof certificates,
// colorings, amplitude audits, and observable tables. Exact values are
// printed as "p/q" strings; floats round-trip (JSON) or carry 17 significant
// digits (CSV). Term order follows the packed-code order, which coincides
// with lexicographic order of the text encoding.

#include <json.hpp>

#include <complex>
#include <cstdio>
#include <sstream>
#include <string>

#include "wgs/amplitudes.hpp"
#include "wgs/graph.hpp"
#include "wgs/observables.hpp"
#include "wgs/pauli.hpp"
#include "wgs/poly.hpp"
#include "wgs/proof.hpp"
#include "wgs/rational.hpp"

namespace wgs {

using ordered_json = nlohmann::ordered_json;

inline const char* family_name(EdgeFamily f) {
  switch (f) {
    case EdgeFamily::OriginLoop: return "origin_loop";
    case EdgeFamily::OriginToDiag: return "origin_to_diag";
    case EdgeFamily::DiagToOrigin: return "diag_to_origin";
    case EdgeFamily::OriginToHalf: return "origin_to_half";
    case EdgeFamily::HalfToOrigin: return "half_to_origin";
    case EdgeFamily::DiagToHalfUp: return "diag_to_half_up";
    case EdgeFamily::DiagToHalfDown: return "diag_to_half_down";
    case EdgeFamily::HalfLoop: return "half_loop";
    case EdgeFamily::HalfToDiagUp: return "half_to_diag_up";
    case EdgeFamily::HalfToDiagDown: return "half_to_diag_down";
    case EdgeFamily::HalfSwap: return "half_swap";
    case EdgeFamily::DiagUp: return "diag_up";
    case EdgeFamily::DiagDown: return "diag_down";
    case EdgeFamily::DiagLoop: return "diag_loop";
  }
  return "?";
}

// --- scalar encoders ---------------------------------------------------

inline std::string csv_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline ordered_json to_json(const Rational& r) { return r.str(); }

inline ordered_json to_json(const GaussianRational& g) {
  return ordered_json{{"re", g.re.str()}, {"im", g.im.str()}};
}

inline ordered_json to_json(const std::complex<double>& c) {
  return ordered_json{{"re", c.real()}, {"im", c.imag()}};
}

inline ordered_json to_json(const PolyEU& p) {
  ordered_json arr = ordered_json::array();
  for (const auto& [mono, coeff] : p.terms())
    arr.push_back(ordered_json{{"de", mono.de}, {"du", mono.du}, {"c", to_json(coeff)}});
  return arr;
}

// --- operator dumps ----------------------------------------------------

template <class S>
ordered_json state_json(const SparseOp<S>& op, const std::string& eps, const std::string& u,
                        const std::string& mode) {
  ordered_json j;
  j["n"] = op.n;
  j["eps"] = eps;
  j["u"] = u;
  j["mode"] = mode;
  ordered_json terms = ordered_json::array();
  for (const auto& [code, coeff] : op.terms)
    terms.push_back(ordered_json{{"string", code_to_text(code, op.n)}, {"coeff", to_json(coeff)}});
  j["terms"] = std::move(terms);
  return j;
}

// --- proof certificate -------------------------------------------------

inline ordered_json certificate_json(const Certificate& c) {
  ordered_json j;
  j["kmax"] = c.kmax;
  j["conditions_total"] = c.conditions_total();
  j["trivial"] = c.trivial_total();
  j["nontrivial_zero"] = c.nontrivial_zero_total();
  ordered_json viols = ordered_json::array();
  for (const Violation& v : c.violations)
    viols.push_back(ordered_json{{"where", v.where},
                                 {"class", v.cls},
                                 {"v", v.v},
                                 {"r", v.r},
                                 {"left_edge", v.left_edge},
                                 {"right_edge", v.right_edge},
                                 {"defect", v.defect}});
  j["violations"] = std::move(viols);
  j["amplitude_hash"] = c.amplitude_hash;
  j["defect_property_ok"] = c.defect_property.ok();
  j["boundary_defects_in_set"] = c.left_defects_in_set && c.right_defects_in_set;
  j["ok"] = c.ok();
  return j;
}

// --- coloring ----------------------------------------------------------

inline const char* color_name(Color c) { return c == Color::White ? "white" : "black"; }

// Map from periodic node-kind pattern (U/L, level mod 4) to a color name.
inline ordered_json coloring_json(const Coloring& col) {
  ordered_json j;
  for (int i = 0; i < 4; ++i) j["U" + std::to_string(i)] = color_name(col.upper[(size_t)i]);
  for (int i = 0; i < 4; ++i) j["L" + std::to_string(i)] = color_name(col.lower[(size_t)i]);
  return j;
}

inline Coloring coloring_from_json(const nlohmann::json& j) {
  Coloring col;
  auto parse = [](const std::string& s) {
    if (s == "white") return Color::White;
    if (s == "black") return Color::Black;
    throw std::invalid_argument("coloring entry must be \"white\" or \"black\"");
  };
  for (int i = 0; i < 4; ++i) {
    col.upper[(size_t)i] = parse(j.at("U" + std::to_string(i)).get<std::string>());
    col.lower[(size_t)i] = parse(j.at("L" + std::to_string(i)).get<std::string>());
  }
  return col;
}

// --- amplitude audit ---------------------------------------------------

// Every (family, level <= k_hi) amplitude as exact JSON for human diffing.
inline ordered_json amplitude_audit_json(const AmplitudeTable& table, int k_hi = 8) {
  ordered_json arr = ordered_json::array();
  auto dump = [&](EdgeFamily fam, int k, int mu) {
    Mat<PolyEU> m = table.amplitude_of(fam, k, mu);
    ordered_json entry;
    entry["family"] = family_name(fam);
    entry["k"] = k;
    if (mu != 0) entry["mu"] = mu;
    entry["rows"] = m.rows;
    entry["cols"] = m.cols;
    ordered_json cells = ordered_json::array();
    for (int r = 0; r < m.rows; ++r)
      for (int c = 0; c < m.cols; ++c)
        if (!m.at(r, c).is_zero())
          cells.push_back(ordered_json{{"r", r}, {"c", c}, {"poly", to_json(m.at(r, c))}});
    entry["entries"] = std::move(cells);
    arr.push_back(std::move(entry));
  };
  for (int mu : {+1, -1}) dump(EdgeFamily::OriginLoop, 0, mu);
  dump(EdgeFamily::OriginToDiag, 1, 0);
  dump(EdgeFamily::DiagToOrigin, 1, 0);
  dump(EdgeFamily::OriginToHalf, 1, 0);
  dump(EdgeFamily::HalfToOrigin, 1, 0);
  for (int k = 1; k <= k_hi; ++k) {
    dump(EdgeFamily::DiagToHalfUp, k, 0);
    dump(EdgeFamily::DiagToHalfDown, k, 0);
    dump(EdgeFamily::HalfLoop, k, 0);
    dump(EdgeFamily::HalfToDiagUp, k, 0);
    dump(EdgeFamily::HalfToDiagDown, k, 0);
    dump(EdgeFamily::HalfSwap, k, 0);
    dump(EdgeFamily::DiagUp, k, 0);
    dump(EdgeFamily::DiagDown, k, 0);
    for (int mu : {+1, -1}) dump(EdgeFamily::DiagLoop, k, mu);
  }
  return arr;
}

// --- observable tables -------------------------------------------------

namespace detail {
inline std::string csv_value(const GaussianRational& raw, const GaussianRational& norm) {
  GaussianRational v = raw / norm;
  if (!v.im.is_zero()) return "(" + v.re.str() + ")+(" + v.im.str() + ")i";
  return v.re.str();
}
inline std::string csv_value(const std::complex<double>& raw, const std::complex<double>& norm) {
  return csv_double((raw / norm).real());
}
}  // namespace detail

template <class S>
std::string site_csv(const SiteProfiles<S>& p) {
  std::ostringstream os;
  os << "site,sz,tz,n_up,n_down\n";
  for (size_t i = 0; i < p.sz.size(); ++i)
    os << (i + 1) << ',' << detail::csv_value(p.sz[i], p.norm) << ','
       << detail::csv_value(p.tz[i], p.norm) << ',' << detail::csv_value(p.n_up[i], p.norm) << ','
       << detail::csv_value(p.n_dn[i], p.norm) << '\n';
  return os.str();
}

template <class S>
std::string bond_csv(const CurrentProfiles<S>& p) {
  std::ostringstream os;
  os << "bond,j_sigma,j_tau\n";
  for (size_t i = 0; i < p.j_sigma.size(); ++i)
    os << (i + 1) << ',' << detail::csv_value(p.j_sigma[i], p.norm) << ','
       << detail::csv_value(p.j_tau[i], p.norm) << '\n';
  return os.str();
}

}  // namespace wgs
