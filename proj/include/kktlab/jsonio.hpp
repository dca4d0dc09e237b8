#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kktlab/chevalley.hpp"
#include "kktlab/kantorvf.hpp"
#include "kktlab/liealg.hpp"
#include "kktlab/report.hpp"
#include "kktlab/triplesys.hpp"

namespace kktlab {

/// Ordered maps keep emitted JSON byte-identical across runs.
using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaTag = "kktlab/1";

/// Rationals travel as "p/q" (or "p" when q = 1), decimal, no whitespace.
inline Json rational_to_json(const Rational& q) { return rat_str(q); }

inline Rational rational_from_json(const Json& j) {
  if (!j.is_string()) throw std::invalid_argument("rational: expected a \"p/q\" string");
  return rat_parse(j.get<std::string>());
}

/// {"dim", "labels", "entries": [[i,j,k,l,"p/q"], ...]} — entries sorted by
/// (i,j,k,l), zeros omitted.
inline Json tensor_to_json(const TripleTensor& t) {
  Json out;
  out["dim"] = t.dim();
  out["labels"] = t.labels();
  Json entries = Json::array();
  for (std::size_t i = 0; i < t.dim(); ++i)
    for (std::size_t j = 0; j < t.dim(); ++j)
      for (std::size_t k = 0; k < t.dim(); ++k)
        for (const auto& [l, c] : t.col(i, j, k).terms())
          entries.push_back(Json::array({i, j, k, l, rational_to_json(c)}));
  out["entries"] = std::move(entries);
  return out;
}

inline TripleTensor tensor_from_json(const Json& j) {
  TripleTensor t(j.at("dim").get<std::size_t>());
  if (j.contains("labels")) t.labels() = j["labels"].get<std::vector<std::string>>();
  for (const auto& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 5)
      throw std::invalid_argument("tensor entry: expected [i,j,k,l,\"p/q\"]");
    std::size_t i = e[0], jj = e[1], k = e[2], l = e[3];
    if (i >= t.dim() || jj >= t.dim() || k >= t.dim() || l >= t.dim())
      throw std::invalid_argument("tensor entry index out of range");
    t.col(i, jj, k).add_term(static_cast<std::uint32_t>(l), rational_from_json(e[4]));
  }
  return t;
}

/// {"dim", "grading", "entries": [[i,j,k,"p/q"], ...]} with i < j.
inline Json algebra_to_json(const StructureLieAlgebra& l) {
  Json out;
  out["dim"] = l.dim();
  out["grading"] = l.grading ? Json(*l.grading) : Json(nullptr);
  Json entries = Json::array();
  for (std::size_t i = 0; i < l.dim(); ++i)
    for (std::size_t j = i + 1; j < l.dim(); ++j)
      for (const auto& [k, c] : l.upper(i, j).terms())
        entries.push_back(Json::array({i, j, k, rational_to_json(c)}));
  out["entries"] = std::move(entries);
  return out;
}

inline StructureLieAlgebra algebra_from_json(const Json& j) {
  StructureLieAlgebra l(j.at("dim").get<std::size_t>());
  if (j.contains("grading") && !j["grading"].is_null())
    l.grading = j["grading"].get<std::vector<int>>();
  std::vector<std::vector<SparseVec>> cols(l.dim(), std::vector<SparseVec>(l.dim()));
  for (const auto& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 4)
      throw std::invalid_argument("bracket entry: expected [i,j,k,\"p/q\"]");
    std::size_t i = e[0], jj = e[1], k = e[2];
    if (i >= jj || jj >= l.dim() || k >= l.dim())
      throw std::invalid_argument("bracket entry index out of range");
    cols[i][jj].add_term(static_cast<std::uint32_t>(k), rational_from_json(e[3]));
  }
  for (std::size_t i = 0; i < l.dim(); ++i)
    for (std::size_t j = i + 1; j < l.dim(); ++j)
      if (!cols[i][j].empty()) l.set_bracket(i, j, std::move(cols[i][j]));
  return l;
}

inline Json fingerprint_to_json(const Fingerprint& f) {
  Json out;
  out["dim"] = f.dim;
  out["graded_dims"] = f.graded_dims ? Json(*f.graded_dims) : Json(nullptr);
  out["killing_rank"] = f.killing_rank;
  out["killing_nondegenerate"] = f.killing_nondegenerate;
  out["derived_dims"] = f.derived_dims;
  out["center_dim"] = f.center_dim;
  return out;
}

inline Json check_report_to_json(const CheckReport& r) {
  Json out;
  out["pass"] = r.pass;
  out["checked"] = r.checked;
  out["witness"] = r.witness;
  out["detail"] = r.detail;
  return out;
}

/// {"matrix": [[2,-1],...], "labels": [...]}; named types are resolved by
/// gcm_named before serialization, so only explicit matrices appear here.
inline Json gcm_to_json(const GCM& g) {
  Json out;
  out["matrix"] = g.a;
  out["labels"] = g.labels;
  return out;
}

inline GCM gcm_from_json(const Json& j) {
  GCM g;
  g.a = j.at("matrix").get<std::vector<std::vector<int>>>();
  g.rank = g.a.size();
  if (j.contains("labels")) g.labels = j["labels"].get<std::vector<std::string>>();
  while (g.labels.size() < g.rank) g.labels.push_back("a" + std::to_string(g.labels.size() + 1));
  validate_gcm(g);
  return g;
}

/// Plain-text polynomial syntax for one field: "x1*x2 d/dx0 - 1/2 x0^2 d/dx1".
inline std::string poly_str(const Poly& p, const std::vector<std::string>& names) {
  if (p.zero()) return "0";
  std::string s;
  for (const auto& [m, c] : p.terms()) {
    Rational a = c;
    if (s.empty()) {
      if (sgn(a) < 0) {
        s += "-";
        a = -a;
      }
    } else {
      s += sgn(a) < 0 ? " - " : " + ";
      if (sgn(a) < 0) a = -a;
    }
    std::string vars;
    Monomial t = m;
    while (t) {
      std::uint32_t v = static_cast<std::uint32_t>((t & 0xff) - 1);
      int pow = 0;
      while ((t & 0xff) == v + 1) {
        ++pow;
        t >>= 8;
      }
      if (!vars.empty()) vars += "*";
      vars += names.at(v);
      if (pow > 1) vars += "^" + std::to_string(pow);
    }
    if (vars.empty())
      s += rat_str(a);
    else if (a == Rational(1))
      s += vars;
    else
      s += rat_str(a) + " " + vars;
  }
  return s;
}

inline std::string field_str(const PolyVectorField& f) {
  std::string s;
  for (std::size_t i = 0; i < f.comp.size(); ++i) {
    if (f.comp[i].zero()) continue;
    if (!s.empty()) s += "  +  ";
    s += "(" + poly_str(f.comp[i], f.space.names) + ") d/d" + f.space.names[i];
  }
  return s.empty() ? "0" : s;
}

/// Top-level report envelope. `timing_ms` is the only nondeterministic field;
/// reproducibility comparisons must drop it.
inline Json make_report(const std::string& command, Json inputs, Json results,
                        std::uint64_t seed, double timing_ms) {
  Json out;
  out["schema"] = kSchemaTag;
  out["command"] = command;
  out["inputs"] = std::move(inputs);
  out["seed"] = seed;
  out["results"] = std::move(results);
  out["timing_ms"] = timing_ms;
  return out;
}

}  // namespace kktlab
