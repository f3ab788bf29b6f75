#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bounds.hpp"
#include "distribution.hpp"
#include "energy.hpp"
#include "errors.hpp"
#include "multiset.hpp"
#include "rational.hpp"
#include "sampler.hpp"

namespace permsum::io {

using json = nlohmann::ordered_json;

// ---- multiset input: {"values": ["3", "1/2", "0", "0"]} ----

inline WeightedMultiset multiset_from_json(const json& doc, const std::string& where = "input") {
  if (!doc.is_object()) throw ParseError(where + ": expected a JSON object with a \"values\" array");
  const auto it = doc.find("values");
  if (it == doc.end()) throw ParseError(where + ": missing field \"values\"");
  if (!it->is_array()) throw ParseError(where + ": field \"values\" must be an array");
  if (it->empty()) throw ParseError(where + ": field \"values\" must be nonempty");
  std::vector<Rational> values;
  for (std::size_t i = 0; i < it->size(); ++i) {
    const auto& v = (*it)[i];
    const std::string field = where + ": values[" + std::to_string(i) + "]";
    if (v.is_string()) {
      try {
        values.push_back(parse_rational(v.get<std::string>()));
      } catch (const ParseError& e) {
        throw ParseError(field + ": " + e.what());
      }
    } else if (v.is_number_integer()) {
      values.emplace_back(v.get<std::int64_t>());
    } else {
      throw ParseError(field + ": expected an integer or a \"p/q\" string");
    }
  }
  return WeightedMultiset(std::move(values));
}

/// Line and column of a byte offset, for parse diagnostics.
inline std::string describe_offset(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline json parse_json_text(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(where + ": malformed JSON at " + describe_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
}

inline WeightedMultiset parse_multiset(const std::string& text, const std::string& where = "input") {
  return multiset_from_json(parse_json_text(text, where), where);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Inline JSON when the argument starts with '{', otherwise a file path.
inline WeightedMultiset load_multiset(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') return parse_multiset(arg, "inline input");
  return parse_multiset(read_file(arg), arg);
}

inline json multiset_to_json(const WeightedMultiset& x) {
  json values = json::array();
  for (const auto& v : x.expanded()) values.push_back(to_string(v));
  return {{"values", values}};
}

// ---- reports ----

inline json to_json(const MultiplicityProfile& p) {
  return {{"n", p.n}, {"parts", p.parts}, {"ell", p.parts.size()}, {"M", to_string(p.M)}};
}

inline json to_json(const ExactDistribution& d) {
  json atoms = json::array();
  for (const auto& [v, c] : d.atoms) atoms.push_back({to_string(v), to_string(c)});
  return {{"total", to_string(d.total)}, {"atoms", atoms}};
}

inline ExactDistribution distribution_from_json(const json& doc) {
  ExactDistribution d;
  d.total = BigInt(doc.at("total").get<std::string>());
  for (const auto& atom : doc.at("atoms"))
    d.atoms.emplace(parse_rational(atom.at(0).get<std::string>()), BigInt(atom.at(1).get<std::string>()));
  return d;
}

inline json to_json(const PointMassReport& r) {
  return {{"q", to_string(r.q)},
          {"q_decimal", to_decimal(r.q)},
          {"argmax", to_string(r.argmax_value)},
          {"support_size", r.support_size}};
}

inline json to_json(const QEstimate& e) {
  return {{"q_hat", to_string(e.q_hat)},
          {"mode", to_string(e.mode_value)},
          {"ci", {e.ci_low, e.ci_high}},
          {"N", e.samples},
          {"seed", e.seed}};
}

inline json to_json(const EnergyReport& r) {
  json out = {{"method", to_string(r.method)},
              {"s", r.c.size()},
              {"c", r.c},
              {"kappa", to_string(r.kappa)},
              {"kappa_decimal", to_decimal(r.kappa)}};
  if (r.K) out["K"] = to_string(*r.K);
  out["normalization"] = "(n*n')^(2s)";
  return out;
}

inline json to_json(const Decomposition& d, const BigInt& m_source, std::size_t n) {
  json witness = json::array();
  for (const auto& v : d.witness) witness.push_back(to_string(v));
  const Real lhs = Real(BigInt(d.m) * d.r * d.r * d.r) * boost::multiprecision::log(Real(n));
  return {{"m", d.m},
          {"r", d.r},
          {"chosen_index", d.chosen_index},
          {"witness", witness},
          {"M", to_string(m_source)},
          {"m_r3_ln_n", to_decimal(lhs, 20)}};
}

inline json to_json(const VerdictRecord& r) {
  json out = {{"bound_kind", to_string(r.kind)},
              {"observed_q", to_string(r.observed_q)},
              {"status", to_string(r.status)}};
  out["bound_value"] = r.bound_value ? json(to_decimal(*r.bound_value)) : json(nullptr);
  if (r.bound_exact) out["bound_exact"] = to_string(*r.bound_exact);
  out["ratio"] = r.ratio ? json(to_decimal(*r.ratio)) : json(nullptr);
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

inline json to_json(const VerifyReport& r) {
  json records = json::array();
  for (const auto& rec : r.records) records.push_back(to_json(rec));
  return {{"n", r.n},
          {"M_A", to_string(r.m_a)},
          {"M_B", to_string(r.m_b)},
          {"Q", to_string(r.observed.q)},
          {"Q_exact", r.observed.exact},
          {"verdicts", records}};
}

// ---- verdict CSV ----

inline const char* kVerdictCsvHeader = "n,family,M_A,M_B,Q_exact,bound_kind,bound_value,ratio,status";

inline std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

/// One row per verdict. Rationals are quoted strings; exact bound values are
/// written as rationals, the rest as 12-digit decimals.
inline void write_verdict_rows(std::ostream& os, const std::string& family, const VerifyReport& r) {
  for (const auto& rec : r.records) {
    std::string value = rec.bound_exact ? to_string(*rec.bound_exact)
                        : rec.bound_value ? to_decimal(*rec.bound_value)
                                          : "";
    os << r.n << ',' << csv_quote(family) << ',' << csv_quote(to_string(r.m_a)) << ','
       << csv_quote(to_string(r.m_b)) << ',' << csv_quote(to_string(r.observed.q)) << ','
       << to_string(rec.kind) << ',' << csv_quote(value) << ',' << (rec.ratio ? to_decimal(*rec.ratio) : "")
       << ',' << to_string(rec.status) << '\n';
  }
}

}  // namespace permsum::io
