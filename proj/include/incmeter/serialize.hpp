#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include <json.hpp>

#include "incmeter/model.hpp"

namespace incmeter {

namespace detail {

inline bool bare_in_facts(const std::string& value) {
  if (value.empty()) return false;
  if (std::isdigit(static_cast<unsigned char>(value[0]))) {
    for (char c : value)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  }
  if (!(std::isalpha(static_cast<unsigned char>(value[0])) || value[0] == '_')) return false;
  for (char c : value)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

inline std::string quoted(const std::string& value) {
  std::string out = "\"";
  for (char c : value) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out += '"';
  return out;
}

// In fact files every bare token is a constant.
inline std::string fact_constant(const std::string& value) {
  return bare_in_facts(value) ? value : quoted(value);
}

// In constraint files a bare lowercase-initial token reads back as a
// variable, so such constants must stay quoted.
inline std::string constraint_constant(const std::string& value) {
  if (bare_in_facts(value) && !std::islower(static_cast<unsigned char>(value[0])))
    return value;
  return quoted(value);
}

inline std::string render_term(const Term& t) {
  return t.is_var() ? t.text : constraint_constant(t.text);
}

}  // namespace detail

// `P(a,b)` — the form used in fact files and human-readable output.
inline std::string render_tuple(const Tuple& t) {
  std::string out = t.predicate + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ",";
    out += detail::fact_constant(t.args[i]);
  }
  out += ")";
  return out;
}

// Schema directives (name-sorted) followed by one fact per line in tid
// order; re-parsing reproduces the instance, tids included.
inline std::string serialize_instance(const DatabaseInstance& instance) {
  std::string out;
  for (const auto& [name, arity] : instance.schema().predicates())
    out += "@schema " + name + "/" + std::to_string(arity) + "\n";
  for (const Tuple& t : instance.tuples()) {
    if (instance.is_exogenous(t.tid)) out += "*";
    out += render_tuple(t) + ".\n";
  }
  return out;
}

// One statement per line in declaration order; FD-derived constraints go
// back out in their shorthand form.
inline std::string serialize_constraints(const ConstraintSet& constraints) {
  std::string out;
  for (const DenialConstraint& dc : constraints.dcs) {
    const FunctionalDependency* fd = nullptr;
    for (const FunctionalDependency& f : constraints.original_fds)
      if (f.name == dc.name) fd = &f;
    if (fd) {
      out += "fd " + fd->name + ": " + fd->predicate + "[";
      std::vector<int> lhs = fd->lhs;
      std::sort(lhs.begin(), lhs.end());
      for (std::size_t i = 0; i < lhs.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(lhs[i]);
      }
      out += " -> " + std::to_string(fd->rhs) + "].\n";
      continue;
    }
    out += "dc " + dc.name + ": <- ";
    bool first = true;
    for (const ConstraintAtom& atom : dc.atoms) {
      if (!first) out += ", ";
      first = false;
      out += atom.predicate + "(";
      for (std::size_t i = 0; i < atom.terms.size(); ++i) {
        if (i) out += ",";
        out += detail::render_term(atom.terms[i]);
      }
      out += ")";
    }
    for (const auto& [lhs, rhs] : dc.disequalities) {
      out += ", " + detail::render_term(lhs) + " != " + detail::render_term(rhs);
    }
    out += ".\n";
  }
  return out;
}

inline nlohmann::ordered_json report_to_json(const InconsistencyReport& report) {
  nlohmann::ordered_json j;
  j["semantics"] = to_string(report.semantics);
  j["measure"] = {{"num", report.measure.num()}, {"den", report.measure.den()}};
  j["decimal"] = report.decimal;
  j["irreparable"] = report.irreparable;
  j["normalizer"] = report.normalizer;
  j["min_deletions"] = report.min_deletions;
  std::vector<std::vector<int>> deleted_lists;
  for (const Repair& r : report.witnesses) deleted_lists.push_back(r.deleted);
  std::sort(deleted_lists.begin(), deleted_lists.end());
  nlohmann::ordered_json witnesses = nlohmann::ordered_json::array();
  for (const std::vector<int>& d : deleted_lists) witnesses.push_back(d);
  j["witnesses"] = std::move(witnesses);
  return j;
}

// Stable machine interface: fixed key order, witnesses as sorted
// deleted-tid lists in lexicographic order.
inline std::string serialize_report(const InconsistencyReport& report) {
  return report_to_json(report).dump(2);
}

}  // namespace incmeter
