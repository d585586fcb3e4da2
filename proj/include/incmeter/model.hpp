#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "incmeter/rational.hpp"

namespace incmeter {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// -- Schema -------------------------------------------------------------

class Schema {
 public:
  void declare(const std::string& predicate, int arity) {
    if (predicate.empty()) throw Error("schema: empty predicate name");
    if (arity < 1) throw Error("schema: arity of " + predicate + " must be >= 1");
    auto [it, inserted] = arities_.emplace(predicate, arity);
    if (!inserted && it->second != arity)
      throw Error("schema: " + predicate + " redeclared with arity " +
                  std::to_string(arity) + " (was " + std::to_string(it->second) + ")");
  }

  bool has(const std::string& predicate) const { return arities_.count(predicate) > 0; }

  std::optional<int> arity(const std::string& predicate) const {
    auto it = arities_.find(predicate);
    if (it == arities_.end()) return std::nullopt;
    return it->second;
  }

  // name-sorted
  const std::map<std::string, int>& predicates() const { return arities_; }

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::map<std::string, int> arities_;
};

// -- Tuples and instances -----------------------------------------------

struct Tuple {
  int tid = 0;
  std::string predicate;
  std::vector<std::string> args;

  friend bool operator==(const Tuple&, const Tuple&) = default;
};

// A ground tuple before tid assignment.
struct RawTuple {
  std::string predicate;
  std::vector<std::string> args;
  bool exogenous = false;
};

// Finite set of identified ground tuples plus an endogenous/exogenous
// partition. Immutable after construction; tids are dense, 1-based, in
// input order.
class DatabaseInstance {
 public:
  DatabaseInstance() = default;

  DatabaseInstance(Schema schema, std::vector<Tuple> tuples, std::set<int> exogenous)
      : schema_(std::move(schema)), tuples_(std::move(tuples)), exogenous_(std::move(exogenous)) {
    for (std::size_t i = 0; i < tuples_.size(); ++i) {
      const Tuple& t = tuples_[i];
      if (t.tid != static_cast<int>(i) + 1)
        throw Error("instance: tids must be dense and 1-based in input order");
      auto arity = schema_.arity(t.predicate);
      if (!arity) throw Error("instance: undeclared predicate " + t.predicate);
      if (*arity != static_cast<int>(t.args.size()))
        throw Error("instance: arity mismatch for " + t.predicate);
      if (!index_.emplace(key(t.predicate, t.args), t.tid).second)
        throw Error("instance: duplicate tuple " + t.predicate);
    }
    for (int tid : exogenous_)
      if (tid < 1 || tid > static_cast<int>(tuples_.size()))
        throw Error("instance: exogenous tid " + std::to_string(tid) + " out of range");
  }

  const Schema& schema() const { return schema_; }
  const std::vector<Tuple>& tuples() const { return tuples_; }
  int size() const { return static_cast<int>(tuples_.size()); }

  const Tuple& tuple(int tid) const {
    if (tid < 1 || tid > size()) throw Error("instance: no tuple with tid " + std::to_string(tid));
    return tuples_[static_cast<std::size_t>(tid) - 1];
  }

  const std::set<int>& exogenous() const { return exogenous_; }
  bool is_exogenous(int tid) const { return exogenous_.count(tid) > 0; }

  std::vector<int> all_tids() const {
    std::vector<int> out(tuples_.size());
    for (std::size_t i = 0; i < tuples_.size(); ++i) out[i] = static_cast<int>(i) + 1;
    return out;
  }

  std::vector<int> endogenous_tids() const {
    std::vector<int> out;
    for (int tid = 1; tid <= size(); ++tid)
      if (!is_exogenous(tid)) out.push_back(tid);
    return out;
  }

  std::optional<int> find_tid(const std::string& predicate,
                              const std::vector<std::string>& args) const {
    auto it = index_.find(key(predicate, args));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Same tuples, different partition.
  DatabaseInstance with_exogenous(std::set<int> exogenous) const {
    return DatabaseInstance(schema_, tuples_, std::move(exogenous));
  }

  friend bool operator==(const DatabaseInstance& a, const DatabaseInstance& b) {
    return a.schema_ == b.schema_ && a.tuples_ == b.tuples_ && a.exogenous_ == b.exogenous_;
  }

 private:
  static std::string key(const std::string& predicate, const std::vector<std::string>& args) {
    std::string k = predicate;
    for (const std::string& a : args) {
      k.push_back('\0');
      k += a;
    }
    return k;
  }

  Schema schema_;
  std::vector<Tuple> tuples_;
  std::set<int> exogenous_;
  std::map<std::string, int> index_;
};

struct TidAssignment {
  DatabaseInstance instance;
  // indices into the raw input of tuples collapsed into an earlier one
  std::vector<std::size_t> dropped_duplicates;
};

// Assigns 1-based tids in input order; duplicate (predicate, args) pairs
// collapse to the first occurrence. A duplicate keeps the first
// occurrence's exogenous flag.
inline TidAssignment assign_tids(const Schema& schema, const std::vector<RawTuple>& raw) {
  std::vector<Tuple> tuples;
  std::set<int> exogenous;
  std::set<std::pair<std::string, std::vector<std::string>>> seen;
  TidAssignment out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const RawTuple& r = raw[i];
    auto arity = schema.arity(r.predicate);
    if (!arity) throw Error("undeclared predicate " + r.predicate);
    if (*arity != static_cast<int>(r.args.size()))
      throw Error("arity mismatch: " + r.predicate + " declared with arity " +
                  std::to_string(*arity) + ", got " + std::to_string(r.args.size()) +
                  " argument(s)");
    if (!seen.emplace(r.predicate, r.args).second) {
      out.dropped_duplicates.push_back(i);
      continue;
    }
    int tid = static_cast<int>(tuples.size()) + 1;
    tuples.push_back(Tuple{tid, r.predicate, r.args});
    if (r.exogenous) exogenous.insert(tid);
  }
  out.instance = DatabaseInstance(schema, std::move(tuples), std::move(exogenous));
  return out;
}

// -- Constraints --------------------------------------------------------

struct Term {
  enum class Kind { Variable, Constant };
  Kind kind = Kind::Constant;
  std::string text;

  static Term var(std::string name) { return Term{Kind::Variable, std::move(name)}; }
  static Term constant(std::string value) { return Term{Kind::Constant, std::move(value)}; }
  bool is_var() const { return kind == Kind::Variable; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

struct ConstraintAtom {
  std::string predicate;
  std::vector<Term> terms;

  friend bool operator==(const ConstraintAtom&, const ConstraintAtom&) = default;
};

// Negated existential conjunction of atoms plus built-in disequalities.
struct DenialConstraint {
  std::string name;
  std::vector<ConstraintAtom> atoms;
  std::vector<std::pair<Term, Term>> disequalities;

  std::set<std::string> atom_variables() const {
    std::set<std::string> vars;
    for (const ConstraintAtom& a : atoms)
      for (const Term& t : a.terms)
        if (t.is_var()) vars.insert(t.text);
    return vars;
  }

  friend bool operator==(const DenialConstraint&, const DenialConstraint&) = default;
};

// Attribute positions are 1-based, matching the surface syntax R[1 -> 2].
struct FunctionalDependency {
  std::string name;
  std::string predicate;
  std::vector<int> lhs;
  int rhs = 0;

  friend bool operator==(const FunctionalDependency&, const FunctionalDependency&) = default;
};

struct ConstraintSet {
  // FDs appear here in compiled DC form, in declaration order.
  std::vector<DenialConstraint> dcs;
  std::vector<FunctionalDependency> original_fds;

  bool is_fd(const std::string& name) const {
    for (const FunctionalDependency& fd : original_fds)
      if (fd.name == name) return true;
    return false;
  }

  friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;
};

// -- Conflict hypergraph ------------------------------------------------

struct ViolationWitness {
  std::string constraint;
  std::map<std::string, std::string> assignment;  // variable -> constant
  std::vector<int> tids;                          // sorted

  friend bool operator==(const ViolationWitness&, const ViolationWitness&) = default;
};

struct ConflictEdge {
  std::vector<int> tids;  // sorted
  ViolationWitness witness;

  friend bool operator==(const ConflictEdge&, const ConflictEdge&) = default;
};

struct ConflictHypergraph {
  std::vector<int> vertices;  // all tids of the instance, ascending
  std::vector<ConflictEdge> edges;

  friend bool operator==(const ConflictHypergraph&, const ConflictHypergraph&) = default;
};

// -- Repairs and reports ------------------------------------------------

enum class RepairSemantics { Subset, Cardinality, CardinalityEndogenous };

inline std::string to_string(RepairSemantics s) {
  switch (s) {
    case RepairSemantics::Subset: return "s";
    case RepairSemantics::Cardinality: return "c";
    case RepairSemantics::CardinalityEndogenous: return "c-endo";
  }
  throw Error("unknown repair semantics");
}

struct Repair {
  RepairSemantics semantics = RepairSemantics::Subset;
  std::vector<int> kept;     // sorted tids
  std::vector<int> deleted;  // sorted tids

  friend bool operator==(const Repair&, const Repair&) = default;
};

enum class NormalizerKind { Full, Endogenous };

inline std::string to_string(NormalizerKind n) {
  return n == NormalizerKind::Full ? "full" : "endo";
}

struct InconsistencyReport {
  RepairSemantics semantics = RepairSemantics::Cardinality;
  Rational measure;
  std::string decimal;
  NormalizerKind normalizer_kind = NormalizerKind::Full;
  int normalizer = 0;
  bool irreparable = false;
  int min_deletions = 0;
  int repair_count_found = 0;
  bool truncated = false;
  std::vector<Repair> witnesses;
};

}  // namespace incmeter
