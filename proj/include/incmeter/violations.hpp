#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "incmeter/model.hpp"

namespace incmeter {

// Rewrites an FD over P into the two-atom denial form: shared variables at
// the lhs positions, z1/z2 at the rhs position, fresh variables elsewhere,
// plus the disequality z1 != z2.
inline DenialConstraint compile_fd_to_dc(const FunctionalDependency& fd, const Schema& schema) {
  auto arity_opt = schema.arity(fd.predicate);
  if (!arity_opt) throw Error("fd " + fd.name + ": undeclared predicate " + fd.predicate);
  int arity = *arity_opt;

  std::vector<int> lhs = fd.lhs;
  std::sort(lhs.begin(), lhs.end());
  if (lhs.empty()) throw Error("fd " + fd.name + ": empty left-hand side");
  if (std::adjacent_find(lhs.begin(), lhs.end()) != lhs.end())
    throw Error("fd " + fd.name + ": duplicate left-hand-side position");
  for (int p : lhs)
    if (p < 1 || p > arity)
      throw Error("fd " + fd.name + ": position " + std::to_string(p) + " out of range for " +
                  fd.predicate + "/" + std::to_string(arity));
  if (fd.rhs < 1 || fd.rhs > arity)
    throw Error("fd " + fd.name + ": position " + std::to_string(fd.rhs) + " out of range for " +
                fd.predicate + "/" + std::to_string(arity));
  if (std::find(lhs.begin(), lhs.end(), fd.rhs) != lhs.end())
    throw Error("fd " + fd.name + ": right-hand side occurs on the left-hand side");

  std::map<int, std::string> lhs_var;
  for (std::size_t i = 0; i < lhs.size(); ++i)
    lhs_var[lhs[i]] = lhs.size() == 1 ? "v" : "v" + std::to_string(i + 1);

  int extras = 0;
  for (int p = 1; p <= arity; ++p)
    if (!lhs_var.count(p) && p != fd.rhs) ++extras;

  DenialConstraint dc;
  dc.name = fd.name;
  for (int atom_index = 0; atom_index < 2; ++atom_index) {
    ConstraintAtom atom;
    atom.predicate = fd.predicate;
    int extra_seen = 0;
    for (int p = 1; p <= arity; ++p) {
      if (auto it = lhs_var.find(p); it != lhs_var.end()) {
        atom.terms.push_back(Term::var(it->second));
      } else if (p == fd.rhs) {
        atom.terms.push_back(Term::var(atom_index == 0 ? "z1" : "z2"));
      } else {
        ++extra_seen;
        atom.terms.push_back(Term::var("y" + std::to_string(atom_index * extras + extra_seen)));
      }
    }
    dc.atoms.push_back(std::move(atom));
  }
  dc.disequalities.emplace_back(Term::var("z1"), Term::var("z2"));
  return dc;
}

enum class EvalMode {
  Indexed,     // hash-indexed join, atoms ordered by ascending relation size
  NestedLoop,  // pure nested loops in written atom order; differential oracle
};

namespace detail {

struct JoinContext {
  const DatabaseInstance& instance;
  const DenialConstraint& dc;
  EvalMode mode;
  std::vector<int> atom_order;                       // evaluation order -> atom index
  std::map<std::string, std::vector<int>> by_pred;   // predicate -> tids
  // (predicate, position) -> constant -> tids; built once per constraint
  std::map<std::pair<std::string, int>, std::map<std::string, std::vector<int>>> index;

  std::map<std::string, std::string> assignment;
  std::vector<int> matched;  // tid per evaluation step
  std::set<std::vector<int>> seen;
  std::vector<ConflictEdge>* edges = nullptr;
};

inline bool diseqs_hold_so_far(const JoinContext& ctx) {
  for (const auto& [lhs, rhs] : ctx.dc.disequalities) {
    const std::string* a = nullptr;
    const std::string* b = nullptr;
    if (lhs.is_var()) {
      auto it = ctx.assignment.find(lhs.text);
      if (it != ctx.assignment.end()) a = &it->second;
    } else {
      a = &lhs.text;
    }
    if (rhs.is_var()) {
      auto it = ctx.assignment.find(rhs.text);
      if (it != ctx.assignment.end()) b = &it->second;
    } else {
      b = &rhs.text;
    }
    if (a && b && *a == *b) return false;  // ground and equal: violated
  }
  return true;
}

inline void join_step(JoinContext& ctx, std::size_t step) {
  if (step == ctx.atom_order.size()) {
    std::vector<int> tids = ctx.matched;
    std::sort(tids.begin(), tids.end());
    tids.erase(std::unique(tids.begin(), tids.end()), tids.end());
    if (ctx.seen.insert(tids).second)
      ctx.edges->push_back(
          ConflictEdge{tids, ViolationWitness{ctx.dc.name, ctx.assignment, tids}});
    return;
  }
  const ConstraintAtom& atom = ctx.dc.atoms[static_cast<std::size_t>(ctx.atom_order[step])];

  // candidate tids for this atom
  const std::vector<int>* candidates = nullptr;
  std::vector<int> empty;
  if (ctx.mode == EvalMode::Indexed) {
    // probe the index with the first bound argument position, if any
    for (std::size_t pos = 0; pos < atom.terms.size(); ++pos) {
      const Term& t = atom.terms[pos];
      const std::string* value = nullptr;
      if (!t.is_var()) {
        value = &t.text;
      } else if (auto it = ctx.assignment.find(t.text); it != ctx.assignment.end()) {
        value = &it->second;
      }
      if (value) {
        auto& slot = ctx.index[{atom.predicate, static_cast<int>(pos)}];
        if (slot.empty()) {
          for (int tid : ctx.by_pred[atom.predicate])
            slot[ctx.instance.tuple(tid).args[pos]].push_back(tid);
        }
        auto hit = slot.find(*value);
        candidates = hit == slot.end() ? &empty : &hit->second;
        break;
      }
    }
    if (!candidates) candidates = &ctx.by_pred[atom.predicate];
  }

  auto try_tuple = [&](const Tuple& tuple) {
    if (tuple.predicate != atom.predicate) return;
    std::vector<std::string> bound_here;
    bool ok = true;
    for (std::size_t pos = 0; pos < atom.terms.size(); ++pos) {
      const Term& t = atom.terms[pos];
      if (!t.is_var()) {
        if (t.text != tuple.args[pos]) {
          ok = false;
          break;
        }
        continue;
      }
      auto it = ctx.assignment.find(t.text);
      if (it == ctx.assignment.end()) {
        ctx.assignment.emplace(t.text, tuple.args[pos]);
        bound_here.push_back(t.text);
      } else if (it->second != tuple.args[pos]) {
        ok = false;
        break;
      }
    }
    if (ok && diseqs_hold_so_far(ctx)) {
      ctx.matched.push_back(tuple.tid);
      join_step(ctx, step + 1);
      ctx.matched.pop_back();
    }
    for (const std::string& v : bound_here) ctx.assignment.erase(v);
  };

  if (ctx.mode == EvalMode::NestedLoop) {
    for (const Tuple& tuple : ctx.instance.tuples()) try_tuple(tuple);
  } else {
    for (int tid : *candidates) try_tuple(ctx.instance.tuple(tid));
  }
}

}  // namespace detail

// One hyperedge per satisfying assignment of each DC body, deduplicated as
// tid-sets per constraint (first witness kept). Two body atoms may bind the
// same tuple when the disequalities still allow it.
inline ConflictHypergraph find_conflicts(const DatabaseInstance& instance,
                                         const ConstraintSet& constraints,
                                         EvalMode mode = EvalMode::Indexed) {
  ConflictHypergraph graph;
  graph.vertices = instance.all_tids();

  std::map<std::string, std::vector<int>> by_pred;
  for (const Tuple& t : instance.tuples()) by_pred[t.predicate].push_back(t.tid);

  for (const DenialConstraint& dc : constraints.dcs) {
    detail::JoinContext ctx{instance, dc, mode, {}, by_pred, {}, {}, {}, {}, nullptr};
    std::vector<ConflictEdge> edges;
    ctx.edges = &edges;

    ctx.atom_order.resize(dc.atoms.size());
    for (std::size_t i = 0; i < dc.atoms.size(); ++i) ctx.atom_order[i] = static_cast<int>(i);
    if (mode == EvalMode::Indexed) {
      std::stable_sort(ctx.atom_order.begin(), ctx.atom_order.end(), [&](int a, int b) {
        auto size_of = [&](int idx) {
          auto it = by_pred.find(dc.atoms[static_cast<std::size_t>(idx)].predicate);
          return it == by_pred.end() ? std::size_t{0} : it->second.size();
        };
        return size_of(a) < size_of(b);
      });
    }

    detail::join_step(ctx, 0);
    std::sort(edges.begin(), edges.end(),
              [](const ConflictEdge& a, const ConflictEdge& b) { return a.tids < b.tids; });
    for (ConflictEdge& e : edges) graph.edges.push_back(std::move(e));
  }
  return graph;
}

inline bool is_consistent(const DatabaseInstance& instance, const ConstraintSet& constraints,
                          EvalMode mode = EvalMode::Indexed) {
  return find_conflicts(instance, constraints, mode).edges.empty();
}

// Re-evaluates a witness against the instance: every ground atom must be
// present, the disequalities must hold, and the matched tids must be
// exactly the witness tids.
inline bool witness_holds(const DatabaseInstance& instance, const ConstraintSet& constraints,
                          const ViolationWitness& witness) {
  const DenialConstraint* dc = nullptr;
  for (const DenialConstraint& c : constraints.dcs)
    if (c.name == witness.constraint) dc = &c;
  if (!dc) return false;

  auto ground = [&](const Term& t) -> const std::string* {
    if (!t.is_var()) return &t.text;
    auto it = witness.assignment.find(t.text);
    return it == witness.assignment.end() ? nullptr : &it->second;
  };

  std::vector<int> tids;
  for (const ConstraintAtom& atom : dc->atoms) {
    std::vector<std::string> args;
    for (const Term& t : atom.terms) {
      const std::string* value = ground(t);
      if (!value) return false;
      args.push_back(*value);
    }
    auto tid = instance.find_tid(atom.predicate, args);
    if (!tid) return false;
    tids.push_back(*tid);
  }
  for (const auto& [lhs, rhs] : dc->disequalities) {
    const std::string* a = ground(lhs);
    const std::string* b = ground(rhs);
    if (!a || !b || *a == *b) return false;
  }
  std::sort(tids.begin(), tids.end());
  tids.erase(std::unique(tids.begin(), tids.end()), tids.end());
  return tids == witness.tids;
}

// One line per edge: `constraint: {tid,…}`, tids ascending.
inline std::string debug_dump(const ConflictHypergraph& graph) {
  std::string out;
  for (const ConflictEdge& e : graph.edges) {
    out += e.witness.constraint;
    out += ": {";
    for (std::size_t i = 0; i < e.tids.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(e.tids[i]);
    }
    out += "}\n";
  }
  return out;
}

}  // namespace incmeter
