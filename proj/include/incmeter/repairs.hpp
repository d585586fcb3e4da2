#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "incmeter/model.hpp"
#include "incmeter/violations.hpp"

namespace incmeter {

inline constexpr int kDefaultRepairCap = 64;

namespace detail {

// Exact minimum/minimal transversal machinery over the conflict
// hypergraph, restricted to a deletable vertex set. Edges are
// deduplicated and supersets dropped up front; neither changes the
// hitting sets.
class TransversalSolver {
 public:
  TransversalSolver(const ConflictHypergraph& graph, const std::vector<int>& deletable) {
    std::set<int> allowed(deletable.begin(), deletable.end());
    std::set<std::vector<int>> unique;
    for (const ConflictEdge& edge : graph.edges) {
      std::vector<int> restricted;
      for (int tid : edge.tids)
        if (allowed.count(tid)) restricted.push_back(tid);
      if (restricted.empty()) {
        infeasible_ = true;  // an edge no deletion can hit
        return;
      }
      unique.insert(std::move(restricted));
    }
    std::vector<std::vector<int>> sorted(unique.begin(), unique.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    for (const std::vector<int>& e : sorted) {
      bool redundant = false;
      for (const std::vector<int>& kept : edge_tids_) {
        if (std::includes(e.begin(), e.end(), kept.begin(), kept.end())) {
          redundant = true;
          break;
        }
      }
      if (!redundant) edge_tids_.push_back(e);
    }

    std::set<int> universe;
    for (const auto& e : edge_tids_) universe.insert(e.begin(), e.end());
    vertices_.assign(universe.begin(), universe.end());
    std::map<int, int> index;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      index[vertices_[i]] = static_cast<int>(i);

    hits_.assign(vertices_.size(), {});
    for (std::size_t e = 0; e < edge_tids_.size(); ++e) {
      std::vector<int> idx;
      for (int tid : edge_tids_[e]) {
        idx.push_back(index[tid]);
        hits_[static_cast<std::size_t>(index[tid])].push_back(static_cast<int>(e));
      }
      edges_.push_back(std::move(idx));
      edge_max_vertex_.push_back(edges_.back().empty() ? -1 : edges_.back().back());
    }
  }

  bool infeasible() const { return infeasible_; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  // Minimum hitting-set size; call only when feasible.
  int min_size() const {
    if (edges_.empty()) return 0;
    if (edges_.size() <= 64) return min_size_memoized();
    return min_size_branch_and_bound();
  }

  // Emits every hitting set of size exactly k, ascending tids, in
  // lexicographic order. The callback returns false to stop.
  void enumerate_size_k(int k, const std::function<bool(const std::vector<int>&)>& emit) const {
    std::vector<int> cover_count(edges_.size(), 0);
    std::vector<int> chosen;
    int uncovered = static_cast<int>(edges_.size());
    enumerate_step(0, k, uncovered, cover_count, chosen, emit);
  }

  // True iff every vertex of the (sorted) hitting set has a private edge.
  bool is_minimal_transversal(const std::vector<int>& tids) const {
    std::set<int> chosen(tids.begin(), tids.end());
    std::set<int> private_owner;
    for (const std::vector<int>& e : edge_tids_) {
      int inside = 0;
      int owner = 0;
      for (int tid : e) {
        if (chosen.count(tid)) {
          ++inside;
          owner = tid;
        }
      }
      if (inside == 1) private_owner.insert(owner);
    }
    for (int tid : tids)
      if (!private_owner.count(tid)) return false;
    return true;
  }

 private:
  int min_size_memoized() const {
    const std::size_t m = edges_.size();
    const std::uint64_t full = m == 64 ? ~0ull : (1ull << m) - 1;
    std::unordered_map<std::uint64_t, int> memo;
    std::function<int(std::uint64_t)> best = [&](std::uint64_t covered) -> int {
      if (covered == full) return 0;
      auto it = memo.find(covered);
      if (it != memo.end()) return it->second;
      int pick = -1;
      std::size_t fewest = SIZE_MAX;
      for (std::size_t e = 0; e < m; ++e) {
        if (!(covered >> e & 1) && edges_[e].size() < fewest) {
          fewest = edges_[e].size();
          pick = static_cast<int>(e);
        }
      }
      int result = INT_MAX;
      for (int v : edges_[static_cast<std::size_t>(pick)]) {
        std::uint64_t next = covered;
        for (int e : hits_[static_cast<std::size_t>(v)]) next |= 1ull << e;
        result = std::min(result, 1 + best(next));
      }
      memo.emplace(covered, result);
      return result;
    };
    return best(0);
  }

  int min_size_branch_and_bound() const {
    // greedy incumbent: repeatedly take the vertex covering most edges
    std::vector<char> covered(edges_.size(), 0);
    int remaining = static_cast<int>(edges_.size());
    int incumbent = 0;
    while (remaining > 0) {
      int best_v = -1;
      int best_gain = -1;
      for (std::size_t v = 0; v < vertices_.size(); ++v) {
        int gain = 0;
        for (int e : hits_[v])
          if (!covered[static_cast<std::size_t>(e)]) ++gain;
        if (gain > best_gain) {
          best_gain = gain;
          best_v = static_cast<int>(v);
        }
      }
      for (int e : hits_[static_cast<std::size_t>(best_v)]) {
        if (!covered[static_cast<std::size_t>(e)]) {
          covered[static_cast<std::size_t>(e)] = 1;
          --remaining;
        }
      }
      ++incumbent;
    }

    int best_size = incumbent;
    std::vector<char> cov(edges_.size(), 0);
    std::function<void(int, int)> dfs = [&](int chosen, int uncovered) {
      if (uncovered == 0) {
        best_size = std::min(best_size, chosen);
        return;
      }
      if (chosen + matching_lower_bound(cov) >= best_size) return;
      int pick = -1;
      std::size_t fewest = SIZE_MAX;
      for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (!cov[e] && edges_[e].size() < fewest) {
          fewest = edges_[e].size();
          pick = static_cast<int>(e);
        }
      }
      for (int v : edges_[static_cast<std::size_t>(pick)]) {
        std::vector<int> flipped;
        for (int e : hits_[static_cast<std::size_t>(v)]) {
          if (!cov[static_cast<std::size_t>(e)]) {
            cov[static_cast<std::size_t>(e)] = 1;
            flipped.push_back(e);
          }
        }
        dfs(chosen + 1, uncovered - static_cast<int>(flipped.size()));
        for (int e : flipped) cov[static_cast<std::size_t>(e)] = 0;
      }
    };
    dfs(0, static_cast<int>(edges_.size()));
    return best_size;
  }

  // Pairwise-disjoint uncovered edges each need their own vertex.
  int matching_lower_bound(const std::vector<char>& covered) const {
    std::set<int> used;
    int bound = 0;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (covered[e]) continue;
      bool disjoint = true;
      for (int v : edges_[e]) {
        if (used.count(v)) {
          disjoint = false;
          break;
        }
      }
      if (disjoint) {
        ++bound;
        used.insert(edges_[e].begin(), edges_[e].end());
      }
    }
    return bound;
  }

  int matching_lower_bound_vec(const std::vector<int>& cover_count) const {
    std::set<int> used;
    int bound = 0;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (cover_count[e] > 0) continue;
      bool disjoint = true;
      for (int v : edges_[e]) {
        if (used.count(v)) {
          disjoint = false;
          break;
        }
      }
      if (disjoint) {
        ++bound;
        used.insert(edges_[e].begin(), edges_[e].end());
      }
    }
    return bound;
  }

  // Include/exclude over vertices in ascending order; emission order is
  // lexicographic on the sorted tid lists. Descending below a complete
  // hitting set only produces strict supersets, so recursion stops there.
  bool enumerate_step(int vi, int k, int uncovered, std::vector<int>& cover_count,
                      std::vector<int>& chosen,
                      const std::function<bool(const std::vector<int>&)>& emit) const {
    if (uncovered == 0) {
      if (static_cast<int>(chosen.size()) == k) {
        std::vector<int> tids;
        for (int idx : chosen) tids.push_back(vertices_[static_cast<std::size_t>(idx)]);
        return emit(tids);
      }
      return true;
    }
    if (static_cast<int>(chosen.size()) >= k) return true;
    if (vi >= vertex_count()) return true;
    // an uncovered edge whose vertices all lie below vi can never be hit
    for (std::size_t e = 0; e < edges_.size(); ++e)
      if (cover_count[e] == 0 && edge_max_vertex_[e] < vi) return true;
    if (static_cast<int>(chosen.size()) + matching_lower_bound_vec(cover_count) > k) return true;

    // include vertices_[vi]
    chosen.push_back(vi);
    int newly = 0;
    for (int e : hits_[static_cast<std::size_t>(vi)])
      if (cover_count[static_cast<std::size_t>(e)]++ == 0) ++newly;
    bool keep_going = enumerate_step(vi + 1, k, uncovered - newly, cover_count, chosen, emit);
    for (int e : hits_[static_cast<std::size_t>(vi)]) --cover_count[static_cast<std::size_t>(e)];
    chosen.pop_back();
    if (!keep_going) return false;

    return enumerate_step(vi + 1, k, uncovered, cover_count, chosen, emit);
  }

  bool infeasible_ = false;
  std::vector<std::vector<int>> edge_tids_;    // unique minimized edges, tids
  std::vector<int> vertices_;                  // ascending tids
  std::vector<std::vector<int>> edges_;        // vertex indices per edge
  std::vector<std::vector<int>> hits_;         // vertex index -> edge indices
  std::vector<int> edge_max_vertex_;
};

inline Repair make_repair(const DatabaseInstance& instance, const std::vector<int>& deleted,
                          RepairSemantics semantics) {
  Repair r;
  r.semantics = semantics;
  r.deleted = deleted;
  std::set<int> gone(deleted.begin(), deleted.end());
  for (int tid = 1; tid <= instance.size(); ++tid)
    if (!gone.count(tid)) r.kept.push_back(tid);
  return r;
}

}  // namespace detail

// Minimum-cardinality subset of `deletable` intersecting every edge;
// nullopt iff some edge has no deletable vertex. Ties break to the
// lexicographically smallest sorted tid list.
inline std::optional<std::vector<int>> min_hitting_set(const ConflictHypergraph& graph,
                                                       const std::vector<int>& deletable) {
  detail::TransversalSolver solver(graph, deletable);
  if (solver.infeasible()) return std::nullopt;
  int k = solver.min_size();
  std::optional<std::vector<int>> out;
  solver.enumerate_size_k(k, [&](const std::vector<int>& tids) {
    out = tids;
    return false;
  });
  return out;
}

inline std::optional<int> min_hitting_set_size(const ConflictHypergraph& graph,
                                               const std::vector<int>& deletable) {
  detail::TransversalSolver solver(graph, deletable);
  if (solver.infeasible()) return std::nullopt;
  return solver.min_size();
}

struct RepairEnumeration {
  std::vector<Repair> repairs;
  bool truncated = false;
};

// All repairs whose deleted set is a minimum hitting set over
// `deletable`, in lexicographic deleted-list order; empty iff infeasible.
inline RepairEnumeration min_deletion_repairs(const DatabaseInstance& instance,
                                              const ConflictHypergraph& graph,
                                              const std::vector<int>& deletable,
                                              RepairSemantics semantics,
                                              int cap = kDefaultRepairCap) {
  if (cap < 1) throw Error("repair cap must be >= 1");
  RepairEnumeration out;
  detail::TransversalSolver solver(graph, deletable);
  if (solver.infeasible()) return out;
  int k = solver.min_size();
  int found = 0;
  solver.enumerate_size_k(k, [&](const std::vector<int>& tids) {
    if (++found > cap) {
      out.truncated = true;
      return false;
    }
    out.repairs.push_back(detail::make_repair(instance, tids, semantics));
    return true;
  });
  return out;
}

inline RepairEnumeration c_repairs(const DatabaseInstance& instance,
                                   const ConstraintSet& constraints,
                                   int cap = kDefaultRepairCap) {
  return min_deletion_repairs(instance, find_conflicts(instance, constraints),
                              instance.all_tids(), RepairSemantics::Cardinality, cap);
}

inline RepairEnumeration c_repairs_endogenous(const DatabaseInstance& instance,
                                              const ConstraintSet& constraints,
                                              int cap = kDefaultRepairCap) {
  return min_deletion_repairs(instance, find_conflicts(instance, constraints),
                              instance.endogenous_tids(),
                              RepairSemantics::CardinalityEndogenous, cap);
}

// S-repairs from a precomputed hypergraph: complements of the minimal
// transversals, ascending deletion count, then lexicographic.
inline RepairEnumeration s_repairs_from(const DatabaseInstance& instance,
                                        const ConflictHypergraph& graph,
                                        int cap = kDefaultRepairCap) {
  if (cap < 1) throw Error("repair cap must be >= 1");
  detail::TransversalSolver solver(graph, instance.all_tids());
  RepairEnumeration out;
  int found = 0;
  for (int k = 0; k <= solver.vertex_count() && !out.truncated; ++k) {
    solver.enumerate_size_k(k, [&](const std::vector<int>& tids) {
      if (!solver.is_minimal_transversal(tids)) return true;
      if (++found > cap) {
        out.truncated = true;
        return false;
      }
      out.repairs.push_back(detail::make_repair(instance, tids, RepairSemantics::Subset));
      return true;
    });
  }
  return out;
}

inline RepairEnumeration enumerate_s_repairs(const DatabaseInstance& instance,
                                             const ConstraintSet& constraints,
                                             int cap = kDefaultRepairCap) {
  return s_repairs_from(instance, find_conflicts(instance, constraints), cap);
}

struct RepairCheck {
  bool ok = false;
  std::string diagnostic;
};

namespace detail {

inline bool edge_within(const std::vector<int>& edge, const std::set<int>& kept) {
  for (int tid : edge)
    if (!kept.count(tid)) return false;
  return true;
}

}  // namespace detail

// Verifies the repair conditions for `kept` under the given semantics and
// names the first failed clause.
inline RepairCheck is_repair(const DatabaseInstance& instance, const std::vector<int>& kept,
                             const ConstraintSet& constraints, RepairSemantics semantics) {
  std::set<int> kept_set;
  for (int tid : kept) {
    if (tid < 1 || tid > instance.size())
      throw Error("is_repair: tid " + std::to_string(tid) + " not in instance");
    kept_set.insert(tid);
  }

  ConflictHypergraph graph = find_conflicts(instance, constraints);
  for (const ConflictEdge& edge : graph.edges) {
    if (detail::edge_within(edge.tids, kept_set)) {
      std::string tids;
      for (int tid : edge.tids) tids += (tids.empty() ? "" : ",") + std::to_string(tid);
      return {false, "kept set violates " + edge.witness.constraint + " via tuples {" + tids + "}"};
    }
  }

  std::vector<int> deleted;
  for (int tid = 1; tid <= instance.size(); ++tid)
    if (!kept_set.count(tid)) deleted.push_back(tid);

  switch (semantics) {
    case RepairSemantics::Subset: {
      for (int tid : deleted) {
        std::set<int> extended = kept_set;
        extended.insert(tid);
        bool breaks = false;
        for (const ConflictEdge& edge : graph.edges) {
          if (detail::edge_within(edge.tids, extended)) {
            breaks = true;
            break;
          }
        }
        if (!breaks)
          return {false, "not maximal: tuple " + std::to_string(tid) + " (" +
                             instance.tuple(tid).predicate + ") can be re-added"};
      }
      break;
    }
    case RepairSemantics::Cardinality: {
      auto k = min_hitting_set_size(graph, instance.all_tids());
      // deletable = everything, so the solve is always feasible
      if (static_cast<int>(deleted.size()) != *k)
        return {false, "not maximum cardinality: " + std::to_string(kept_set.size()) +
                           " kept, optimum keeps " + std::to_string(instance.size() - *k)};
      break;
    }
    case RepairSemantics::CardinalityEndogenous: {
      for (int tid : deleted)
        if (instance.is_exogenous(tid))
          return {false, "deletes exogenous tuple " + std::to_string(tid)};
      auto k = min_hitting_set_size(graph, instance.endogenous_tids());
      if (!k) return {false, "no endogenous repair exists"};
      if (static_cast<int>(deleted.size()) != *k)
        return {false, "not minimum endogenous deletions: " + std::to_string(deleted.size()) +
                           " deleted, optimum deletes " + std::to_string(*k)};
      break;
    }
  }
  return {true, ""};
}

}  // namespace incmeter
