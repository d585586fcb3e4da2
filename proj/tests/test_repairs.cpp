#include "incmeter/repairs.hpp"

#include <random>
#include <set>
#include <vector>

#include "catch_amalgamated.hpp"
#include "incmeter/parse.hpp"
#include "oracle.hpp"

using namespace incmeter;

namespace {

std::pair<DatabaseInstance, ConstraintSet> reference_case() {
  DatabaseInstance d = parse_instance("P(e).\nQ(a,b).\nR(a,c).\nP(a).\n");
  ConstraintSet set = parse_constraints(
      "dc k1: <- P(x), Q(x,y).\n"
      "dc k2: <- P(x), R(x,y).\n",
      d.schema());
  return {std::move(d), std::move(set)};
}

ConflictHypergraph graph_of(int n, const std::vector<std::vector<int>>& edges) {
  ConflictHypergraph g;
  for (int tid = 1; tid <= n; ++tid) g.vertices.push_back(tid);
  for (const auto& tids : edges) {
    ConflictEdge e;
    e.tids = tids;
    e.witness.constraint = "e";
    e.witness.tids = tids;
    g.edges.push_back(std::move(e));
  }
  return g;
}

std::set<std::vector<int>> deleted_sets(const RepairEnumeration& found) {
  std::set<std::vector<int>> out;
  for (const Repair& r : found.repairs) out.insert(r.deleted);
  return out;
}

}  // namespace

TEST_CASE("minimum hitting set basics") {
  ConflictHypergraph g = graph_of(4, {{2, 4}, {3, 4}});
  CHECK(min_hitting_set(g, {1, 2, 3, 4}) == std::vector<int>{4});
  CHECK(min_hitting_set_size(g, {1, 2, 3, 4}) == 1);
  // restricting the deletable set forces the larger answer
  CHECK(min_hitting_set(g, {2, 3}) == std::vector<int>{2, 3});
  // an edge with no deletable vertex is unhittable
  CHECK_FALSE(min_hitting_set(g, {1, 2}).has_value());
  CHECK_FALSE(min_hitting_set_size(g, {1, 2}).has_value());
  // no edges: the empty set hits everything
  CHECK(min_hitting_set(graph_of(3, {}), {1, 2, 3}) == std::vector<int>{});
}

TEST_CASE("minimum hitting set breaks ties lexicographically") {
  ConflictHypergraph g = graph_of(4, {{1, 2}, {3, 4}});
  CHECK(min_hitting_set(g, {1, 2, 3, 4}) == std::vector<int>{1, 3});
  ConflictHypergraph g2 = graph_of(3, {{2, 3}});
  CHECK(min_hitting_set(g2, {1, 2, 3}) == std::vector<int>{2});
}

TEST_CASE("duplicate and superset edges do not change answers") {
  ConflictHypergraph plain = graph_of(4, {{1, 2}});
  ConflictHypergraph noisy = graph_of(4, {{1, 2}, {1, 2}, {1, 2, 3}, {1, 2, 4}});
  CHECK(min_hitting_set(plain, {1, 2, 3, 4}) == min_hitting_set(noisy, {1, 2, 3, 4}));
  DatabaseInstance d = parse_instance("P(a).\nP(b).\nP(c).\nP(d).\n");
  CHECK(deleted_sets(min_deletion_repairs(d, plain, d.all_tids(), RepairSemantics::Cardinality)) ==
        deleted_sets(min_deletion_repairs(d, noisy, d.all_tids(), RepairSemantics::Cardinality)));
}

TEST_CASE("reference instance repairs") {
  auto [d, set] = reference_case();

  RepairEnumeration s = enumerate_s_repairs(d, set);
  REQUIRE(s.repairs.size() == 2);
  CHECK_FALSE(s.truncated);
  CHECK(s.repairs[0].deleted == std::vector<int>{4});
  CHECK(s.repairs[0].kept == std::vector<int>{1, 2, 3});
  CHECK(s.repairs[0].semantics == RepairSemantics::Subset);
  CHECK(s.repairs[1].deleted == std::vector<int>{2, 3});
  CHECK(s.repairs[1].kept == std::vector<int>{1, 4});

  RepairEnumeration c = c_repairs(d, set);
  REQUIRE(c.repairs.size() == 1);
  CHECK(c.repairs[0].deleted == std::vector<int>{4});
  CHECK(c.repairs[0].semantics == RepairSemantics::Cardinality);

  // endogenous: with both P facts protected only the Q/R deletion remains
  DatabaseInstance endo = d.with_exogenous({1, 4});
  RepairEnumeration ce = c_repairs_endogenous(endo, set);
  REQUIRE(ce.repairs.size() == 1);
  CHECK(ce.repairs[0].deleted == std::vector<int>{2, 3});
  CHECK(ce.repairs[0].semantics == RepairSemantics::CardinalityEndogenous);

  // protecting Q(a,b) and P(a) leaves no way to repair
  DatabaseInstance blocked = d.with_exogenous({2, 4});
  RepairEnumeration none = c_repairs_endogenous(blocked, set);
  CHECK(none.repairs.empty());
  CHECK_FALSE(none.truncated);
}

TEST_CASE("consistent instance has exactly one repair: itself") {
  DatabaseInstance d = parse_instance("P(e).\nQ(b,c).\n");
  ConstraintSet set = parse_constraints("dc k1: <- P(x), Q(x,y).\n", d.schema());
  for (auto semantics :
       {RepairSemantics::Subset, RepairSemantics::Cardinality,
        RepairSemantics::CardinalityEndogenous}) {
    RepairEnumeration found =
        semantics == RepairSemantics::Subset        ? enumerate_s_repairs(d, set)
        : semantics == RepairSemantics::Cardinality ? c_repairs(d, set)
                                                    : c_repairs_endogenous(d, set);
    REQUIRE(found.repairs.size() == 1);
    CHECK(found.repairs[0].deleted.empty());
    CHECK(found.repairs[0].kept == d.all_tids());
  }
}

TEST_CASE("enumeration cap marks truncation") {
  // seven disjoint pair edges: 2^7 = 128 minimum hitting sets
  std::vector<std::vector<int>> edges;
  std::string facts;
  for (int i = 0; i < 7; ++i) {
    edges.push_back({2 * i + 1, 2 * i + 2});
    facts += "P(v" + std::to_string(2 * i + 1) + ").\nP(v" + std::to_string(2 * i + 2) + ").\n";
  }
  DatabaseInstance d = parse_instance(facts);
  ConflictHypergraph g = graph_of(14, edges);

  RepairEnumeration capped =
      min_deletion_repairs(d, g, d.all_tids(), RepairSemantics::Cardinality, 64);
  CHECK(capped.truncated);
  CHECK(capped.repairs.size() == 64);
  CHECK(capped.repairs[0].deleted == std::vector<int>{1, 3, 5, 7, 9, 11, 13});

  RepairEnumeration all =
      min_deletion_repairs(d, g, d.all_tids(), RepairSemantics::Cardinality, 128);
  CHECK_FALSE(all.truncated);
  CHECK(all.repairs.size() == 128);
  CHECK_THROWS_AS(min_deletion_repairs(d, g, d.all_tids(), RepairSemantics::Cardinality, 0),
                  Error);
}

TEST_CASE("repair checking names the failed clause") {
  auto [d, set] = reference_case();

  CHECK(is_repair(d, {1, 2, 3}, set, RepairSemantics::Subset).ok);
  CHECK(is_repair(d, {1, 4}, set, RepairSemantics::Subset).ok);
  CHECK(is_repair(d, {1, 2, 3}, set, RepairSemantics::Cardinality).ok);

  RepairCheck inconsistent = is_repair(d, {1, 2, 3, 4}, set, RepairSemantics::Subset);
  CHECK_FALSE(inconsistent.ok);
  CHECK(inconsistent.diagnostic.find("violates k1") != std::string::npos);

  RepairCheck not_maximal = is_repair(d, {1, 2}, set, RepairSemantics::Subset);
  CHECK_FALSE(not_maximal.ok);
  CHECK(not_maximal.diagnostic.find("not maximal") != std::string::npos);
  CHECK(not_maximal.diagnostic.find("3") != std::string::npos);

  RepairCheck not_maximum = is_repair(d, {1, 4}, set, RepairSemantics::Cardinality);
  CHECK_FALSE(not_maximum.ok);
  CHECK(not_maximum.diagnostic.find("not maximum cardinality") != std::string::npos);

  DatabaseInstance endo = d.with_exogenous({1, 4});
  CHECK(is_repair(endo, {1, 4}, set, RepairSemantics::CardinalityEndogenous).ok);
  RepairCheck exo_deleted = is_repair(endo, {1, 2, 3}, set, RepairSemantics::CardinalityEndogenous);
  CHECK_FALSE(exo_deleted.ok);
  CHECK(exo_deleted.diagnostic.find("exogenous tuple 4") != std::string::npos);

  CHECK_THROWS_AS(is_repair(d, {9}, set, RepairSemantics::Subset), Error);
}

TEST_CASE("engine repairs equal the exhaustive search") {
  std::mt19937 rng(1717);
  for (int i = 0; i < 120; ++i) {
    oracle::RandomCase rc = oracle::random_case(rng, 10);
    ConflictHypergraph graph = find_conflicts(rc.instance, rc.constraints);

    RepairEnumeration s = s_repairs_from(rc.instance, graph, 1 << 12);
    REQUIRE_FALSE(s.truncated);
    CHECK(deleted_sets(s) == oracle::s_repair_deletions(rc.instance, rc.constraints));
    for (const Repair& r : s.repairs)
      CHECK(is_repair(rc.instance, r.kept, rc.constraints, RepairSemantics::Subset).ok);

    RepairEnumeration c = min_deletion_repairs(rc.instance, graph, rc.instance.all_tids(),
                                               RepairSemantics::Cardinality, 1 << 12);
    REQUIRE_FALSE(c.truncated);
    CHECK(deleted_sets(c) == oracle::c_repair_deletions(rc.instance, rc.constraints));
    CHECK(min_hitting_set_size(graph, rc.instance.all_tids()) ==
          oracle::min_deletions(rc.instance, rc.constraints));

    RepairEnumeration ce = min_deletion_repairs(rc.instance, graph,
                                                rc.instance.endogenous_tids(),
                                                RepairSemantics::CardinalityEndogenous, 1 << 12);
    REQUIRE_FALSE(ce.truncated);
    CHECK(deleted_sets(ce) == oracle::c_endo_repair_deletions(rc.instance, rc.constraints));
    CHECK(min_hitting_set_size(graph, rc.instance.endogenous_tids()) ==
          oracle::min_endo_deletions(rc.instance, rc.constraints));

    // every minimum-deletion repair is also a subset repair
    std::set<std::vector<int>> s_set = deleted_sets(s);
    for (const auto& deleted : deleted_sets(c)) CHECK(s_set.count(deleted) == 1);
  }
}

TEST_CASE("repair enumeration is deterministic") {
  std::mt19937 rng(42);
  oracle::RandomCase rc = oracle::random_case(rng, 12);
  RepairEnumeration first = enumerate_s_repairs(rc.instance, rc.constraints, 1 << 12);
  RepairEnumeration second = enumerate_s_repairs(rc.instance, rc.constraints, 1 << 12);
  REQUIRE(first.repairs.size() == second.repairs.size());
  for (std::size_t i = 0; i < first.repairs.size(); ++i) {
    CHECK(first.repairs[i].deleted == second.repairs[i].deleted);
    CHECK(first.repairs[i].kept == second.repairs[i].kept);
  }
  // ascending deletion count, lexicographic within a count
  for (std::size_t i = 1; i < first.repairs.size(); ++i) {
    const auto& prev = first.repairs[i - 1].deleted;
    const auto& cur = first.repairs[i].deleted;
    CHECK((prev.size() < cur.size() || (prev.size() == cur.size() && prev < cur)));
  }
}

TEST_CASE("branch-and-bound path handles more than 64 unique edges") {
  // all 120 pairs over 16 vertices: hitting them all means leaving at most
  // one vertex out, so the optimum is exactly 15
  std::vector<std::vector<int>> edges;
  for (int i = 1; i <= 16; ++i)
    for (int j = i + 1; j <= 16; ++j) edges.push_back({i, j});
  REQUIRE(edges.size() > 64);
  ConflictHypergraph g = graph_of(16, edges);
  std::vector<int> all;
  for (int tid = 1; tid <= 16; ++tid) all.push_back(tid);
  CHECK(min_hitting_set_size(g, all) == 15);
  std::vector<int> lex_min;
  for (int tid = 1; tid <= 15; ++tid) lex_min.push_back(tid);
  CHECK(min_hitting_set(g, all) == lex_min);

  // sixteen optimal solutions, one per left-out vertex, in lex order
  std::string facts;
  for (int i = 1; i <= 16; ++i) facts += "P(v" + std::to_string(i) + ").\n";
  DatabaseInstance d = parse_instance(facts);
  RepairEnumeration found =
      min_deletion_repairs(d, g, d.all_tids(), RepairSemantics::Cardinality, 32);
  CHECK_FALSE(found.truncated);
  REQUIRE(found.repairs.size() == 16);
  CHECK(found.repairs[0].kept == std::vector<int>{16});
  CHECK(found.repairs[15].kept == std::vector<int>{1});
}
