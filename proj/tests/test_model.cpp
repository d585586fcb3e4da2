#include "incmeter/model.hpp"

#include "catch_amalgamated.hpp"

using namespace incmeter;

TEST_CASE("schema declaration") {
  Schema s;
  s.declare("P", 1);
  s.declare("Q", 2);
  s.declare("P", 1);  // re-declaring the same arity is fine
  CHECK(s.has("P"));
  CHECK_FALSE(s.has("R"));
  CHECK(s.arity("Q") == 2);
  CHECK_FALSE(s.arity("R").has_value());
  CHECK_THROWS_AS(s.declare("P", 2), Error);
  CHECK_THROWS_AS(s.declare("", 1), Error);
  CHECK_THROWS_AS(s.declare("Z", 0), Error);
}

static Schema pqr() {
  Schema s;
  s.declare("P", 1);
  s.declare("Q", 2);
  s.declare("R", 2);
  return s;
}

TEST_CASE("instance construction validates") {
  Schema s = pqr();
  std::vector<Tuple> good = {{1, "P", {"e"}}, {2, "Q", {"a", "b"}}};
  DatabaseInstance d(s, good, {2});
  CHECK(d.size() == 2);
  CHECK(d.tuple(1).predicate == "P");
  CHECK(d.is_exogenous(2));
  CHECK_FALSE(d.is_exogenous(1));
  CHECK(d.all_tids() == std::vector<int>{1, 2});
  CHECK(d.endogenous_tids() == std::vector<int>{1});
  CHECK(d.find_tid("Q", {"a", "b"}) == 2);
  CHECK_FALSE(d.find_tid("Q", {"a", "z"}).has_value());
  CHECK_THROWS_AS(d.tuple(3), Error);

  CHECK_THROWS_AS(DatabaseInstance(s, {{2, "P", {"e"}}}, {}), Error);            // tid gap
  CHECK_THROWS_AS(DatabaseInstance(s, {{1, "S", {"e"}}}, {}), Error);            // undeclared
  CHECK_THROWS_AS(DatabaseInstance(s, {{1, "P", {"e", "f"}}}, {}), Error);       // arity
  CHECK_THROWS_AS(DatabaseInstance(s, {{1, "P", {"e"}}, {2, "P", {"e"}}}, {}), Error);
  CHECK_THROWS_AS(DatabaseInstance(s, {{1, "P", {"e"}}}, {2}), Error);           // exo range
}

TEST_CASE("partition swap keeps tuples") {
  Schema s = pqr();
  DatabaseInstance d(s, {{1, "P", {"e"}}, {2, "P", {"a"}}}, {1});
  DatabaseInstance swapped = d.with_exogenous({2});
  CHECK(swapped.is_exogenous(2));
  CHECK_FALSE(swapped.is_exogenous(1));
  CHECK(swapped.tuples() == d.tuples());
  CHECK_FALSE(swapped == d);
}

TEST_CASE("tid assignment collapses duplicates to first occurrence") {
  Schema s = pqr();
  std::vector<RawTuple> raw = {
      {"P", {"e"}, true},
      {"Q", {"a", "b"}, false},
      {"P", {"e"}, false},  // duplicate of the first, different flag
      {"P", {"a"}, false},
  };
  TidAssignment assigned = assign_tids(s, raw);
  CHECK(assigned.instance.size() == 3);
  CHECK(assigned.dropped_duplicates == std::vector<std::size_t>{2});
  CHECK(assigned.instance.tuple(3).args == std::vector<std::string>{"a"});
  CHECK(assigned.instance.is_exogenous(1));  // first occurrence's flag wins

  CHECK_THROWS_AS(assign_tids(s, {{"S", {"x"}, false}}), Error);
  CHECK_THROWS_AS(assign_tids(s, {{"P", {"x", "y"}, false}}), Error);
}

TEST_CASE("constraint helpers") {
  DenialConstraint dc;
  dc.name = "k";
  dc.atoms.push_back({"P", {Term::var("x")}});
  dc.atoms.push_back({"Q", {Term::var("x"), Term::constant("b")}});
  CHECK(dc.atom_variables() == std::set<std::string>{"x"});

  ConstraintSet set;
  set.dcs.push_back(dc);
  FunctionalDependency fd;
  fd.name = "f";
  set.original_fds.push_back(fd);
  CHECK(set.is_fd("f"));
  CHECK_FALSE(set.is_fd("k"));
}

TEST_CASE("semantics and normalizer names") {
  CHECK(to_string(RepairSemantics::Subset) == "s");
  CHECK(to_string(RepairSemantics::Cardinality) == "c");
  CHECK(to_string(RepairSemantics::CardinalityEndogenous) == "c-endo");
  CHECK(to_string(NormalizerKind::Full) == "full");
  CHECK(to_string(NormalizerKind::Endogenous) == "endo");
}
