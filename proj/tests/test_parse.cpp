#include "incmeter/parse.hpp"

#include <string>

#include "catch_amalgamated.hpp"

using namespace incmeter;

TEST_CASE("facts: schema directives, inference, exogenous stars") {
  std::vector<Diagnostic> warnings;
  DatabaseInstance d = parse_instance(
      "% comment line\n"
      "@schema P/1\n"
      "*P(e).\n"
      "Q(a, b).  % trailing comment\n"
      "R(a,c).\n"
      "P(a).\n",
      "facts", &warnings);
  CHECK(d.size() == 4);
  CHECK(d.schema().arity("P") == 1);
  CHECK(d.schema().arity("Q") == 2);  // inferred
  CHECK(d.tuple(1).predicate == "P");
  CHECK(d.tuple(2).args == std::vector<std::string>{"a", "b"});
  CHECK(d.is_exogenous(1));
  CHECK_FALSE(d.is_exogenous(4));
  CHECK(warnings.empty());
}

TEST_CASE("facts: quoted constants keep case and spaces") {
  DatabaseInstance d = parse_instance("P(\"Hello world\", \"a\\\"b\", 42).\n");
  CHECK(d.tuple(1).args == std::vector<std::string>{"Hello world", "a\"b", "42"});
}

TEST_CASE("facts: duplicates warn and collapse") {
  std::vector<Diagnostic> warnings;
  DatabaseInstance d = parse_instance("P(a).\nP(b).\nP(a).\n", "f", &warnings);
  CHECK(d.size() == 2);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].span.line == 3);
  CHECK(warnings[0].message.find("duplicate") != std::string::npos);
}

TEST_CASE("facts: errors carry file, line and column") {
  try {
    parse_instance("P(a).\nP(a, b).\n", "facts");
    FAIL("expected arity conflict");
  } catch (const ParseError& e) {
    CHECK(e.span().file == "facts");
    CHECK(e.span().line == 2);
    CHECK(std::string(e.what()).find("facts:2:") != std::string::npos);
    CHECK(std::string(e.what()).find("arity") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_instance("@schema P/0\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("@schema P/1\nP(a, b).\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("P(a)\n"), ParseError);      // missing dot
  CHECK_THROWS_AS(parse_instance("P().\n"), ParseError);      // empty args
  CHECK_THROWS_AS(parse_instance("P(\"x\n"), ParseError);     // unterminated string
  CHECK_THROWS_AS(parse_instance("@nonsense P/1\n"), ParseError);
}

static Schema pqr() {
  Schema s;
  s.declare("P", 1);
  s.declare("Q", 2);
  s.declare("R", 2);
  return s;
}

TEST_CASE("constraints: denial constraints") {
  ConstraintSet set = parse_constraints(
      "% forbid shared keys\n"
      "dc k1: <- P(x), Q(x,y).\n"
      "dc k2: <- P(x), R(x,y).\n"
      "dc k3: <- Q(x,y), Q(x,z), y != z.\n",
      pqr());
  REQUIRE(set.dcs.size() == 3);
  CHECK(set.dcs[0].name == "k1");
  CHECK(set.dcs[0].atoms.size() == 2);
  CHECK(set.dcs[0].atoms[0].predicate == "P");
  CHECK(set.dcs[0].atoms[0].terms[0].is_var());
  CHECK(set.dcs[2].disequalities.size() == 1);
  CHECK(set.original_fds.empty());
}

TEST_CASE("constraints: lowercase bare tokens are variables, quoted are constants") {
  ConstraintSet set = parse_constraints("dc k: <- Q(x, \"b\").\n", pqr());
  const auto& terms = set.dcs[0].atoms[0].terms;
  CHECK(terms[0].is_var());
  CHECK_FALSE(terms[1].is_var());
  CHECK(terms[1].text == "b");
  // numbers and uppercase-initial bare tokens are constants too
  ConstraintSet set2 = parse_constraints("dc k: <- Q(x, 5), Q(x, Admin).\n", pqr());
  CHECK_FALSE(set2.dcs[0].atoms[0].terms[1].is_var());
  CHECK_FALSE(set2.dcs[0].atoms[1].terms[1].is_var());
  CHECK(set2.dcs[0].atoms[1].terms[1].text == "Admin");
}

TEST_CASE("constraints: functional dependency compiles to a two-atom dc") {
  Schema s;
  s.declare("T", 3);
  ConstraintSet set = parse_constraints("fd f1: T[1, 2 -> 3].\n", s);
  REQUIRE(set.original_fds.size() == 1);
  CHECK(set.original_fds[0].lhs == std::vector<int>{1, 2});
  CHECK(set.original_fds[0].rhs == 3);
  REQUIRE(set.dcs.size() == 1);
  const DenialConstraint& dc = set.dcs[0];
  CHECK(set.is_fd("f1"));
  REQUIRE(dc.atoms.size() == 2);
  CHECK(dc.atoms[0].predicate == "T");
  CHECK(dc.atoms[1].predicate == "T");
  REQUIRE(dc.disequalities.size() == 1);
  // shared variables exactly at the determining positions
  CHECK(dc.atoms[0].terms[0].text == dc.atoms[1].terms[0].text);
  CHECK(dc.atoms[0].terms[1].text == dc.atoms[1].terms[1].text);
  CHECK(dc.atoms[0].terms[2].text != dc.atoms[1].terms[2].text);
  CHECK(dc.disequalities[0].first.text == dc.atoms[0].terms[2].text);
  CHECK(dc.disequalities[0].second.text == dc.atoms[1].terms[2].text);
}

TEST_CASE("constraints: errors") {
  Schema s = pqr();
  CHECK_THROWS_AS(parse_constraints("dc k: <- S(x).\n", s), ParseError);        // undeclared
  CHECK_THROWS_AS(parse_constraints("dc k: <- P(x, y).\n", s), ParseError);     // arity
  CHECK_THROWS_AS(parse_constraints("dc k: <- .\n", s), ParseError);            // empty body
  CHECK_THROWS_AS(parse_constraints("dc k: <- P(x).\ndc k: <- P(y).\n", s), ParseError);
  CHECK_THROWS_AS(parse_constraints("dc k: <- P(x), y != z.\n", s), ParseError);  // unsafe
  CHECK_THROWS_AS(parse_constraints("fd f: P[1 -> 1].\n", s), ParseError);      // rhs in lhs
  CHECK_THROWS_AS(parse_constraints("fd f: Q[3 -> 1].\n", s), ParseError);      // out of range
  CHECK_THROWS_AS(parse_constraints("fd f: S[1 -> 2].\n", s), ParseError);      // undeclared
  CHECK_THROWS_AS(parse_constraints("dc k: P(x).\n", s), ParseError);           // missing <-

  try {
    parse_constraints("dc k: <- P(x), y != z.\n", s, "cons");
    FAIL("expected unsafe variable error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("unsafe variable") != std::string::npos);
    CHECK(std::string(e.what()).find("must occur in an atom") != std::string::npos);
  }
}
