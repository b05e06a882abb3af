#include <doctest.h>

#include <random>

#include "framecat/oracle.hpp"
#include "framecat/theory.hpp"

using namespace framecat;

TEST_CASE("parsing the empty theory of objects") {
  Theory t = parse_theory("theory O { sort X }");
  CHECK(t.name == "O");
  CHECK(t.sig.sorts == std::vector<std::string>{"X"});
  CHECK(t.sig.relations.empty());
  CHECK(t.axioms.empty());
  CHECK(t.orientation == TheoryOrientation::LH);
}

TEST_CASE("parsing a graph signature") {
  Theory t = parse_theory("theory G { sort V; rel E(V,V); }");
  REQUIRE(t.sig.relations.size() == 1);
  CHECK(t.sig.relations[0].name == "E");
  CHECK(t.sig.relations[0].arity == std::vector<int>{0, 0});
}

TEST_CASE("parsing an axiom with context") {
  Theory t = parse_theory(
      "theory G { sort V; rel E(V,V); axiom [x:V,y:V]: E(x,y) |- E(y,x); }");
  REQUIRE(t.axioms.size() == 1);
  const auto& ax = t.axioms[0];
  REQUIRE(ax.context.size() == 2);
  CHECK(ax.context[0] == TypedVar{"x", "V"});
  CHECK(ax.context[1] == TypedVar{"y", "V"});
  CHECK(ax.lhs->kind == Formula::Kind::Rel);
  CHECK(ax.rhs->vars == std::vector<std::string>{"y", "x"});
}

TEST_CASE("formula syntax: connectives, quantifier, equality, empty lhs") {
  Theory t = parse_theory(
      "theory T { sort A; rel R(A); rel S(A,A);\n"
      "  axiom [x:A]: R(x) & (x = x | false) |- exists y:A. S(x,y) & R(y);\n"
      "  axiom [x:A]: |- R(x) | true;\n"
      "  orientation PS;\n"
      "}");
  CHECK(t.orientation == TheoryOrientation::PS);
  REQUIRE(t.axioms.size() == 2);
  CHECK(t.axioms[0].lhs->kind == Formula::Kind::And);
  CHECK(t.axioms[0].rhs->kind == Formula::Kind::Exists);
  // exists extends maximally to the right
  CHECK(t.axioms[0].rhs->kids[0]->kind == Formula::Kind::And);
  CHECK(t.axioms[1].lhs->kind == Formula::Kind::True);
}

TEST_CASE("parse errors carry a location") {
  auto expect_error = [](const std::string& text, int line) {
    try {
      parse_theory(text);
      FAIL_CHECK("expected a parse error for: " << text);
    } catch (const ParseError& e) {
      CHECK(e.line == line);
    }
  };
  expect_error("theory T { sort A; rel R(B); }", 1);       // unknown sort
  expect_error("theory T { sort A;\n rel R(A,A);\n axiom [x:A]: R(x,x) |- Q(x); }", 3);
  expect_error("theory T { sort A; rel R(A); axiom [x:A]: R(y) |- true; }", 1);
  expect_error("theory T { sort A; rel R(A); axiom [x:A]: R(x,x) |- true; }", 1);
  expect_error("theory T { sort A; sort A; }", 1);          // duplicate sort
  expect_error("theory T { sort A; rel R(A); axiom [x:A]: R(x |- true; }", 1);
}

TEST_CASE("equality across sorts is rejected") {
  CHECK_THROWS_AS(
      parse_theory("theory T { sort A; sort B; axiom [x:A,y:B]: x = y |- true; }"),
      ParseError);
}

TEST_CASE("pretty print round-trips the AST") {
  std::vector<std::string> corpus = {
      "theory O { sort X }",
      "theory G { sort V; rel E(V,V); axiom [x:V,y:V]: E(x,y) |- E(y,x); }",
      "theory P { sort X; rel Pt(X); axiom []: |- exists x:X. Pt(x);"
      " axiom [x:X,y:X]: Pt(x) & Pt(y) |- x = y; }",
      "theory D { sort A; rel R(A); rel S(A,A); orientation PS;"
      " axiom [x:A]: R(x) | (exists y:A. S(x,y)) |- x = x; }",
      "theory N { sort A; rel R(A);"
      " axiom [x:A]: (R(x) | false) & true |- R(x) & (R(x) | R(x)); }",
  };
  for (const auto& text : corpus) {
    Theory t = parse_theory(text);
    std::string printed = pretty_print(t);
    CAPTURE(printed);
    Theory again = parse_theory(printed);
    CHECK(theory_equal(t, again));
    // And printing is a fixed point from the first round on.
    CHECK(pretty_print(again) == printed);
  }
}

TEST_CASE("singlesort leaves single-sorted theories unchanged") {
  Theory t = parse_theory("theory G { sort V; rel E(V,V); }");
  CHECK(theory_equal(singlesort(t), t));
}

TEST_CASE("singlesort on the two-sorted empty theory") {
  Theory t = parse_theory("theory T2 { sort A; sort B; }");
  Theory s = singlesort(t);
  CHECK(s.sig.sorts.size() == 1);
  REQUIRE(s.sig.relations.size() == 2);
  CHECK(s.sig.relations[0].name == "U_A");
  CHECK(s.sig.relations[1].name == "U_B");
  // Covering axiom: |- U_A(x) | U_B(x).
  REQUIRE(!s.axioms.empty());
  CHECK(s.axioms[0].lhs->kind == Formula::Kind::True);
  CHECK(s.axioms[0].rhs->kind == Formula::Kind::Or);
  CHECK(s.axioms[0].rhs->kids.size() == 2);
}

namespace {

// Isomorphism classes in a model list, counted by exhaustive iso search.
int count_iso_classes(const Theory& theory, std::vector<PerModel> models) {
  int classes = 0;
  std::vector<bool> seen(models.size(), false);
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (seen[i]) continue;
    ++classes;
    for (std::size_t j = i + 1; j < models.size(); ++j) {
      if (seen[j]) continue;
      if (!enumerate_isos(theory, models[i], models[j]).empty()) seen[j] = true;
    }
  }
  return classes;
}

}  // namespace

TEST_CASE("singlesort preserves models up to the canonical equivalence") {
  // The collapse packs all carriers into one subquotient, so the comparison
  // counts iso classes of multi-sorted models whose total size fits in P
  // against iso classes of single-sorted models over the same P.
  std::vector<std::string> corpus = {
      "theory T2 { sort A; sort B; }",
      "theory TR { sort A; sort B; rel R(A,B); }",
      "theory TI { sort A; sort B; rel R(A,A); rel S(B);"
      " axiom [x:A,y:A]: R(x,y) |- R(y,x); }",
      "theory TE { sort A; sort B; rel R(A,B);"
      " axiom [x:A]: |- exists y:B. R(x,y); }",
  };
  for (int np = 0; np <= 2; ++np) {
    for (const auto& text : corpus) {
      Theory t = parse_theory(text);
      Theory s = singlesort(t);
      std::vector<PerModel> small;
      for (const auto& m : enumerate_models(t, np))
        if (m.total_size() <= np) small.push_back(m);
      int before = count_iso_classes(t, small);
      int after = count_iso_classes(s, enumerate_models(s, np));
      CAPTURE(text);
      CAPTURE(np);
      CHECK(before == after);
    }
  }
}

TEST_CASE("shadowed binders resolve to the innermost variable") {
  Theory t = parse_theory(
      "theory S { sort A; rel R(A);"
      " axiom [x:A]: true |- exists x:A. R(x); }");
  const auto& body = t.axioms[0].rhs;
  REQUIRE(body->kind == Formula::Kind::Exists);
  CHECK(body->var == "x");
  // Round-trips through the printer unchanged.
  CHECK(theory_equal(parse_theory(pretty_print(t)), t));
}

TEST_CASE("singlesort output parses back from its own printout") {
  std::vector<std::string> corpus = {
      "theory T2 { sort A; sort B; }",
      "theory TE { sort A; sort B; rel R(A,B);"
      " axiom [x:A]: |- exists y:B. R(x,y); }",
  };
  for (const auto& text : corpus) {
    Theory s = singlesort(parse_theory(text));
    std::string printed = pretty_print(s);
    CAPTURE(printed);
    Theory again = parse_theory(printed);
    CHECK(theory_equal(s, again));
  }
}

TEST_CASE("the parser rejects garbage without crashing") {
  std::mt19937 rng(31415);
  const std::string alphabet =
      "theory sort rel axiom orientation exists true false "
      "{}()[],;:.=&|- \n\tABCxyz01";
  for (int trial = 0; trial < 500; ++trial) {
    std::uniform_int_distribution<int> len_d(0, 60);
    std::string text;
    for (int i = len_d(rng); i > 0; --i)
      text += alphabet[rng() % alphabet.size()];
    try {
      parse_theory(text);
    } catch (const ParseError&) {
      // rejected with a located error: fine
    }
  }
  CHECK(true);  // reaching here means no crash or foreign exception
}
