// Finitary relational theories in the {and, finite or, exists, =} fragment,
// their .gth surface syntax and the single-sorted reduction.
#ifndef FRAMECAT_THEORY_HPP
#define FRAMECAT_THEORY_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace framecat {

struct Signature {
  struct Rel {
    std::string name;
    std::vector<int> arity;  // sort indices
  };
  std::vector<std::string> sorts;
  std::vector<Rel> relations;

  int sort_index(const std::string& name) const;  // -1 if absent
  int rel_index(const std::string& name) const;
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { Rel, Eq, True, False, And, Or, Exists };
  Kind kind = Kind::True;
  std::string rel;                 // Rel: relation name
  std::vector<std::string> vars;   // Rel: arguments; Eq: {x, y}
  std::string sort;                // Eq: the common sort; Exists: bound sort
  std::string var;                 // Exists: bound variable
  std::vector<FormulaPtr> kids;    // And/Or members; Exists body in kids[0]

  static FormulaPtr make_true();
  static FormulaPtr make_false();
  static FormulaPtr make_rel(std::string rel, std::vector<std::string> vars);
  static FormulaPtr make_eq(std::string sort, std::string x, std::string y);
  static FormulaPtr make_and(std::vector<FormulaPtr> kids);
  static FormulaPtr make_or(std::vector<FormulaPtr> kids);
  static FormulaPtr make_exists(std::string var, std::string sort,
                                FormulaPtr body);
};

struct TypedVar {
  std::string name;
  std::string sort;
  bool operator==(const TypedVar& o) const {
    return name == o.name && sort == o.sort;
  }
};

struct TheorySequent {
  std::vector<TypedVar> context;
  FormulaPtr lhs;  // empty lhs in the source text parses as True
  FormulaPtr rhs;
};

enum class TheoryOrientation { LH, PS };

struct Theory {
  std::string name;
  Signature sig;
  std::vector<TheorySequent> axioms;
  TheoryOrientation orientation = TheoryOrientation::LH;
};

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ", col " +
                           std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
};

Theory parse_theory(const std::string& text);

// Canonical surface syntax; parse_theory(pretty_print(t)) reproduces t.
std::string pretty_print(const Theory& theory);

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);
bool theory_equal(const Theory& a, const Theory& b);

// Collapses a multi-sorted theory onto a single sort with one membership
// predicate per original sort. Single-sorted theories are returned unchanged.
Theory singlesort(const Theory& theory);

}  // namespace framecat

#endif  // FRAMECAT_THEORY_HPP
