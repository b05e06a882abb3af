#include "framecat/theory.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace framecat {

int Signature::sort_index(const std::string& name) const {
  for (std::size_t i = 0; i < sorts.size(); ++i)
    if (sorts[i] == name) return static_cast<int>(i);
  return -1;
}

int Signature::rel_index(const std::string& name) const {
  for (std::size_t i = 0; i < relations.size(); ++i)
    if (relations[i].name == name) return static_cast<int>(i);
  return -1;
}

FormulaPtr Formula::make_true() {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::True;
  return f;
}
FormulaPtr Formula::make_false() {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::False;
  return f;
}
FormulaPtr Formula::make_rel(std::string rel, std::vector<std::string> vars) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Rel;
  f->rel = std::move(rel);
  f->vars = std::move(vars);
  return f;
}
FormulaPtr Formula::make_eq(std::string sort, std::string x, std::string y) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Eq;
  f->sort = std::move(sort);
  f->vars = {std::move(x), std::move(y)};
  return f;
}
FormulaPtr Formula::make_and(std::vector<FormulaPtr> kids) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::And;
  f->kids = std::move(kids);
  return f;
}
FormulaPtr Formula::make_or(std::vector<FormulaPtr> kids) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Or;
  f->kids = std::move(kids);
  return f;
}
FormulaPtr Formula::make_exists(std::string var, std::string sort,
                                FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Exists;
  f->var = std::move(var);
  f->sort = std::move(sort);
  f->kids = {std::move(body)};
  return f;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

struct Token {
  enum class Type { Ident, Punct, End };
  Type type = Type::End;
  std::string text;
  int line = 0;
  int col = 0;
};

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  void advance() {
    if (src[pos] == '\n') { ++line; col = 1; } else { ++col; }
    ++pos;
  }

  void skip_ws() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {  // comment to end of line
        while (pos < src.size() && src[pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token next() {
    skip_ws();
    Token t;
    t.line = line;
    t.col = col;
    if (pos >= src.size()) return t;
    char c = src[pos];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.type = Token::Type::Ident;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) ||
              src[pos] == '_')) {
        t.text += src[pos];
        advance();
      }
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.type = Token::Type::Ident;  // numeric tokens usable as names
      while (pos < src.size() &&
             std::isdigit(static_cast<unsigned char>(src[pos]))) {
        t.text += src[pos];
        advance();
      }
      return t;
    }
    t.type = Token::Type::Punct;
    if (c == '|' && pos + 1 < src.size() && src[pos + 1] == '-') {
      t.text = "|-";
      advance();
      advance();
      return t;
    }
    static const std::string singles = "{}(),;:.=&|[]";
    if (singles.find(c) != std::string::npos) {
      t.text = std::string(1, c);
      advance();
      return t;
    }
    throw ParseError(line, col, std::string("unexpected character '") + c + "'");
  }
};

struct Parser {
  std::vector<Token> toks;
  std::size_t at = 0;
  Theory theory;

  explicit Parser(const std::string& text) {
    Lexer lex(text);
    for (;;) {
      Token t = lex.next();
      bool end = t.type == Token::Type::End;
      toks.push_back(std::move(t));
      if (end) break;
    }
  }

  const Token& peek() const { return toks[at]; }
  Token take() { return toks[at++]; }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(t.line, t.col, msg);
  }
  Token expect_punct(const std::string& p) {
    Token t = take();
    if (t.type != Token::Type::Punct || t.text != p)
      fail(t, "expected '" + p + "'");
    return t;
  }
  Token expect_ident() {
    Token t = take();
    if (t.type != Token::Type::Ident) fail(t, "expected identifier");
    return t;
  }
  bool at_punct(const std::string& p) const {
    return peek().type == Token::Type::Punct && peek().text == p;
  }
  bool at_keyword(const std::string& k) const {
    return peek().type == Token::Type::Ident && peek().text == k;
  }
  void eat_separators() {
    while (at_punct(";")) take();
  }

  Theory parse() {
    Token kw = expect_ident();
    if (kw.text != "theory") fail(kw, "expected 'theory'");
    theory.name = expect_ident().text;
    expect_punct("{");
    while (!at_punct("}")) {
      if (peek().type == Token::Type::End) fail(peek(), "unterminated theory");
      if (at_keyword("sort")) {
        parse_sort();
      } else if (at_keyword("rel")) {
        parse_rel();
      } else if (at_keyword("axiom")) {
        parse_axiom();
      } else if (at_keyword("orientation")) {
        parse_orientation();
      } else {
        fail(peek(), "expected sort, rel, axiom or orientation");
      }
      eat_separators();
    }
    expect_punct("}");
    if (peek().type != Token::Type::End) fail(peek(), "trailing input");
    return theory;
  }

  void parse_sort() {
    take();
    Token name = expect_ident();
    if (theory.sig.sort_index(name.text) >= 0)
      fail(name, "duplicate sort '" + name.text + "'");
    theory.sig.sorts.push_back(name.text);
  }

  void parse_rel() {
    take();
    Token name = expect_ident();
    if (theory.sig.rel_index(name.text) >= 0)
      fail(name, "duplicate relation '" + name.text + "'");
    Signature::Rel rel;
    rel.name = name.text;
    expect_punct("(");
    for (;;) {
      Token s = expect_ident();
      int idx = theory.sig.sort_index(s.text);
      if (idx < 0) fail(s, "unknown sort '" + s.text + "'");
      rel.arity.push_back(idx);
      if (at_punct(",")) { take(); continue; }
      break;
    }
    expect_punct(")");
    theory.sig.relations.push_back(std::move(rel));
  }

  void parse_orientation() {
    take();
    Token v = expect_ident();
    if (v.text == "LH")
      theory.orientation = TheoryOrientation::LH;
    else if (v.text == "PS")
      theory.orientation = TheoryOrientation::PS;
    else
      fail(v, "orientation must be LH or PS");
  }

  void parse_axiom() {
    take();
    TheorySequent seq;
    expect_punct("[");
    std::set<std::string> seen;
    if (!at_punct("]")) {
      for (;;) {
        Token v = expect_ident();
        expect_punct(":");
        Token s = expect_ident();
        if (theory.sig.sort_index(s.text) < 0)
          fail(s, "unknown sort '" + s.text + "'");
        if (!seen.insert(v.text).second)
          fail(v, "duplicate context variable '" + v.text + "'");
        seq.context.push_back(TypedVar{v.text, s.text});
        if (at_punct(",")) { take(); continue; }
        break;
      }
    }
    expect_punct("]");
    expect_punct(":");
    std::vector<TypedVar> scope = seq.context;
    if (at_punct("|-")) {
      seq.lhs = Formula::make_true();
    } else {
      seq.lhs = parse_formula(scope);
    }
    expect_punct("|-");
    seq.rhs = parse_formula(scope);
    theory.axioms.push_back(std::move(seq));
  }

  static const TypedVar* lookup(const std::vector<TypedVar>& scope,
                                const std::string& name) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->name == name) return &*it;
    return nullptr;
  }

  // or-level < and-level < atom; exists extends to the right maximally.
  FormulaPtr parse_formula(std::vector<TypedVar>& scope) {
    FormulaPtr first = parse_and(scope);
    if (!at_punct("|")) return first;
    std::vector<FormulaPtr> kids{first};
    while (at_punct("|")) {
      take();
      kids.push_back(parse_and(scope));
    }
    return Formula::make_or(std::move(kids));
  }

  FormulaPtr parse_and(std::vector<TypedVar>& scope) {
    FormulaPtr first = parse_atom(scope);
    if (!at_punct("&")) return first;
    std::vector<FormulaPtr> kids{first};
    while (at_punct("&")) {
      take();
      kids.push_back(parse_atom(scope));
    }
    return Formula::make_and(std::move(kids));
  }

  FormulaPtr parse_atom(std::vector<TypedVar>& scope) {
    if (at_punct("(")) {
      take();
      FormulaPtr f = parse_formula(scope);
      expect_punct(")");
      return f;
    }
    Token t = take();
    if (t.type != Token::Type::Ident) fail(t, "expected formula");
    if (t.text == "true") return Formula::make_true();
    if (t.text == "false") return Formula::make_false();
    if (t.text == "exists") {
      Token v = expect_ident();
      expect_punct(":");
      Token s = expect_ident();
      if (theory.sig.sort_index(s.text) < 0)
        fail(s, "unknown sort '" + s.text + "'");
      expect_punct(".");
      scope.push_back(TypedVar{v.text, s.text});
      FormulaPtr body = parse_formula(scope);
      scope.pop_back();
      return Formula::make_exists(v.text, s.text, std::move(body));
    }
    if (at_punct("(")) {  // relation atom
      int r = theory.sig.rel_index(t.text);
      if (r < 0) fail(t, "unknown relation '" + t.text + "'");
      take();
      std::vector<std::string> args;
      std::vector<Token> arg_toks;
      if (!at_punct(")")) {
        for (;;) {
          Token a = expect_ident();
          args.push_back(a.text);
          arg_toks.push_back(a);
          if (at_punct(",")) { take(); continue; }
          break;
        }
      }
      expect_punct(")");
      const auto& rel = theory.sig.relations[r];
      if (args.size() != rel.arity.size())
        fail(t, "relation '" + t.text + "' expects " +
                    std::to_string(rel.arity.size()) + " arguments, got " +
                    std::to_string(args.size()));
      for (std::size_t i = 0; i < args.size(); ++i) {
        const TypedVar* tv = lookup(scope, args[i]);
        if (!tv) fail(arg_toks[i], "unbound variable '" + args[i] + "'");
        if (theory.sig.sort_index(tv->sort) != rel.arity[i])
          fail(arg_toks[i], "variable '" + args[i] + "' has sort " + tv->sort +
                                ", expected " +
                                theory.sig.sorts[rel.arity[i]]);
      }
      return Formula::make_rel(t.text, std::move(args));
    }
    if (at_punct("=")) {  // equality atom
      const TypedVar* x = lookup(scope, t.text);
      if (!x) fail(t, "unbound variable '" + t.text + "'");
      take();
      Token y = expect_ident();
      const TypedVar* yv = lookup(scope, y.text);
      if (!yv) fail(y, "unbound variable '" + y.text + "'");
      if (x->sort != yv->sort)
        fail(y, "equality between sorts " + x->sort + " and " + yv->sort);
      return Formula::make_eq(x->sort, t.text, y.text);
    }
    fail(t, "expected formula");
  }
};

}  // namespace

Theory parse_theory(const std::string& text) {
  Parser parser(text);
  return parser.parse();
}

// ---------------------------------------------------------------------------
// Pretty printing

namespace {

void print_formula(std::ostream& os, const FormulaPtr& f, int level);

void print_group(std::ostream& os, const FormulaPtr& f, int level,
                 int child_level) {
  bool paren = false;
  switch (f->kind) {
    case Formula::Kind::Or: paren = child_level > 0; break;
    case Formula::Kind::And: paren = child_level > 1; break;
    case Formula::Kind::Exists: paren = child_level > 0; break;
    default: break;
  }
  (void)level;
  if (paren) os << "(";
  print_formula(os, f, paren ? 0 : child_level);
  if (paren) os << ")";
}

void print_formula(std::ostream& os, const FormulaPtr& f, int level) {
  switch (f->kind) {
    case Formula::Kind::True: os << "true"; break;
    case Formula::Kind::False: os << "false"; break;
    case Formula::Kind::Rel: {
      os << f->rel << "(";
      for (std::size_t i = 0; i < f->vars.size(); ++i) {
        if (i) os << ",";
        os << f->vars[i];
      }
      os << ")";
      break;
    }
    case Formula::Kind::Eq:
      os << f->vars[0] << " = " << f->vars[1];
      break;
    case Formula::Kind::And: {
      for (std::size_t i = 0; i < f->kids.size(); ++i) {
        if (i) os << " & ";
        print_group(os, f->kids[i], level, 2);
      }
      break;
    }
    case Formula::Kind::Or: {
      for (std::size_t i = 0; i < f->kids.size(); ++i) {
        if (i) os << " | ";
        print_group(os, f->kids[i], level, 1);
      }
      break;
    }
    case Formula::Kind::Exists:
      os << "exists " << f->var << ":" << f->sort << ". ";
      print_formula(os, f->kids[0], 0);
      break;
  }
}

}  // namespace

std::string pretty_print(const Theory& theory) {
  std::ostringstream os;
  os << "theory " << theory.name << " {\n";
  for (const auto& s : theory.sig.sorts) os << "  sort " << s << ";\n";
  for (const auto& r : theory.sig.relations) {
    os << "  rel " << r.name << "(";
    for (std::size_t i = 0; i < r.arity.size(); ++i) {
      if (i) os << ",";
      os << theory.sig.sorts[r.arity[i]];
    }
    os << ");\n";
  }
  for (const auto& ax : theory.axioms) {
    os << "  axiom [";
    for (std::size_t i = 0; i < ax.context.size(); ++i) {
      if (i) os << ",";
      os << ax.context[i].name << ":" << ax.context[i].sort;
    }
    os << "]: ";
    print_formula(os, ax.lhs, 0);
    os << " |- ";
    print_formula(os, ax.rhs, 0);
    os << ";\n";
  }
  os << "  orientation "
     << (theory.orientation == TheoryOrientation::LH ? "LH" : "PS") << ";\n";
  os << "}\n";
  return os.str();
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a->kind != b->kind) return false;
  if (a->rel != b->rel || a->vars != b->vars || a->sort != b->sort ||
      a->var != b->var)
    return false;
  if (a->kids.size() != b->kids.size()) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!formula_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

bool theory_equal(const Theory& a, const Theory& b) {
  if (a.name != b.name || a.orientation != b.orientation) return false;
  if (a.sig.sorts != b.sig.sorts) return false;
  if (a.sig.relations.size() != b.sig.relations.size()) return false;
  for (std::size_t i = 0; i < a.sig.relations.size(); ++i) {
    if (a.sig.relations[i].name != b.sig.relations[i].name) return false;
    if (a.sig.relations[i].arity != b.sig.relations[i].arity) return false;
  }
  if (a.axioms.size() != b.axioms.size()) return false;
  for (std::size_t i = 0; i < a.axioms.size(); ++i) {
    if (!(a.axioms[i].context == b.axioms[i].context)) return false;
    if (!formula_equal(a.axioms[i].lhs, b.axioms[i].lhs)) return false;
    if (!formula_equal(a.axioms[i].rhs, b.axioms[i].rhs)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Single-sorted reduction

namespace {

std::string fresh_rel_name(const Signature& sig, std::string base) {
  while (sig.rel_index(base) >= 0) base += "_";
  return base;
}

// Relativizes bound variables to their membership predicate.
FormulaPtr relativize(const FormulaPtr& f,
                      const std::map<std::string, std::string>& memb,
                      const std::string& the_sort) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Rel:
      return f;
    case Formula::Kind::Eq:
      return Formula::make_eq(the_sort, f->vars[0], f->vars[1]);
    case Formula::Kind::And: {
      std::vector<FormulaPtr> kids;
      for (const auto& k : f->kids) kids.push_back(relativize(k, memb, the_sort));
      return Formula::make_and(std::move(kids));
    }
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> kids;
      for (const auto& k : f->kids) kids.push_back(relativize(k, memb, the_sort));
      return Formula::make_or(std::move(kids));
    }
    case Formula::Kind::Exists: {
      FormulaPtr body = relativize(f->kids[0], memb, the_sort);
      FormulaPtr guard = Formula::make_rel(memb.at(f->sort), {f->var});
      return Formula::make_exists(
          f->var, the_sort, Formula::make_and({guard, std::move(body)}));
    }
  }
  return f;
}

}  // namespace

Theory singlesort(const Theory& theory) {
  if (theory.sig.sorts.size() <= 1) return theory;

  Theory out;
  out.name = theory.name;
  out.orientation = theory.orientation;
  const std::string the_sort = "U";
  out.sig.sorts = {the_sort};

  std::map<std::string, std::string> memb;  // original sort -> predicate
  for (const auto& s : theory.sig.sorts) {
    std::string name = fresh_rel_name(theory.sig, "U_" + s);
    memb[s] = name;
    out.sig.relations.push_back(Signature::Rel{name, {0}});
  }
  for (const auto& r : theory.sig.relations) {
    out.sig.relations.push_back(
        Signature::Rel{r.name, std::vector<int>(r.arity.size(), 0)});
  }

  // Every element belongs to one of the original sorts, and only one.
  {
    TheorySequent cover;
    cover.context = {TypedVar{"x", the_sort}};
    cover.lhs = Formula::make_true();
    std::vector<FormulaPtr> kids;
    for (const auto& s : theory.sig.sorts)
      kids.push_back(Formula::make_rel(memb[s], {"x"}));
    cover.rhs = Formula::make_or(std::move(kids));
    out.axioms.push_back(std::move(cover));
  }
  for (std::size_t i = 0; i < theory.sig.sorts.size(); ++i) {
    for (std::size_t j = i + 1; j < theory.sig.sorts.size(); ++j) {
      TheorySequent disj;
      disj.context = {TypedVar{"x", the_sort}};
      disj.lhs = Formula::make_and(
          {Formula::make_rel(memb[theory.sig.sorts[i]], {"x"}),
           Formula::make_rel(memb[theory.sig.sorts[j]], {"x"})});
      disj.rhs = Formula::make_false();
      out.axioms.push_back(std::move(disj));
    }
  }
  // Relation arguments live in the sorts of the original arity.
  for (const auto& r : theory.sig.relations) {
    TheorySequent typing;
    std::vector<FormulaPtr> rhs;
    std::vector<std::string> args;
    for (std::size_t i = 0; i < r.arity.size(); ++i) {
      std::string v = "x" + std::to_string(i + 1);
      typing.context.push_back(TypedVar{v, the_sort});
      args.push_back(v);
      rhs.push_back(
          Formula::make_rel(memb[theory.sig.sorts[r.arity[i]]], {v}));
    }
    typing.lhs = Formula::make_rel(r.name, args);
    typing.rhs = rhs.size() == 1 ? rhs[0] : Formula::make_and(std::move(rhs));
    out.axioms.push_back(std::move(typing));
  }
  // Original axioms, relativized.
  for (const auto& ax : theory.axioms) {
    TheorySequent seq;
    std::vector<FormulaPtr> guards;
    for (const auto& tv : ax.context) {
      seq.context.push_back(TypedVar{tv.name, the_sort});
      guards.push_back(Formula::make_rel(memb[tv.sort], {tv.name}));
    }
    FormulaPtr lhs = relativize(ax.lhs, memb, the_sort);
    if (!guards.empty()) {
      std::vector<FormulaPtr> kids = guards;
      kids.push_back(lhs);
      lhs = Formula::make_and(std::move(kids));
    }
    seq.lhs = lhs;
    seq.rhs = relativize(ax.rhs, memb, the_sort);
    out.axioms.push_back(std::move(seq));
  }
  return out;
}

}  // namespace framecat
