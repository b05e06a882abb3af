#include "framecat/fincat.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace framecat {

std::vector<int> FiniteCategory::hom(int x, int y) const {
  std::vector<int> out;
  for (int f = 0; f < n_arr; ++f)
    if (src[f] == x && tgt[f] == y) out.push_back(f);
  return out;
}

CatCheckResult check_category(const FiniteCategory& cat) {
  CatCheckResult res;
  auto violate = [&](const std::string& eq, std::vector<int> w) {
    res.ok = false;
    res.violations.push_back(CatViolation{eq, std::move(w)});
  };

  for (int x = 0; x < cat.n_obj; ++x) {
    int e = cat.ident[x];
    if (e < 0 || e >= cat.n_arr) {
      violate("identity_in_range", {x});
      continue;
    }
    if (cat.src[e] != x) violate("src_of_identity", {x});
    if (cat.tgt[e] != x) violate("tgt_of_identity", {x});
  }
  for (int f = 0; f < cat.n_arr; ++f) {
    for (int g = 0; g < cat.n_arr; ++g) {
      int fg = cat.comp[f][g];
      bool composable = cat.tgt[f] == cat.src[g];
      if (composable != (fg >= 0)) {
        violate("composability", {f, g});
        continue;
      }
      if (!composable) continue;
      if (fg >= cat.n_arr) {
        violate("composite_in_range", {f, g});
        continue;
      }
      if (cat.src[fg] != cat.src[f]) violate("src_of_composite", {f, g});
      if (cat.tgt[fg] != cat.tgt[g]) violate("tgt_of_composite", {f, g});
    }
  }
  for (int f = 0; f < cat.n_arr; ++f) {
    int el = cat.ident[cat.src[f]];
    if (el >= 0 && el < cat.n_arr && cat.comp[el][f] != f)
      violate("left_unit", {f});
    int er = cat.ident[cat.tgt[f]];
    if (er >= 0 && er < cat.n_arr && cat.comp[f][er] != f)
      violate("right_unit", {f});
  }
  for (int f = 0; f < cat.n_arr; ++f)
    for (int g = 0; g < cat.n_arr; ++g) {
      if (cat.tgt[f] != cat.src[g]) continue;
      int fg = cat.comp[f][g];
      if (fg < 0 || fg >= cat.n_arr) continue;  // reported as composability
      for (int h = 0; h < cat.n_arr; ++h) {
        if (cat.tgt[g] != cat.src[h]) continue;
        int gh = cat.comp[g][h];
        if (gh < 0 || gh >= cat.n_arr) continue;
        if (cat.comp[fg][h] != cat.comp[f][gh]) violate("associativity", {f, g, h});
      }
    }
  if (cat.has_inverse()) {
    for (int f = 0; f < cat.n_arr; ++f) {
      int i = cat.inv[f];
      if (i < 0 || i >= cat.n_arr) {
        violate("inverse_in_range", {f});
        continue;
      }
      if (cat.src[i] != cat.tgt[f]) violate("src_of_inverse", {f});
      if (cat.tgt[i] != cat.src[f]) violate("tgt_of_inverse", {f});
      if (cat.src[i] == cat.tgt[f] && cat.tgt[i] == cat.src[f]) {
        if (cat.comp[f][i] != cat.ident[cat.src[f]])
          violate("inverse_right", {f});
        if (cat.comp[i][f] != cat.ident[cat.tgt[f]])
          violate("inverse_left", {f});
      }
    }
  }
  return res;
}

namespace {

FiniteCategory with_tables(int n_obj, int n_arr) {
  FiniteCategory c;
  c.n_obj = n_obj;
  c.n_arr = n_arr;
  c.src.assign(n_arr, -1);
  c.tgt.assign(n_arr, -1);
  c.ident.assign(n_obj, -1);
  c.comp.assign(n_arr, std::vector<int>(n_arr, -1));
  return c;
}

}  // namespace

FiniteCategory terminal_category() {
  FiniteCategory c = with_tables(1, 1);
  c.src[0] = c.tgt[0] = 0;
  c.ident[0] = 0;
  c.comp[0][0] = 0;
  c.inv = {0};
  return c;
}

FiniteCategory codiscrete_groupoid(int n_obj) {
  FiniteCategory c = with_tables(n_obj, n_obj * n_obj);
  auto arrow = [=](int x, int y) { return x * n_obj + y; };
  for (int x = 0; x < n_obj; ++x) {
    for (int y = 0; y < n_obj; ++y) {
      c.src[arrow(x, y)] = x;
      c.tgt[arrow(x, y)] = y;
    }
    c.ident[x] = arrow(x, x);
  }
  c.inv.assign(c.n_arr, -1);
  for (int x = 0; x < n_obj; ++x)
    for (int y = 0; y < n_obj; ++y) {
      c.inv[arrow(x, y)] = arrow(y, x);
      for (int z = 0; z < n_obj; ++z)
        c.comp[arrow(x, y)][arrow(y, z)] = arrow(x, z);
    }
  return c;
}

FiniteCategory free_arrow_category() {
  FiniteCategory c = with_tables(2, 3);  // arrows: id0, id1, f : 0 -> 1
  c.src = {0, 1, 0};
  c.tgt = {0, 1, 1};
  c.ident = {0, 1};
  c.comp[0][0] = 0;
  c.comp[1][1] = 1;
  c.comp[0][2] = 2;
  c.comp[2][1] = 2;
  return c;
}

FiniteCategory discrete_category(int n_obj) {
  FiniteCategory c = with_tables(n_obj, n_obj);
  for (int x = 0; x < n_obj; ++x) {
    c.src[x] = c.tgt[x] = x;
    c.ident[x] = x;
    c.comp[x][x] = x;
  }
  c.inv.resize(n_obj);
  std::iota(c.inv.begin(), c.inv.end(), 0);
  return c;
}

InternalFunctor identity_functor(const FiniteCategory& cat) {
  InternalFunctor f;
  f.obj.resize(cat.n_obj);
  f.arr.resize(cat.n_arr);
  std::iota(f.obj.begin(), f.obj.end(), 0);
  std::iota(f.arr.begin(), f.arr.end(), 0);
  return f;
}

bool is_functor(const FiniteCategory& dom, const FiniteCategory& cod,
                const InternalFunctor& f) {
  if (static_cast<int>(f.obj.size()) != dom.n_obj ||
      static_cast<int>(f.arr.size()) != dom.n_arr)
    return false;
  for (int x : f.obj)
    if (x < 0 || x >= cod.n_obj) return false;
  for (int a : f.arr)
    if (a < 0 || a >= cod.n_arr) return false;
  for (int a = 0; a < dom.n_arr; ++a) {
    if (cod.src[f.arr[a]] != f.obj[dom.src[a]]) return false;
    if (cod.tgt[f.arr[a]] != f.obj[dom.tgt[a]]) return false;
  }
  for (int x = 0; x < dom.n_obj; ++x)
    if (f.arr[dom.ident[x]] != cod.ident[f.obj[x]]) return false;
  for (int a = 0; a < dom.n_arr; ++a)
    for (int b = 0; b < dom.n_arr; ++b) {
      if (dom.tgt[a] != dom.src[b]) continue;
      if (f.arr[dom.comp[a][b]] != cod.comp[f.arr[a]][f.arr[b]]) return false;
    }
  return true;
}

InternalFunctor compose_functors(const InternalFunctor& f,
                                 const InternalFunctor& g) {
  InternalFunctor h;
  h.obj.reserve(f.obj.size());
  h.arr.reserve(f.arr.size());
  for (int x : f.obj) h.obj.push_back(g.obj[x]);
  for (int a : f.arr) h.arr.push_back(g.arr[a]);
  return h;
}

bool is_fully_faithful(const FiniteCategory& dom, const FiniteCategory& cod,
                       const InternalFunctor& f) {
  for (int x = 0; x < dom.n_obj; ++x)
    for (int y = 0; y < dom.n_obj; ++y) {
      auto source_hom = dom.hom(x, y);
      auto target_hom = cod.hom(f.obj[x], f.obj[y]);
      if (source_hom.size() != target_hom.size()) return false;
      std::set<int> image;
      for (int a : source_hom) image.insert(f.arr[a]);
      if (image.size() != target_hom.size()) return false;
      for (int b : target_hom)
        if (!image.count(b)) return false;
    }
  return true;
}

bool is_surjective_on_objects(const FiniteCategory& dom,
                              const FiniteCategory& cod,
                              const InternalFunctor& f) {
  std::vector<bool> hit(cod.n_obj, false);
  for (int x = 0; x < dom.n_obj; ++x) hit[f.obj[x]] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

bool is_transformation(const FiniteCategory& dom, const FiniteCategory& cod,
                       const InternalFunctor& f, const InternalFunctor& g,
                       const InternalTransformation& a) {
  if (static_cast<int>(a.at.size()) != dom.n_obj) return false;
  for (int x = 0; x < dom.n_obj; ++x) {
    int c = a.at[x];
    if (c < 0 || c >= cod.n_arr) return false;
    if (cod.src[c] != f.obj[x] || cod.tgt[c] != g.obj[x]) return false;
  }
  for (int h = 0; h < dom.n_arr; ++h) {
    int lhs = cod.comp[a.at[dom.src[h]]][g.arr[h]];
    int rhs = cod.comp[f.arr[h]][a.at[dom.tgt[h]]];
    if (lhs != rhs) return false;
  }
  return true;
}

std::vector<InternalTransformation> enumerate_transformations(
    const FiniteCategory& dom, const FiniteCategory& cod,
    const InternalFunctor& f, const InternalFunctor& g) {
  std::vector<std::vector<int>> choices(dom.n_obj);
  for (int x = 0; x < dom.n_obj; ++x)
    choices[x] = cod.hom(f.obj[x], g.obj[x]);
  std::vector<InternalTransformation> out;
  InternalTransformation cur;
  cur.at.assign(dom.n_obj, -1);
  std::function<void(int)> rec = [&](int x) {
    if (x == dom.n_obj) {
      if (is_transformation(dom, cod, f, g, cur)) out.push_back(cur);
      return;
    }
    for (int c : choices[x]) {
      cur.at[x] = c;
      rec(x + 1);
    }
  };
  rec(0);
  return out;
}

std::vector<InternalFunctor> enumerate_functors(const FiniteCategory& dom,
                                                const FiniteCategory& cod) {
  std::vector<InternalFunctor> out;
  InternalFunctor cur;
  cur.obj.assign(dom.n_obj, -1);
  cur.arr.assign(dom.n_arr, -1);
  // Assign objects, then arrows hom-by-hom with functoriality checked last.
  std::function<void(int)> rec_arr = [&](int a) {
    if (a == dom.n_arr) {
      if (is_functor(dom, cod, cur)) out.push_back(cur);
      return;
    }
    if (dom.src[a] < 0) return;
    for (int b : cod.hom(cur.obj[dom.src[a]], cur.obj[dom.tgt[a]])) {
      cur.arr[a] = b;
      rec_arr(a + 1);
    }
    cur.arr[a] = -1;
  };
  std::function<void(int)> rec_obj = [&](int x) {
    if (x == dom.n_obj) {
      rec_arr(0);
      return;
    }
    for (int y = 0; y < cod.n_obj; ++y) {
      cur.obj[x] = y;
      rec_obj(x + 1);
    }
    cur.obj[x] = -1;
  };
  rec_obj(0);
  return out;
}

CoreResult core(const FiniteCategory& cat) {
  CoreResult res;
  for (int f = 0; f < cat.n_arr; ++f)
    for (int g = 0; g < cat.n_arr; ++g) {
      if (cat.tgt[f] != cat.src[g] || cat.tgt[g] != cat.src[f]) continue;
      if (cat.comp[f][g] != cat.ident[cat.src[f]]) continue;
      if (cat.comp[g][f] != cat.ident[cat.tgt[f]]) continue;
      res.arrow_pairs.emplace_back(f, g);
    }
  int n = static_cast<int>(res.arrow_pairs.size());
  std::map<std::pair<int, int>, int> index;
  for (int i = 0; i < n; ++i) index[res.arrow_pairs[i]] = i;

  res.core = with_tables(cat.n_obj, n);
  res.core.inv.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    auto [f, g] = res.arrow_pairs[i];
    res.core.src[i] = cat.src[f];
    res.core.tgt[i] = cat.tgt[f];
    res.core.inv[i] = index.at({g, f});
  }
  for (int x = 0; x < cat.n_obj; ++x)
    res.core.ident[x] = index.at({cat.ident[x], cat.ident[x]});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto [f, g] = res.arrow_pairs[i];
      auto [f2, g2] = res.arrow_pairs[j];
      if (cat.tgt[f] != cat.src[f2]) continue;
      res.core.comp[i][j] = index.at({cat.comp[f][f2], cat.comp[g2][g]});
    }
  res.inclusion.obj.resize(cat.n_obj);
  std::iota(res.inclusion.obj.begin(), res.inclusion.obj.end(), 0);
  res.inclusion.arr.resize(n);
  for (int i = 0; i < n; ++i) res.inclusion.arr[i] = res.arrow_pairs[i].first;
  return res;
}

InducedCategory induced_category(const FiniteCategory& k,
                                 const std::vector<int>& assignment) {
  InducedCategory out;
  int n = static_cast<int>(assignment.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int f = 0; f < k.n_arr; ++f)
        if (k.src[f] == assignment[a] && k.tgt[f] == assignment[b])
          out.arrows.emplace_back(a, b, f);
  std::map<std::tuple<int, int, int>, int> index;
  for (std::size_t i = 0; i < out.arrows.size(); ++i) index[out.arrows[i]] = i;
  out.cat = with_tables(n, static_cast<int>(out.arrows.size()));
  for (std::size_t i = 0; i < out.arrows.size(); ++i) {
    auto [a, b, f] = out.arrows[i];
    out.cat.src[i] = a;
    out.cat.tgt[i] = b;
  }
  for (int a = 0; a < n; ++a)
    out.cat.ident[a] = index.at({a, a, k.ident[assignment[a]]});
  for (std::size_t i = 0; i < out.arrows.size(); ++i)
    for (std::size_t j = 0; j < out.arrows.size(); ++j) {
      auto [a, b, f] = out.arrows[i];
      auto [b2, c, g] = out.arrows[j];
      if (b != b2) continue;
      out.cat.comp[i][j] = index.at({a, c, k.comp[f][g]});
    }
  if (k.has_inverse()) {
    out.cat.inv.resize(out.arrows.size());
    for (std::size_t i = 0; i < out.arrows.size(); ++i) {
      auto [a, b, f] = out.arrows[i];
      out.cat.inv[i] = index.at({b, a, k.inv[f]});
    }
  }
  out.proj.obj = assignment;
  out.proj.arr.resize(out.arrows.size());
  for (std::size_t i = 0; i < out.arrows.size(); ++i)
    out.proj.arr[i] = std::get<2>(out.arrows[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Actions and discrete opfibrations

std::optional<ActionViolation> check_action(const FiniteCategory& cat,
                                            const SheafAction& a) {
  for (int x = 0; x < a.n_elem; ++x) {
    if (a.p[x] < 0 || a.p[x] >= cat.n_obj)
      return ActionViolation{"fiber_in_range", {x}};
    for (int g = 0; g < cat.n_arr; ++g) {
      bool defined = a.act[x][g] >= 0;
      bool should = cat.src[g] == a.p[x];
      if (defined != should) return ActionViolation{"action_domain", {x, g}};
      if (!defined) continue;
      if (a.p[a.act[x][g]] != cat.tgt[g])
        return ActionViolation{"action_target", {x, g}};
    }
    if (a.act[x][cat.ident[a.p[x]]] != x)
      return ActionViolation{"action_unit", {x}};
  }
  for (int x = 0; x < a.n_elem; ++x)
    for (int g = 0; g < cat.n_arr; ++g) {
      if (cat.src[g] != a.p[x]) continue;
      for (int h = 0; h < cat.n_arr; ++h) {
        if (cat.src[h] != cat.tgt[g]) continue;
        if (a.act[a.act[x][g]][h] != a.act[x][cat.comp[g][h]])
          return ActionViolation{"action_associativity", {x, g, h}};
      }
    }
  return std::nullopt;
}

DiscreteOpfibration action_to_dofib(const FiniteCategory& cat,
                                    const SheafAction& a) {
  if (auto v = check_action(cat, a))
    throw std::runtime_error("action_to_dofib: invalid action (" +
                             v->equation + ")");
  DiscreteOpfibration d;
  for (int x = 0; x < a.n_elem; ++x)
    for (int g = 0; g < cat.n_arr; ++g)
      if (cat.src[g] == a.p[x]) d.arrow_pairs.emplace_back(x, g);
  int n = static_cast<int>(d.arrow_pairs.size());
  std::map<std::pair<int, int>, int> index;
  for (int i = 0; i < n; ++i) index[d.arrow_pairs[i]] = i;

  d.total = with_tables(a.n_elem, n);
  for (int i = 0; i < n; ++i) {
    auto [x, g] = d.arrow_pairs[i];
    d.total.src[i] = x;
    d.total.tgt[i] = a.act[x][g];
  }
  for (int x = 0; x < a.n_elem; ++x)
    d.total.ident[x] = index.at({x, cat.ident[a.p[x]]});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto [x, g] = d.arrow_pairs[i];
      auto [y, h] = d.arrow_pairs[j];
      if (d.total.tgt[i] != y) continue;
      d.total.comp[i][j] = index.at({x, cat.comp[g][h]});
    }
  d.proj.obj = a.p;
  d.proj.arr.resize(n);
  for (int i = 0; i < n; ++i) d.proj.arr[i] = d.arrow_pairs[i].second;
  return d;
}

bool is_discrete_opfibration(const FiniteCategory& total,
                             const FiniteCategory& base,
                             const InternalFunctor& proj) {
  if (!is_functor(total, base, proj)) return false;
  // (src, proj_1) must be a bijection onto {(x, g) | proj_0(x) = src(g)}.
  std::set<std::pair<int, int>> seen;
  for (int a = 0; a < total.n_arr; ++a) {
    if (!seen.insert({total.src[a], proj.arr[a]}).second) return false;
  }
  std::size_t expected = 0;
  for (int x = 0; x < total.n_obj; ++x)
    for (int g = 0; g < base.n_arr; ++g)
      if (base.src[g] == proj.obj[x]) ++expected;
  return seen.size() == expected;
}

SheafAction dofib_to_action(const FiniteCategory& total,
                            const FiniteCategory& base,
                            const InternalFunctor& proj) {
  if (!is_discrete_opfibration(total, base, proj))
    throw std::runtime_error("dofib_to_action: not a discrete opfibration");
  SheafAction a;
  a.n_elem = total.n_obj;
  a.p = proj.obj;
  a.act.assign(a.n_elem, std::vector<int>(base.n_arr, -1));
  for (int arr = 0; arr < total.n_arr; ++arr)
    a.act[total.src[arr]][proj.arr[arr]] = total.tgt[arr];
  return a;
}

PulledBackAction pullback_action(const FiniteCategory& dom,
                                 const FiniteCategory& cod,
                                 const InternalFunctor& f,
                                 const SheafAction& a) {
  (void)cod;
  PulledBackAction out;
  for (int x = 0; x < dom.n_obj; ++x)
    for (int y = 0; y < a.n_elem; ++y)
      if (a.p[y] == f.obj[x]) out.elems.emplace_back(x, y);
  std::map<std::pair<int, int>, int> index;
  for (std::size_t i = 0; i < out.elems.size(); ++i) index[out.elems[i]] = i;
  out.action.n_elem = static_cast<int>(out.elems.size());
  out.action.p.resize(out.elems.size());
  out.action.act.assign(out.elems.size(),
                        std::vector<int>(dom.n_arr, -1));
  for (std::size_t i = 0; i < out.elems.size(); ++i) {
    auto [x, y] = out.elems[i];
    out.action.p[i] = x;
    for (int h = 0; h < dom.n_arr; ++h) {
      if (dom.src[h] != x) continue;
      out.action.act[i][h] =
          index.at({dom.tgt[h], a.act[y][f.arr[h]]});
    }
  }
  return out;
}

std::vector<int> sheaf_transformation_component(
    const FiniteCategory& dom, const FiniteCategory& cod,
    const InternalFunctor& f, const InternalFunctor& g,
    const InternalTransformation& a, const SheafAction& sheaf) {
  PulledBackAction fa = pullback_action(dom, cod, f, sheaf);
  PulledBackAction ga = pullback_action(dom, cod, g, sheaf);
  std::map<std::pair<int, int>, int> gindex;
  for (std::size_t i = 0; i < ga.elems.size(); ++i) gindex[ga.elems[i]] = i;
  std::vector<int> out(fa.elems.size());
  for (std::size_t i = 0; i < fa.elems.size(); ++i) {
    auto [x, y] = fa.elems[i];
    out[i] = gindex.at({x, sheaf.act[y][a.at[x]]});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Descent

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int x, int y) { parent[find(x)] = find(y); }
};

}  // namespace

DescentResult descend_action(const FiniteCategory& dom,
                             const FiniteCategory& cod,
                             const InternalFunctor& phi, const SheafAction& x) {
  if (!is_fully_faithful(dom, cod, phi) ||
      !is_surjective_on_objects(dom, cod, phi))
    throw std::runtime_error(
        "descend_action: functor is not a surjective weak equivalence");
  if (auto v = check_action(dom, x))
    throw std::runtime_error("descend_action: invalid action (" + v->equation +
                             ")");
  // u(a, b): the unique arrow a -> b over the identity at phi(b).
  auto u = [&](int a, int b) {
    for (int h : dom.hom(a, b))
      if (phi.arr[h] == cod.ident[phi.obj[b]]) return h;
    throw std::runtime_error("descend_action: missing canonical arrow");
  };

  UnionFind uf(x.n_elem);
  for (int e = 0; e < x.n_elem; ++e) {
    int a = x.p[e];
    for (int b = 0; b < dom.n_obj; ++b)
      if (phi.obj[b] == phi.obj[a]) uf.unite(e, x.act[e][u(a, b)]);
  }
  DescentResult res;
  res.class_of.assign(x.n_elem, -1);
  std::vector<int> reps;
  for (int e = 0; e < x.n_elem; ++e) {
    if (uf.find(e) == e) {
      res.class_of[e] = static_cast<int>(reps.size());
      reps.push_back(e);
    }
  }
  for (int e = 0; e < x.n_elem; ++e) res.class_of[e] = res.class_of[uf.find(e)];

  res.descended.n_elem = static_cast<int>(reps.size());
  res.descended.p.resize(reps.size());
  for (std::size_t c = 0; c < reps.size(); ++c)
    res.descended.p[c] = phi.obj[x.p[reps[c]]];
  res.descended.act.assign(reps.size(), std::vector<int>(cod.n_arr, -1));
  for (std::size_t c = 0; c < reps.size(); ++c) {
    int e = reps[c];
    for (int k = 0; k < cod.n_arr; ++k) {
      if (cod.src[k] != res.descended.p[c]) continue;
      // Lift k to an arrow out of p(e) via full faithfulness.
      int lift = -1;
      for (int b = 0; b < dom.n_obj && lift < 0; ++b) {
        if (phi.obj[b] != cod.tgt[k]) continue;
        for (int h : dom.hom(x.p[e], b))
          if (phi.arr[h] == k) { lift = h; break; }
      }
      if (lift < 0)
        throw std::runtime_error("descend_action: arrow fails to lift");
      res.descended.act[c][k] = res.class_of[x.act[e][lift]];
    }
  }
  if (auto v = check_action(cod, res.descended))
    throw std::runtime_error("descend_action: descended action invalid (" +
                             v->equation + ")");
  // Canonical comparison with the pullback: e -> (p(e), [e]).
  PulledBackAction pb = pullback_action(dom, cod, phi, res.descended);
  res.pullback_elems = pb.elems;
  std::map<std::pair<int, int>, int> index;
  for (std::size_t i = 0; i < pb.elems.size(); ++i) index[pb.elems[i]] = i;
  res.witness.resize(x.n_elem);
  for (int e = 0; e < x.n_elem; ++e)
    res.witness[e] = index.at({x.p[e], res.class_of[e]});
  return res;
}

DescendedDofib descend_dofib(const FiniteCategory& dom,
                             const FiniteCategory& cod,
                             const InternalFunctor& phi,
                             const FiniteCategory& total,
                             const InternalFunctor& proj) {
  SheafAction upstairs = dofib_to_action(total, dom, proj);
  DescentResult d = descend_action(dom, cod, phi, upstairs);
  DescendedDofib out;
  out.dofib = action_to_dofib(cod, d.descended);
  out.class_of = d.class_of;
  return out;
}

std::optional<std::vector<int>> find_action_iso(const FiniteCategory& base,
                                                const SheafAction& a,
                                                const SheafAction& b) {
  if (a.n_elem != b.n_elem) return std::nullopt;
  std::vector<std::vector<int>> b_fiber(base.n_obj);
  for (int y = 0; y < b.n_elem; ++y) b_fiber[b.p[y]].push_back(y);
  for (int o = 0; o < base.n_obj; ++o) {
    int count = 0;
    for (int x = 0; x < a.n_elem; ++x)
      if (a.p[x] == o) ++count;
    if (count != static_cast<int>(b_fiber[o].size())) return std::nullopt;
  }
  std::vector<int> assign(a.n_elem, -1);
  std::vector<bool> used(b.n_elem, false);

  std::function<bool(int)> rec = [&](int x) -> bool {
    while (x < a.n_elem && assign[x] >= 0) ++x;
    if (x == a.n_elem) return true;
    for (int y : b_fiber[a.p[x]]) {
      if (used[y]) continue;
      // Tentatively map x -> y and push the equivariant consequences.
      std::vector<std::pair<int, int>> trail;
      bool ok = true;
      std::vector<std::pair<int, int>> stack{{x, y}};
      while (!stack.empty() && ok) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        if (assign[cx] >= 0) {
          if (assign[cx] != cy) ok = false;
          continue;
        }
        if (used[cy] || a.p[cx] != b.p[cy]) { ok = false; continue; }
        assign[cx] = cy;
        used[cy] = true;
        trail.emplace_back(cx, cy);
        for (int g = 0; g < base.n_arr; ++g) {
          if (base.src[g] != a.p[cx]) continue;
          stack.emplace_back(a.act[cx][g], b.act[cy][g]);
        }
      }
      if (ok && rec(x + 1)) return true;
      for (auto [cx, cy] : trail) {
        assign[cx] = -1;
        used[cy] = false;
      }
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return assign;
}

// ---------------------------------------------------------------------------
// Anafunctors

PullbackCategory pullback_category(const FiniteCategory& a,
                                   const FiniteCategory& b,
                                   const FiniteCategory& c,
                                   const InternalFunctor& f,
                                   const InternalFunctor& g) {
  (void)c;
  PullbackCategory out;
  for (int x = 0; x < a.n_obj; ++x)
    for (int y = 0; y < b.n_obj; ++y)
      if (f.obj[x] == g.obj[y]) out.obj_pairs.emplace_back(x, y);
  for (int p = 0; p < a.n_arr; ++p)
    for (int q = 0; q < b.n_arr; ++q)
      if (f.arr[p] == g.arr[q]) out.arr_pairs.emplace_back(p, q);
  std::map<std::pair<int, int>, int> oindex, aindex;
  for (std::size_t i = 0; i < out.obj_pairs.size(); ++i)
    oindex[out.obj_pairs[i]] = i;
  for (std::size_t i = 0; i < out.arr_pairs.size(); ++i)
    aindex[out.arr_pairs[i]] = i;

  out.cat = with_tables(static_cast<int>(out.obj_pairs.size()),
                        static_cast<int>(out.arr_pairs.size()));
  for (std::size_t i = 0; i < out.arr_pairs.size(); ++i) {
    auto [p, q] = out.arr_pairs[i];
    out.cat.src[i] = oindex.at({a.src[p], b.src[q]});
    out.cat.tgt[i] = oindex.at({a.tgt[p], b.tgt[q]});
  }
  for (std::size_t i = 0; i < out.obj_pairs.size(); ++i) {
    auto [x, y] = out.obj_pairs[i];
    out.cat.ident[i] = aindex.at({a.ident[x], b.ident[y]});
  }
  for (std::size_t i = 0; i < out.arr_pairs.size(); ++i)
    for (std::size_t j = 0; j < out.arr_pairs.size(); ++j) {
      if (out.cat.tgt[i] != out.cat.src[j]) continue;
      auto [p, q] = out.arr_pairs[i];
      auto [p2, q2] = out.arr_pairs[j];
      out.cat.comp[i][j] = aindex.at({a.comp[p][p2], b.comp[q][q2]});
    }
  out.pi1.obj.resize(out.obj_pairs.size());
  out.pi1.arr.resize(out.arr_pairs.size());
  out.pi2.obj.resize(out.obj_pairs.size());
  out.pi2.arr.resize(out.arr_pairs.size());
  for (std::size_t i = 0; i < out.obj_pairs.size(); ++i) {
    out.pi1.obj[i] = out.obj_pairs[i].first;
    out.pi2.obj[i] = out.obj_pairs[i].second;
  }
  for (std::size_t i = 0; i < out.arr_pairs.size(); ++i) {
    out.pi1.arr[i] = out.arr_pairs[i].first;
    out.pi2.arr[i] = out.arr_pairs[i].second;
  }
  return out;
}

bool is_anafunctor(const FiniteCategory& dom, const FiniteCategory& cod,
                   const Anafunctor& f) {
  return is_functor(f.mid, dom, f.left) && is_functor(f.mid, cod, f.right) &&
         is_fully_faithful(f.mid, dom, f.left) &&
         is_surjective_on_objects(f.mid, dom, f.left);
}

Anafunctor identity_anafunctor(const FiniteCategory& cat) {
  Anafunctor f;
  f.mid = cat;
  f.left = identity_functor(cat);
  f.right = identity_functor(cat);
  return f;
}

Anafunctor compose_anafunctors(const FiniteCategory& h,
                               const FiniteCategory& k,
                               const FiniteCategory& l, const Anafunctor& f,
                               const Anafunctor& g) {
  (void)h;
  (void)l;
  PullbackCategory pb =
      pullback_category(f.mid, g.mid, k, f.right, g.left);
  Anafunctor out;
  out.mid = pb.cat;
  out.left = compose_functors(pb.pi1, f.left);
  out.right = compose_functors(pb.pi2, g.right);
  return out;
}

SpanPullback span_pullback(const FiniteCategory& h, const FiniteCategory& k,
                           const Anafunctor& f, const Anafunctor& g) {
  (void)k;
  SpanPullback out;
  out.pb = pullback_category(f.mid, g.mid, h, f.left, g.left);
  out.left_to_cod = compose_functors(out.pb.pi1, f.right);
  out.right_to_cod = compose_functors(out.pb.pi2, g.right);
  return out;
}

TwoCellResult two_cell_canonical(const FiniteCategory& h,
                                 const FiniteCategory& k, const Anafunctor& f,
                                 const Anafunctor& g,
                                 const FiniteCategory& sigma_dom,
                                 const InternalFunctor& sigma,
                                 const InternalTransformation& tau) {
  TwoCellResult res;
  SpanPullback sp = span_pullback(h, k, f, g);
  std::vector<int> preimage(sp.pb.cat.n_obj, -1);
  for (int y = 0; y < sigma_dom.n_obj; ++y) preimage[sigma.obj[y]] = y;
  for (int z = 0; z < sp.pb.cat.n_obj; ++z) {
    if (preimage[z] < 0) {
      res.error = {"sigma_not_surjective_on_objects", {z}};
      return res;
    }
  }
  for (int y = 0; y < sigma_dom.n_obj; ++y)
    for (int y2 = 0; y2 < sigma_dom.n_obj; ++y2) {
      if (sigma.obj[y] != sigma.obj[y2]) continue;
      if (tau.at[y] != tau.at[y2]) {
        res.error = {"tau_fails_kernel_pair", {y, y2}};
        return res;
      }
    }
  res.canonical.at.resize(sp.pb.cat.n_obj);
  for (int z = 0; z < sp.pb.cat.n_obj; ++z)
    res.canonical.at[z] = tau.at[preimage[z]];
  if (!is_transformation(sp.pb.cat, k, sp.left_to_cod, sp.right_to_cod,
                         res.canonical)) {
    res.error = {"canonical_not_natural", {}};
    return res;
  }
  res.ok = true;
  return res;
}

}  // namespace framecat
