#include "framecat/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace framecat {

int PerModel::class_of(int sort, int p) const {
  for (int q = 0; q < np; ++q)
    if (related(sort, p, q)) return q;
  return -1;
}

std::vector<int> PerModel::classes(int sort) const {
  std::vector<int> out;
  for (int p = 0; p < np; ++p)
    if (defined(sort, p) && class_of(sort, p) == p) out.push_back(p);
  return out;
}

int PerModel::class_count(int sort) const {
  return static_cast<int>(classes(sort).size());
}

int PerModel::total_size() const {
  int n = 0;
  for (std::size_t s = 0; s < per.size(); ++s) n += class_count(s);
  return n;
}

bool PerModel::operator<(const PerModel& o) const {
  if (per != o.per) return per < o.per;
  return rel < o.rel;
}

// ---------------------------------------------------------------------------
// Model enumeration

namespace {

std::vector<std::vector<bool>> enumerate_pers(int np) {
  std::vector<std::vector<bool>> out;
  int bits = np * (np + 1) / 2;
  for (long mask = 0; mask < (1L << bits); ++mask) {
    std::vector<bool> m(np * np, false);
    int bit = 0;
    for (int p = 0; p < np; ++p)
      for (int q = p; q < np; ++q) {
        bool v = (mask >> bit++) & 1;
        m[p * np + q] = v;
        m[q * np + p] = v;
      }
    bool ok = true;
    for (int p = 0; p < np && ok; ++p)
      for (int q = 0; q < np && ok; ++q)
        for (int r = 0; r < np && ok; ++r)
          if (m[p * np + q] && m[q * np + r] && !m[p * np + r]) ok = false;
    if (ok) out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> tuples_over(
    const std::vector<std::vector<int>>& pools) {
  std::vector<std::vector<int>> out{{}};
  for (const auto& pool : pools) {
    std::vector<std::vector<int>> next;
    for (const auto& t : out)
      for (int v : pool) {
        auto u = t;
        u.push_back(v);
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

std::vector<PerModel> enumerate_models(const Theory& theory, int np) {
  int n_sorts = static_cast<int>(theory.sig.sorts.size());
  int n_rels = static_cast<int>(theory.sig.relations.size());
  auto pers = enumerate_pers(np);

  std::vector<PerModel> out;
  PerModel cur;
  cur.np = np;
  cur.per.assign(n_sorts, {});
  cur.rel.assign(n_rels, {});

  std::function<void(int)> pick_rel = [&](int r) {
    if (r == n_rels) {
      bool ok = true;
      for (const auto& ax : theory.axioms)
        if (!model_satisfies(theory, cur, ax)) { ok = false; break; }
      if (ok) out.push_back(cur);
      return;
    }
    std::vector<std::vector<int>> pools;
    for (int s : theory.sig.relations[r].arity) pools.push_back(cur.classes(s));
    auto all = tuples_over(pools);
    // Subsets of class tuples, in ascending bitmask order.
    long count = static_cast<long>(all.size());
    if (count > 24)
      throw std::runtime_error("enumerate_models: relation space too large");
    for (long mask = 0; mask < (1L << count); ++mask) {
      cur.rel[r].clear();
      for (long i = 0; i < count; ++i)
        if ((mask >> i) & 1) cur.rel[r].insert(all[i]);
      pick_rel(r + 1);
    }
    cur.rel[r].clear();
  };
  std::function<void(int)> pick_sort = [&](int s) {
    if (s == n_sorts) {
      pick_rel(0);
      return;
    }
    for (const auto& m : pers) {
      cur.per[s] = m;
      pick_sort(s + 1);
    }
  };
  pick_sort(0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Formula interpretation over PER models

namespace {

bool sat_per(const Theory& theory, const PerModel& m,
             const std::map<std::string, int>& env, const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Rel: {
      int r = theory.sig.rel_index(f->rel);
      std::vector<int> tuple;
      for (const auto& v : f->vars) tuple.push_back(env.at(v));
      return m.rel[r].count(tuple) != 0;
    }
    case Formula::Kind::Eq:
      return env.at(f->vars[0]) == env.at(f->vars[1]);
    case Formula::Kind::And:
      for (const auto& k : f->kids)
        if (!sat_per(theory, m, env, k)) return false;
      return true;
    case Formula::Kind::Or:
      for (const auto& k : f->kids)
        if (sat_per(theory, m, env, k)) return true;
      return false;
    case Formula::Kind::Exists: {
      int s = theory.sig.sort_index(f->sort);
      auto env2 = env;
      for (int c : m.classes(s)) {
        env2[f->var] = c;
        if (sat_per(theory, m, env2, f->kids[0])) return true;
      }
      return false;
    }
  }
  return false;
}

}  // namespace

std::set<std::vector<int>> interpret_formula(const Theory& theory,
                                             const PerModel& model,
                                             const std::vector<TypedVar>& ctx,
                                             const FormulaPtr& formula) {
  std::vector<std::vector<int>> pools;
  for (const auto& tv : ctx)
    pools.push_back(model.classes(theory.sig.sort_index(tv.sort)));
  std::set<std::vector<int>> out;
  for (const auto& tuple : tuples_over(pools)) {
    std::map<std::string, int> env;
    for (std::size_t i = 0; i < ctx.size(); ++i) env[ctx[i].name] = tuple[i];
    if (sat_per(theory, model, env, formula)) out.insert(tuple);
  }
  return out;
}

bool model_satisfies(const Theory& theory, const PerModel& model,
                     const TheorySequent& axiom) {
  auto lhs = interpret_formula(theory, model, axiom.context, axiom.lhs);
  auto rhs = interpret_formula(theory, model, axiom.context, axiom.rhs);
  return std::includes(rhs.begin(), rhs.end(), lhs.begin(), lhs.end());
}

// ---------------------------------------------------------------------------
// Homomorphisms

ModelHom identity_hom(const PerModel& m) {
  ModelHom h;
  for (std::size_t s = 0; s < m.per.size(); ++s) h.map.push_back(m.classes(s));
  return h;
}

bool is_model_hom(const Theory& theory, const PerModel& m, const PerModel& n,
                  const ModelHom& f) {
  for (std::size_t s = 0; s < m.per.size(); ++s) {
    auto dom = m.classes(s);
    if (f.map[s].size() != dom.size()) return false;
    for (int img : f.map[s]) {
      if (img < 0 || !n.defined(s, img) || n.class_of(s, img) != img)
        return false;
    }
  }
  auto apply = [&](int sort, int cls) {
    auto dom = m.classes(sort);
    auto it = std::lower_bound(dom.begin(), dom.end(), cls);
    return f.map[sort][it - dom.begin()];
  };
  for (std::size_t r = 0; r < m.rel.size(); ++r) {
    const auto& arity = theory.sig.relations[r].arity;
    for (const auto& t : m.rel[r]) {
      std::vector<int> img;
      for (std::size_t i = 0; i < t.size(); ++i)
        img.push_back(apply(arity[i], t[i]));
      if (!n.rel[r].count(img)) return false;
    }
  }
  return true;
}

std::vector<ModelHom> enumerate_homs(const Theory& theory, const PerModel& m,
                                     const PerModel& n) {
  int n_sorts = static_cast<int>(theory.sig.sorts.size());
  std::vector<ModelHom> out;
  ModelHom cur;
  cur.map.assign(n_sorts, {});
  std::function<void(int)> rec = [&](int s) {
    if (s == n_sorts) {
      if (is_model_hom(theory, m, n, cur)) out.push_back(cur);
      return;
    }
    auto dom = m.classes(s);
    auto cod = n.classes(s);
    if (dom.empty()) {
      cur.map[s] = {};
      rec(s + 1);
      return;
    }
    if (cod.empty()) return;  // nothing maps into an empty carrier
    std::vector<int> pick(dom.size(), 0);
    for (;;) {
      cur.map[s].resize(dom.size());
      for (std::size_t i = 0; i < dom.size(); ++i)
        cur.map[s][i] = cod[pick[i]];
      rec(s + 1);
      std::size_t i = 0;
      while (i < pick.size()) {
        if (++pick[i] < static_cast<int>(cod.size())) break;
        pick[i++] = 0;
      }
      if (i == pick.size()) break;
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ModelHom> enumerate_isos(const Theory& theory, const PerModel& m,
                                     const PerModel& n) {
  std::vector<ModelHom> out;
  auto backward = enumerate_homs(theory, n, m);
  for (const auto& f : enumerate_homs(theory, m, n)) {
    for (const auto& g : backward) {
      if (compose_hom(m, n, f, g) == identity_hom(m) &&
          compose_hom(n, m, g, f) == identity_hom(n)) {
        out.push_back(f);
        break;
      }
    }
  }
  return out;
}

ModelHom compose_hom(const PerModel& m, const PerModel& n, const ModelHom& f,
                     const ModelHom& g) {
  (void)m;
  ModelHom h;
  h.map.resize(f.map.size());
  for (std::size_t s = 0; s < f.map.size(); ++s) {
    auto mid = n.classes(s);
    for (int img : f.map[s]) {
      auto it = std::lower_bound(mid.begin(), mid.end(), img);
      h.map[s].push_back(g.map[s][it - mid.begin()]);
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// Bundle models

namespace {

// The fiber of a bundle model over one object, as parallel element lists.
struct Fiber {
  std::vector<std::vector<int>> elems;          // per sort, global element ids
  std::vector<std::set<std::vector<int>>> rel;  // global-id tuples
};

Fiber fiber_at(const Theory& theory, const BundleModel& m, int obj) {
  Fiber f;
  f.elems.resize(m.sorts.size());
  for (std::size_t s = 0; s < m.sorts.size(); ++s)
    for (int x = 0; x < m.sorts[s].n_elem; ++x)
      if (m.sorts[s].p[x] == obj) f.elems[s].push_back(x);
  f.rel.resize(m.rel.size());
  for (std::size_t r = 0; r < m.rel.size(); ++r) {
    const auto& arity = theory.sig.relations[r].arity;
    for (const auto& t : m.rel[r]) {
      if (t.empty()) { f.rel[r].insert(t); continue; }
      if (!t.empty() && m.sorts[arity[0]].p[t[0]] == obj) f.rel[r].insert(t);
    }
  }
  return f;
}

bool sat_fiber(const Theory& theory, const Fiber& fib,
               const std::map<std::string, int>& env, const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Rel: {
      int r = theory.sig.rel_index(f->rel);
      std::vector<int> tuple;
      for (const auto& v : f->vars) tuple.push_back(env.at(v));
      return fib.rel[r].count(tuple) != 0;
    }
    case Formula::Kind::Eq:
      return env.at(f->vars[0]) == env.at(f->vars[1]);
    case Formula::Kind::And:
      for (const auto& k : f->kids)
        if (!sat_fiber(theory, fib, env, k)) return false;
      return true;
    case Formula::Kind::Or:
      for (const auto& k : f->kids)
        if (sat_fiber(theory, fib, env, k)) return true;
      return false;
    case Formula::Kind::Exists: {
      int s = theory.sig.sort_index(f->sort);
      auto env2 = env;
      for (int x : fib.elems[s]) {
        env2[f->var] = x;
        if (sat_fiber(theory, fib, env2, f->kids[0])) return true;
      }
      return false;
    }
  }
  return false;
}

}  // namespace

std::optional<BundleModelViolation> check_bundle_model(
    const Theory& theory, const FiniteCategory& cat, const BundleModel& m) {
  if (m.sorts.size() != theory.sig.sorts.size() ||
      m.rel.size() != theory.sig.relations.size())
    return BundleModelViolation{"shape", {}};
  for (std::size_t s = 0; s < m.sorts.size(); ++s)
    if (auto v = check_action(cat, m.sorts[s]))
      return BundleModelViolation{"action:" + v->equation, v->witness};
  // Relation tuples live in a single fiber and are stable under the action.
  for (std::size_t r = 0; r < m.rel.size(); ++r) {
    const auto& arity = theory.sig.relations[r].arity;
    for (const auto& t : m.rel[r]) {
      if (t.size() != arity.size())
        return BundleModelViolation{"arity", t};
      if (t.empty()) continue;
      int obj = m.sorts[arity[0]].p[t[0]];
      for (std::size_t i = 0; i < t.size(); ++i)
        if (m.sorts[arity[i]].p[t[i]] != obj)
          return BundleModelViolation{"mixed_fiber", t};
      for (int g = 0; g < cat.n_arr; ++g) {
        if (cat.src[g] != obj) continue;
        std::vector<int> img;
        for (std::size_t i = 0; i < t.size(); ++i)
          img.push_back(m.sorts[arity[i]].act[t[i]][g]);
        if (!m.rel[r].count(img)) {
          auto witness = t;
          witness.push_back(g);
          return BundleModelViolation{"stability", witness};
        }
      }
    }
  }
  for (int obj = 0; obj < cat.n_obj; ++obj) {
    Fiber fib = fiber_at(theory, m, obj);
    for (std::size_t a = 0; a < theory.axioms.size(); ++a) {
      const auto& ax = theory.axioms[a];
      std::vector<std::vector<int>> pools;
      for (const auto& tv : ax.context)
        pools.push_back(fib.elems[theory.sig.sort_index(tv.sort)]);
      for (const auto& tuple : tuples_over(pools)) {
        std::map<std::string, int> env;
        for (std::size_t i = 0; i < tuple.size(); ++i)
          env[ax.context[i].name] = tuple[i];
        if (sat_fiber(theory, fib, env, ax.lhs) &&
            !sat_fiber(theory, fib, env, ax.rhs)) {
          auto witness = tuple;
          witness.push_back(static_cast<int>(a));
          return BundleModelViolation{"axiom", witness};
        }
      }
    }
  }
  return std::nullopt;
}

std::set<std::vector<int>> interpret_formula_bundle(
    const Theory& theory, const FiniteCategory& cat, const BundleModel& m,
    const std::vector<TypedVar>& ctx, const FormulaPtr& formula) {
  std::set<std::vector<int>> out;
  for (int obj = 0; obj < cat.n_obj; ++obj) {
    Fiber fib = fiber_at(theory, m, obj);
    std::vector<std::vector<int>> pools;
    for (const auto& tv : ctx)
      pools.push_back(fib.elems[theory.sig.sort_index(tv.sort)]);
    for (const auto& tuple : tuples_over(pools)) {
      std::map<std::string, int> env;
      for (std::size_t i = 0; i < tuple.size(); ++i)
        env[ctx[i].name] = tuple[i];
      if (sat_fiber(theory, fib, env, formula)) out.insert(tuple);
    }
  }
  return out;
}

BundleModel set_model(const Theory& theory, const std::vector<int>& sizes,
                      const std::vector<std::set<std::vector<int>>>& rel) {
  BundleModel m;
  for (std::size_t s = 0; s < theory.sig.sorts.size(); ++s) {
    SheafAction a;
    a.n_elem = sizes[s];
    a.p.assign(sizes[s], 0);
    a.act.assign(sizes[s], std::vector<int>(1, -1));
    for (int x = 0; x < sizes[s]; ++x) a.act[x][0] = x;
    m.sorts.push_back(std::move(a));
  }
  m.rel = rel;
  return m;
}

BundleModel per_to_set_model(const Theory& theory, const PerModel& pm) {
  std::vector<int> sizes;
  std::vector<std::vector<int>> cls;
  for (std::size_t s = 0; s < theory.sig.sorts.size(); ++s) {
    cls.push_back(pm.classes(static_cast<int>(s)));
    sizes.push_back(static_cast<int>(cls.back().size()));
  }
  auto local = [&](int sort, int rep) {
    auto it = std::lower_bound(cls[sort].begin(), cls[sort].end(), rep);
    return static_cast<int>(it - cls[sort].begin());
  };
  std::vector<std::set<std::vector<int>>> rel(theory.sig.relations.size());
  for (std::size_t r = 0; r < rel.size(); ++r) {
    const auto& arity = theory.sig.relations[r].arity;
    for (const auto& t : pm.rel[r]) {
      std::vector<int> u;
      for (std::size_t i = 0; i < t.size(); ++i)
        u.push_back(local(arity[i], t[i]));
      rel[r].insert(std::move(u));
    }
  }
  return set_model(theory, sizes, rel);
}

BasedChangeResult base_change(const Theory& theory, const FiniteCategory& dom,
                              const FiniteCategory& cod,
                              const InternalFunctor& f, const BundleModel& m) {
  BasedChangeResult out;
  std::vector<std::map<std::pair<int, int>, int>> index(m.sorts.size());
  for (std::size_t s = 0; s < m.sorts.size(); ++s) {
    PulledBackAction pa = pullback_action(dom, cod, f, m.sorts[s]);
    out.model.sorts.push_back(pa.action);
    out.elems.push_back(pa.elems);
    for (std::size_t i = 0; i < pa.elems.size(); ++i)
      index[s][pa.elems[i]] = static_cast<int>(i);
  }
  out.model.rel.resize(m.rel.size());
  for (std::size_t r = 0; r < m.rel.size(); ++r) {
    const auto& arity = theory.sig.relations[r].arity;
    for (int x = 0; x < dom.n_obj; ++x) {
      for (const auto& t : m.rel[r]) {
        bool in_fiber = true;
        std::vector<int> img;
        for (std::size_t i = 0; i < t.size() && in_fiber; ++i) {
          auto it = index[arity[i]].find({x, t[i]});
          if (it == index[arity[i]].end())
            in_fiber = false;
          else
            img.push_back(it->second);
        }
        if (in_fiber) out.model.rel[r].insert(img);
      }
      if (m.rel[r].count(std::vector<int>{}))
        out.model.rel[r].insert(std::vector<int>{});
    }
  }
  return out;
}

std::vector<std::vector<int>> transformation_action(
    const Theory& theory, const FiniteCategory& dom, const FiniteCategory& cod,
    const InternalFunctor& f, const InternalFunctor& g,
    const InternalTransformation& a, const BundleModel& m) {
  std::vector<std::vector<int>> out;
  for (std::size_t s = 0; s < m.sorts.size(); ++s)
    out.push_back(
        sheaf_transformation_component(dom, cod, f, g, a, m.sorts[s]));
  (void)theory;
  return out;
}

bool is_bundle_model_hom(const Theory& theory, const FiniteCategory& cat,
                         const BundleModel& m, const BundleModel& n,
                         const std::vector<std::vector<int>>& map) {
  for (std::size_t s = 0; s < m.sorts.size(); ++s) {
    if (map[s].size() != static_cast<std::size_t>(m.sorts[s].n_elem))
      return false;
    for (int x = 0; x < m.sorts[s].n_elem; ++x) {
      int y = map[s][x];
      if (y < 0 || y >= n.sorts[s].n_elem) return false;
      if (n.sorts[s].p[y] != m.sorts[s].p[x]) return false;
      for (int gArrow = 0; gArrow < cat.n_arr; ++gArrow) {
        if (cat.src[gArrow] != m.sorts[s].p[x]) continue;
        if (map[s][m.sorts[s].act[x][gArrow]] != n.sorts[s].act[y][gArrow])
          return false;
      }
    }
  }
  for (std::size_t r = 0; r < m.rel.size(); ++r) {
    const auto& arity = theory.sig.relations[r].arity;
    for (const auto& t : m.rel[r]) {
      std::vector<int> img;
      for (std::size_t i = 0; i < t.size(); ++i)
        img.push_back(map[arity[i]][t[i]]);
      if (!n.rel[r].count(img)) return false;
    }
  }
  return true;
}

std::vector<std::vector<std::vector<int>>> enumerate_bundle_model_homs(
    const Theory& theory, const FiniteCategory& cat, const BundleModel& m,
    const BundleModel& n) {
  std::vector<std::vector<std::vector<int>>> out;
  // Flatten the per-sort element maps into one assignment vector.
  std::vector<std::pair<int, int>> slots;  // (sort, element)
  for (std::size_t s = 0; s < m.sorts.size(); ++s)
    for (int x = 0; x < m.sorts[s].n_elem; ++x) slots.emplace_back(s, x);
  std::vector<std::vector<int>> cur(m.sorts.size());
  for (std::size_t s = 0; s < m.sorts.size(); ++s)
    cur[s].assign(m.sorts[s].n_elem, -1);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == slots.size()) {
      if (is_bundle_model_hom(theory, cat, m, n, cur)) out.push_back(cur);
      return;
    }
    auto [s, x] = slots[i];
    for (int y = 0; y < n.sorts[s].n_elem; ++y) {
      if (n.sorts[s].p[y] != m.sorts[s].p[x]) continue;
      cur[s][x] = y;
      rec(i + 1);
    }
    cur[s][x] = -1;
  };
  rec(0);
  return out;
}

std::optional<std::vector<std::vector<int>>> find_bundle_model_iso(
    const Theory& theory, const FiniteCategory& cat, const BundleModel& m,
    const BundleModel& n) {
  // Per-sort equivariant fiber bijections first, relation check afterwards.
  std::vector<std::vector<int>> cur(m.sorts.size());
  std::function<bool(std::size_t)> rec = [&](std::size_t s) -> bool {
    if (s == m.sorts.size()) {
      if (!is_bundle_model_hom(theory, cat, m, n, cur)) return false;
      // The inverse must preserve relations as well.
      std::vector<std::vector<int>> inv(m.sorts.size());
      for (std::size_t t = 0; t < m.sorts.size(); ++t) {
        inv[t].assign(n.sorts[t].n_elem, -1);
        for (int x = 0; x < m.sorts[t].n_elem; ++x) inv[t][cur[t][x]] = x;
      }
      return is_bundle_model_hom(theory, cat, n, m, inv);
    }
    if (m.sorts[s].n_elem != n.sorts[s].n_elem) return false;
    // Search over equivariant bijections for this sort via exhaustive
    // extension; fibers are tiny on the instances we run.
    std::vector<int> assign(m.sorts[s].n_elem, -1);
    std::vector<bool> used(n.sorts[s].n_elem, false);
    std::function<bool(int)> ext = [&](int x) -> bool {
      if (x == m.sorts[s].n_elem) {
        cur[s] = assign;
        return rec(s + 1);
      }
      for (int y = 0; y < n.sorts[s].n_elem; ++y) {
        if (used[y] || n.sorts[s].p[y] != m.sorts[s].p[x]) continue;
        bool ok = true;
        for (int g = 0; g < cat.n_arr && ok; ++g) {
          if (cat.src[g] != m.sorts[s].p[x]) continue;
          int xi = m.sorts[s].act[x][g];
          int yi = n.sorts[s].act[y][g];
          if (xi < x && assign[xi] != yi) ok = false;
          if (xi == x && yi != y) ok = false;
        }
        if (!ok) continue;
        assign[x] = y;
        used[y] = true;
        if (ext(x + 1)) return true;
        assign[x] = -1;
        used[y] = false;
      }
      return false;
    };
    return ext(0);
  };
  if (!rec(0)) return std::nullopt;
  return cur;
}

std::vector<BundleModel> enumerate_bundle_models(const Theory& theory,
                                                 const FiniteCategory& cat,
                                                 int max_fiber) {
  // Enumerate per-sort sheaf actions with fibers of size <= max_fiber, then
  // stable relation subsets, then filter by the axioms.
  std::vector<std::vector<SheafAction>> sort_actions(theory.sig.sorts.size());
  std::vector<int> sizes(cat.n_obj, 0);
  std::function<void(int, std::vector<SheafAction>&)> fill_sizes =
      [&](int obj, std::vector<SheafAction>& sink) {
        if (obj == cat.n_obj) {
          // Elements numbered consecutively object by object.
          SheafAction a;
          a.n_elem = std::accumulate(sizes.begin(), sizes.end(), 0);
          a.p.clear();
          for (int o = 0; o < cat.n_obj; ++o)
            for (int i = 0; i < sizes[o]; ++i) a.p.push_back(o);
          a.act.assign(a.n_elem, std::vector<int>(cat.n_arr, -1));
          // Identity arrows act trivially; other slots searched below.
          std::vector<std::pair<int, int>> slots;
          for (int x = 0; x < a.n_elem; ++x)
            for (int g = 0; g < cat.n_arr; ++g) {
              if (cat.src[g] != a.p[x]) continue;
              if (g == cat.ident[a.p[x]]) {
                a.act[x][g] = x;
              } else {
                slots.emplace_back(x, g);
              }
            }
          std::function<void(std::size_t)> fill_act = [&](std::size_t i) {
            if (i == slots.size()) {
              if (!check_action(cat, a)) sink.push_back(a);
              return;
            }
            auto [x, g] = slots[i];
            for (int y = 0; y < a.n_elem; ++y) {
              if (a.p[y] != cat.tgt[g]) continue;
              a.act[x][g] = y;
              fill_act(i + 1);
            }
            a.act[x][g] = -1;
          };
          fill_act(0);
          return;
        }
        for (int sz = 0; sz <= max_fiber; ++sz) {
          sizes[obj] = sz;
          fill_sizes(obj + 1, sink);
        }
      };
  for (std::size_t s = 0; s < theory.sig.sorts.size(); ++s)
    fill_sizes(0, sort_actions[s]);

  std::vector<BundleModel> out;
  BundleModel cur;
  cur.sorts.assign(theory.sig.sorts.size(), {});
  cur.rel.assign(theory.sig.relations.size(), {});
  std::function<void(std::size_t)> pick_rel = [&](std::size_t r) {
    if (r == theory.sig.relations.size()) {
      if (!check_bundle_model(theory, cat, cur)) out.push_back(cur);
      return;
    }
    const auto& arity = theory.sig.relations[r].arity;
    // Same-fiber tuples.
    std::vector<std::vector<int>> all;
    for (int obj = 0; obj < cat.n_obj; ++obj) {
      std::vector<std::vector<int>> pools;
      for (int s : arity) {
        std::vector<int> pool;
        for (int x = 0; x < cur.sorts[s].n_elem; ++x)
          if (cur.sorts[s].p[x] == obj) pool.push_back(x);
        pools.push_back(std::move(pool));
      }
      for (auto& t : tuples_over(pools)) all.push_back(std::move(t));
    }
    long count = static_cast<long>(all.size());
    if (count > 20)
      throw std::runtime_error("enumerate_bundle_models: relation space too large");
    for (long mask = 0; mask < (1L << count); ++mask) {
      cur.rel[r].clear();
      for (long i = 0; i < count; ++i)
        if ((mask >> i) & 1) cur.rel[r].insert(all[i]);
      pick_rel(r + 1);
    }
    cur.rel[r].clear();
  };
  std::function<void(std::size_t)> pick_sort = [&](std::size_t s) {
    if (s == theory.sig.sorts.size()) {
      pick_rel(0);
      return;
    }
    for (const auto& a : sort_actions[s]) {
      cur.sorts[s] = a;
      pick_sort(s + 1);
    }
  };
  pick_sort(0);
  return out;
}

}  // namespace framecat
