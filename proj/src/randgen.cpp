#include "framecat/randgen.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace framecat {

Sequent random_sequent(std::mt19937& rng, int n_gens) {
  std::uniform_int_distribution<int> size_d(0, 2);
  std::uniform_int_distribution<int> terms_d(0, 2);
  std::uniform_int_distribution<int> gen_d(0, n_gens - 1);
  Sequent s;
  std::vector<GenId> lhs;
  for (int i = size_d(rng); i > 0; --i) lhs.push_back(gen_d(rng));
  s.lhs = MeetTerm::of(std::move(lhs));
  for (int t = terms_d(rng); t > 0; --t) {
    std::vector<GenId> term;
    for (int i = 1 + size_d(rng); i > 0; --i) term.push_back(gen_d(rng));
    s.rhs.terms.push_back(MeetTerm::of(std::move(term)));
  }
  s.rhs.normalize();
  return s;
}

Presentation random_presentation(std::mt19937& rng, int max_gens,
                                 int max_rels) {
  std::uniform_int_distribution<int> gens_d(1, max_gens);
  int n = gens_d(rng);
  Presentation p;
  for (int i = 0; i < n; ++i) {
    std::string name(1, char('a' + i % 26));
    if (i >= 26) name += std::to_string(i / 26);
    p.add_generator(name, name);
  }
  std::uniform_int_distribution<int> rels_d(0, max_rels);
  for (int r = rels_d(rng); r > 0; --r)
    p.add_relation(random_sequent(rng, n));
  return p;
}

FiniteCategory random_category(std::mt19937& rng, int max_obj) {
  std::uniform_int_distribution<int> shape_d(0, 3);
  std::uniform_int_distribution<int> size_d(1, max_obj);
  int n = size_d(rng);
  switch (shape_d(rng)) {
    case 0:
      return discrete_category(n);
    case 1:
      return codiscrete_groupoid(n);
    case 2:
      return free_arrow_category();
    default: {
      // Reachability closure of a random DAG on n objects gives a poset.
      std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
      for (int i = 0; i < n; ++i) le[i][i] = true;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (rng() % 2) le[i][j] = true;
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (le[i][k] && le[k][j]) le[i][j] = true;
      FiniteCategory c;
      c.n_obj = n;
      std::vector<std::vector<int>> arrow(n, std::vector<int>(n, -1));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (le[i][j]) {
            arrow[i][j] = c.n_arr++;
            c.src.push_back(i);
            c.tgt.push_back(j);
          }
      c.ident.resize(n);
      for (int i = 0; i < n; ++i) c.ident[i] = arrow[i][i];
      c.comp.assign(c.n_arr, std::vector<int>(c.n_arr, -1));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            if (le[i][j] && le[j][k])
              c.comp[arrow[i][j]][arrow[j][k]] = arrow[i][k];
      return c;
    }
  }
}

SheafAction random_action(std::mt19937& rng, const FiniteCategory& cat,
                          int max_fiber) {
  std::uniform_int_distribution<int> fiber_d(0, max_fiber);
  for (int attempt = 0; attempt < 50; ++attempt) {
    SheafAction a;
    a.n_elem = 0;
    a.p.clear();
    for (int o = 0; o < cat.n_obj; ++o) {
      int size = fiber_d(rng);
      for (int i = 0; i < size; ++i) a.p.push_back(o);
      a.n_elem += size;
    }
    a.act.assign(a.n_elem, std::vector<int>(cat.n_arr, -1));
    std::vector<std::pair<int, int>> trail;
    // Forces act[x][g] = y together with every composite it determines.
    std::function<bool(int, int, int)> force = [&](int x, int g, int y) {
      if (a.act[x][g] >= 0) return a.act[x][g] == y;
      if (a.p[y] != cat.tgt[g]) return false;
      a.act[x][g] = y;
      trail.emplace_back(x, g);
      for (int h = 0; h < cat.n_arr; ++h) {
        if (cat.src[h] != cat.tgt[g]) continue;
        if (a.act[y][h] >= 0 && !force(x, cat.comp[g][h], a.act[y][h]))
          return false;
      }
      for (int w = 0; w < a.n_elem; ++w)
        for (int f = 0; f < cat.n_arr; ++f) {
          if (a.act[w][f] != x || cat.tgt[f] != cat.src[g]) continue;
          if (!force(w, cat.comp[f][g], y)) return false;
        }
      return true;
    };
    bool ok = true;
    for (int x = 0; x < a.n_elem && ok; ++x)
      ok = force(x, cat.ident[a.p[x]], x);
    std::function<bool()> fill = [&]() -> bool {
      int sx = -1, sg = -1;
      for (int x = 0; x < a.n_elem && sx < 0; ++x)
        for (int g = 0; g < cat.n_arr; ++g)
          if (cat.src[g] == a.p[x] && a.act[x][g] < 0) {
            sx = x;
            sg = g;
            break;
          }
      if (sx < 0) return !check_action(cat, a);
      std::vector<int> candidates;
      for (int y = 0; y < a.n_elem; ++y)
        if (a.p[y] == cat.tgt[sg]) candidates.push_back(y);
      std::shuffle(candidates.begin(), candidates.end(), rng);
      for (int y : candidates) {
        std::size_t mark = trail.size();
        if (force(sx, sg, y) && fill()) return true;
        while (trail.size() > mark) {
          auto [ux, ug] = trail.back();
          trail.pop_back();
          a.act[ux][ug] = -1;
        }
      }
      return false;
    };
    if (ok && fill()) return a;
  }
  return SheafAction{};  // empty fibers always form an action
}

std::vector<int> random_surjection(std::mt19937& rng, int dom, int cod) {
  std::vector<int> out(dom);
  for (int i = 0; i < cod; ++i) out[i] = i;
  std::uniform_int_distribution<int> d(0, cod - 1);
  for (int i = cod; i < dom; ++i) out[i] = d(rng);
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace framecat
