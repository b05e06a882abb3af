// Acceptance suite: runs every top-level property at its stated size and
// budget and prints one pass/fail line per criterion.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <set>

#include "framecat/randgen.hpp"
#include "support.hpp"

using namespace framecat;
using namespace framecat::testsupport;

namespace {

struct Harness {
  int passed = 0;
  int failed = 0;

  void run(int number, const std::string& label, double budget_seconds,
           const std::function<bool(std::string&)>& body) {
    std::string detail;
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed > budget_seconds) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + std::string("over budget");
    }
    std::printf("criterion %2d %s (%7.1f ms / budget %g s) %s%s%s\n", number,
                ok ? "PASS" : "FAIL", elapsed * 1000.0, budget_seconds,
                label.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    (ok ? passed : failed) += 1;
  }
};

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

long surjection_count(int d, int x) {
  long total = 0;
  for (int j = 0; j <= x; ++j) {
    long term = binomial(x, j);
    long pw = 1;
    for (int i = 0; i < d; ++i) pw *= (x - j);
    total += (j % 2 ? -term : term) * pw;
  }
  return total;
}

long partial_surjection_count(int m, int x) {
  long total = 0;
  for (int d = 0; d <= m; ++d)
    total += binomial(m, d) * surjection_count(d, x);
  return total;
}

std::vector<std::string> tokens(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

bool criterion_sierpinski(std::string& detail) {
  Presentation s;
  s.add_generator("g", "g");
  auto pts = enumerate_points(s);
  if (pts.size() != 2) {
    detail = "expected 2 points, got " + std::to_string(pts.size());
    return false;
  }
  return !pts[0].get(0) && pts[1].get(0);
}

bool criterion_canonical(std::string& detail) {
  for (int n = 0; n <= 4; ++n) {
    auto pts = enumerate_points(canonical_presentation(tokens("x", n)));
    if (static_cast<int>(pts.size()) != n) {
      detail = "|X| = " + std::to_string(n) + " has " +
               std::to_string(pts.size()) + " points";
      return false;
    }
    for (const auto& pt : pts)
      if (pt.popcount() != 1) {
        detail = "non-singleton point at |X| = " + std::to_string(n);
        return false;
      }
  }
  return true;
}

bool criterion_expansion(std::string& detail) {
  std::mt19937 rng(20240321);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> big_d(1, 6);
    int n_big = big_d(rng);
    std::uniform_int_distribution<int> mid_d(1, n_big);
    int n_mid = mid_d(rng);
    SpanData gens;
    gens.n_big = n_big;
    gens.n_mid = n_mid;
    std::vector<int> perm(n_big);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    gens.incl.assign(perm.begin(), perm.begin() + n_mid);
    std::uniform_int_distribution<int> base_d(1, n_mid);
    gens.n_base = base_d(rng);
    gens.q = random_surjection(rng, n_mid, gens.n_base);

    Presentation p = random_presentation(rng, 1, 0);
    while (p.size() != gens.n_base) p = random_presentation(rng, gens.n_base, 0);
    std::uniform_int_distribution<int> rel_d(0, 3);
    for (int r = rel_d(rng); r > 0; --r)
      p.add_relation(random_sequent(rng, p.size()));
    SpanData rels = SpanData::identity(static_cast<int>(p.relations.size()));

    Presentation q = expand_presentation(p, gens, rels);
    auto before = enumerate_points(p);
    auto after = enumerate_points(q);
    if (before.size() != after.size()) {
      detail = "trial " + std::to_string(trial) + ": point counts differ";
      return false;
    }
    std::vector<Point> mapped;
    for (const auto& pt : before) mapped.push_back(expand_point(p, gens, q, pt));
    std::sort(mapped.begin(), mapped.end());
    if (!(mapped == after)) {
      detail = "trial " + std::to_string(trial) + ": bijection mismatch";
      return false;
    }
  }
  return true;
}

bool criterion_forcing(std::string& detail) {
  for (int m = 0; m <= 4; ++m)
    for (int x = 0; x <= 4; ++x) {
      auto locale = gen_forcing_presentation(tokens("n", m), tokens("x", x));
      auto pts = enumerate_points(locale.pres);
      long expected = partial_surjection_count(m, x);
      if (static_cast<long>(pts.size()) != expected) {
        detail = "|M|=" + std::to_string(m) + ", |X|=" + std::to_string(x) +
                 ": " + std::to_string(pts.size()) + " points, expected " +
                 std::to_string(expected);
        return false;
      }
      // Each point reads back as a single-valued map onto the target.
      for (const auto& pt : pts) {
        std::vector<int> image(x, 0);
        for (int n = 0; n < m; ++n) {
          int hits = 0;
          for (int t = 0; t < x; ++t)
            if (pt.get(locale.graph_gen(n, t))) {
              ++hits;
              ++image[t];
            }
          if (hits > 1) {
            detail = "point is not single-valued";
            return false;
          }
        }
        for (int t = 0; t < x; ++t)
          if (image[t] == 0) {
            detail = "point misses a target";
            return false;
          }
      }
    }
  return true;
}

bool criterion_bijections(std::string& detail) {
  for (const auto& entry : corpus()) {
    for (int np = 0; np <= 2; ++np) {
      BijectionReport rep =
          check_bijections(entry.theory, ParameterSet::numeric(np));
      if (!rep.ok || rep.g0_points != rep.n_models ||
          rep.g1_points != rep.n_homs || rep.core_points != rep.n_isos ||
          rep.bundle_points != rep.n_carriers) {
        detail = entry.label + "@" + std::to_string(np) + ": " + rep.detail;
        return false;
      }
      if (entry.label == "objects" && np == 2 &&
          !(rep.n_models == 5 && rep.n_homs == 27 && rep.n_isos == 12 &&
            rep.n_carriers == 5)) {
        detail = "object classifier counts differ from 5/27/12/5";
        return false;
      }
    }
  }
  return true;
}

bool criterion_structure(std::string& detail) {
  for (const auto& entry : corpus()) {
    for (int np = 0; np <= 3; ++np) {
      ClassifierBundle b;  // throws on any failing proof obligation
      try {
        b = gen_classifier(entry.theory, ParameterSet::numeric(np));
      } catch (const ClassifierError& e) {
        detail = entry.label + "@" + std::to_string(np) + ": " + e.what();
        return false;
      }
      // Point-level laws stay affordable up to |P| = 2.
      if (np <= 2 && !check_point_category_laws(b, &detail)) {
        detail = entry.label + "@" + std::to_string(np) + ": " + detail;
        return false;
      }
    }
  }
  return true;
}

bool criterion_soundness(std::string& detail) {
  for (const auto& entry : corpus()) {
    for (auto role : {TheoryOrientation::LH, TheoryOrientation::PS}) {
      Theory t = entry.theory;
      t.orientation = role;
      ClassifierBundle b = gen_classifier(t, ParameterSet::numeric(2, role));
      if (!check_generic_model_soundness(b, &detail)) {
        detail = entry.label + ": " + detail;
        return false;
      }
      if (!check_interpretation_coherence(b, &detail)) {
        detail = entry.label + ": " + detail;
        return false;
      }
    }
  }
  return true;
}

bool criterion_base_change(std::string& detail) {
  // Base-change commutation on plain graph structures: random actions with
  // orbit-closed edge relations, random functors, random formulas.
  Theory g = parse_theory("theory G { sort V; rel E(V,V); }");
  std::vector<FormulaPtr> formulas = {
      Formula::make_rel("E", {"x", "y"}),
      Formula::make_eq("V", "x", "y"),
      Formula::make_or({Formula::make_rel("E", {"x", "y"}),
                        Formula::make_eq("V", "x", "y")}),
      Formula::make_exists(
          "z", "V",
          Formula::make_and({Formula::make_rel("E", {"x", "z"}),
                             Formula::make_rel("E", {"z", "y"})})),
  };
  std::vector<TypedVar> ctx{{"x", "V"}, {"y", "V"}};
  std::mt19937 rng(555);
  int done = 0;
  while (done < 100) {
    FiniteCategory k = random_category(rng, 4);
    FiniteCategory h = random_category(rng, 4);
    auto functors = enumerate_functors(h, k);
    if (functors.empty()) continue;
    const auto& f = functors[rng() % functors.size()];

    BundleModel m;
    m.sorts.push_back(random_action(rng, k, 2));
    m.rel.resize(1);
    const SheafAction& act = m.sorts[0];
    for (int x = 0; x < act.n_elem; ++x)
      for (int y = 0; y < act.n_elem; ++y) {
        if (act.p[x] != act.p[y] || rng() % 3) continue;
        // Orbit closure keeps the relation stable under the action.
        std::vector<std::vector<int>> frontier{{x, y}};
        while (!frontier.empty()) {
          auto t = frontier.back();
          frontier.pop_back();
          if (!m.rel[0].insert(t).second) continue;
          for (int arr = 0; arr < k.n_arr; ++arr)
            if (k.src[arr] == act.p[t[0]])
              frontier.push_back({act.act[t[0]][arr], act.act[t[1]][arr]});
        }
      }
    if (check_bundle_model(g, k, m)) {
      detail = "generated structure invalid";
      return false;
    }
    const auto& phi = formulas[rng() % formulas.size()];

    BasedChangeResult pulled = base_change(g, h, k, f, m);
    auto direct = interpret_formula_bundle(g, h, pulled.model, ctx, phi);
    auto upstairs = interpret_formula_bundle(g, k, m, ctx, phi);
    std::set<std::vector<int>> transported;
    std::map<std::pair<int, int>, int> index;
    for (std::size_t i = 0; i < pulled.elems[0].size(); ++i)
      index[pulled.elems[0][i]] = static_cast<int>(i);
    for (int x = 0; x < h.n_obj; ++x)
      for (const auto& t : upstairs) {
        std::vector<int> img;
        bool ok = true;
        for (int e : t) {
          auto it = index.find({x, e});
          if (it == index.end()) {
            ok = false;
            break;
          }
          img.push_back(it->second);
        }
        if (ok) transported.insert(img);
      }
    if (direct != transported) {
      detail = "triple " + std::to_string(done) + " disagrees";
      return false;
    }
    ++done;
  }
  return true;
}

bool criterion_descent(std::string& detail) {
  std::mt19937 rng(20250102);
  int done = 0;
  while (done < 100) {
    FiniteCategory k = random_category(rng, 4);
    std::uniform_int_distribution<int> dom_d(k.n_obj, k.n_obj + 2);
    auto assignment = random_surjection(rng, dom_d(rng), k.n_obj);
    InducedCategory ind = induced_category(k, assignment);
    SheafAction x = random_action(rng, ind.cat, 2);
    DescentResult d = descend_action(ind.cat, k, ind.proj, x);
    PulledBackAction pb = pullback_action(ind.cat, k, ind.proj, d.descended);
    if (!find_action_iso(ind.cat, x, pb.action)) {
      detail = "descend-then-pullback witness missing at trial " +
               std::to_string(done);
      return false;
    }
    SheafAction y = random_action(rng, k, 2);
    PulledBackAction pb2 = pullback_action(ind.cat, k, ind.proj, y);
    DescentResult d2 = descend_action(ind.cat, k, ind.proj, pb2.action);
    if (!find_action_iso(k, y, d2.descended)) {
      detail = "pullback-then-descend witness missing at trial " +
               std::to_string(done);
      return false;
    }
    ++done;
  }
  return true;
}

bool criterion_two_cells(std::string& detail) {
  std::mt19937 rng(987);
  int done = 0;
  for (int trial = 0; trial < 2000 && done < 50; ++trial) {
    FiniteCategory k = random_category(rng, 3);
    FiniteCategory h = random_category(rng, 2);
    std::uniform_int_distribution<int> dom_d(h.n_obj, h.n_obj + 1);
    auto asg1 = random_surjection(rng, dom_d(rng), h.n_obj);
    auto asg2 = random_surjection(rng, dom_d(rng), h.n_obj);
    InducedCategory m1 = induced_category(h, asg1);
    InducedCategory m2 = induced_category(h, asg2);
    auto fs = enumerate_functors(m1.cat, k);
    auto gs = enumerate_functors(m2.cat, k);
    if (fs.empty() || gs.empty()) continue;
    Anafunctor f{m1.cat, m1.proj, fs[rng() % fs.size()]};
    Anafunctor g{m2.cat, m2.proj, gs[rng() % gs.size()]};
    SpanPullback sp = span_pullback(h, k, f, g);
    if (sp.pb.cat.n_obj == 0) continue;
    std::uniform_int_distribution<int> cover_d(sp.pb.cat.n_obj,
                                               sp.pb.cat.n_obj + 1);
    auto cover = random_surjection(rng, cover_d(rng), sp.pb.cat.n_obj);
    InducedCategory sig = induced_category(sp.pb.cat, cover);
    InternalFunctor left3 = compose_functors(sig.proj, sp.left_to_cod);
    InternalFunctor right3 = compose_functors(sig.proj, sp.right_to_cod);
    auto taus = enumerate_transformations(sig.cat, k, left3, right3);
    if (taus.empty()) continue;
    const auto& tau = taus[rng() % taus.size()];
    auto res = two_cell_canonical(h, k, f, g, sig.cat, sig.proj, tau);
    if (!res.ok) {
      detail = "canonical representative not found at instance " +
               std::to_string(done);
      return false;
    }
    int found = 0;
    for (const auto& cand : enumerate_transformations(
             sp.pb.cat, k, sp.left_to_cod, sp.right_to_cod)) {
      bool factors = true;
      for (int y = 0; y < sig.cat.n_obj; ++y)
        if (cand.at[sig.proj.obj[y]] != tau.at[y]) factors = false;
      if (factors && !(cand.at == res.canonical.at)) {
        detail = "representative not unique at instance " +
                 std::to_string(done);
        return false;
      }
      if (factors) ++found;
    }
    if (found != 1) {
      detail = "expected exactly one representative, found " +
               std::to_string(found);
      return false;
    }
    ++done;
  }
  if (done != 50) {
    detail = "only assembled " + std::to_string(done) + " instances";
    return false;
  }
  return true;
}

bool criterion_zeta(std::string& detail) {
  struct KCase {
    std::string name;
    FiniteCategory cat;
    bool groupoid;
  };
  std::vector<KCase> cases = {
      {"terminal", terminal_category(), true},
      {"codiscrete2", codiscrete_groupoid(2), true},
      {"free-arrow", free_arrow_category(), false},
  };
  for (const auto& entry : corpus()) {
    ClassifierBundle b = gen_classifier(entry.theory, ParameterSet::numeric(2));
    for (const auto& kc : cases) {
      ZetaReport rep = verify_zeta(b, kc.cat, false);
      if (!rep.all_pass()) {
        detail = entry.label + "/" + kc.name;
        for (const auto& e : rep.entries)
          if (!e.pass) detail += ": " + e.check + " " + e.detail;
        return false;
      }
      if (kc.groupoid) {
        ZetaReport core_rep = verify_zeta(b, kc.cat, true);
        if (!core_rep.all_pass()) {
          detail = entry.label + "/" + kc.name + " (core)";
          return false;
        }
      }
    }
  }
  return true;
}

bool criterion_product(std::string& detail) {
  Theory o = parse_theory(kTheoryO);
  Theory u = disjoint_union(o, o);
  ParameterSet p = ParameterSet::numeric(2);
  ClassifierBundle bu = gen_classifier(u, p);
  auto models_o = enumerate_models(o, 2);

  auto pts = enumerate_points(*bu.g0);
  if (pts.size() != 25) {
    detail = "object points: " + std::to_string(pts.size());
    return false;
  }
  std::set<std::pair<int, int>> pairs;
  for (const auto& pt : pts) {
    PerModel m = decode_object_point(u, p, *bu.g0, pt);
    PerModel first, second;
    first.np = second.np = 2;
    first.per = {m.per[0]};
    second.per = {m.per[1]};
    int a = model_index(models_o, first), b = model_index(models_o, second);
    if (a < 0 || b < 0) {
      detail = "component model missing";
      return false;
    }
    pairs.insert({a, b});
  }
  if (pairs.size() != 25) {
    detail = "object pairing not bijective";
    return false;
  }

  auto arr = enumerate_points(*bu.arrows.g1);
  if (arr.size() != 27 * 27) {
    detail = "hom points: " + std::to_string(arr.size());
    return false;
  }
  std::set<std::tuple<int, int, ModelHom, int, int, ModelHom>> seen;
  for (const auto& pt : arr) {
    DecodedArrow d = decode_arrow_point(bu, pt);
    PerModel d1, d2, c1, c2;
    d1.np = d2.np = c1.np = c2.np = 2;
    d1.per = {d.dom.per[0]};
    d2.per = {d.dom.per[1]};
    c1.per = {d.cod.per[0]};
    c2.per = {d.cod.per[1]};
    ModelHom h1{{d.hom.map[0]}}, h2{{d.hom.map[1]}};
    seen.insert({model_index(models_o, d1), model_index(models_o, c1), h1,
                 model_index(models_o, d2), model_index(models_o, c2), h2});
  }
  if (seen.size() != 27 * 27) {
    detail = "hom pairing not bijective";
    return false;
  }
  return true;
}

}  // namespace

int main() {
  Harness h;
  h.run(1, "Sierpinski locale has exactly the two truth-value points", 1.0,
        criterion_sierpinski);
  h.run(2, "canonical presentations have singleton points for |X| <= 4", 1.0,
        criterion_canonical);
  h.run(3, "expanded presentations preserve points on 50 seeded spans", 10.0,
        criterion_expansion);
  h.run(4, "forcing locale points are the partial surjections up to size 4",
        5.0, criterion_forcing);
  h.run(5, "point bijections I-IV across the corpus (5/27/12/5 at O@2)", 30.0,
        criterion_bijections);
  h.run(6, "structure maps verify and point categories satisfy the laws",
        30.0, criterion_structure);
  h.run(7, "generic model is sound and coherent in both orientations", 30.0,
        criterion_soundness);
  h.run(8, "interpretation commutes with base change on 100 seeded triples",
        30.0, criterion_base_change);
  h.run(9, "descent round-trips produce isomorphism witnesses both ways",
        60.0, criterion_descent);
  h.run(10, "two-cells have unique canonical representatives on 50 instances",
        30.0, criterion_two_cells);
  h.run(11, "zeta is full, faithful and essentially surjective on the corpus",
        120.0, criterion_zeta);
  h.run(12, "the classifier of a disjoint union is the product of classifiers",
        30.0, criterion_product);
  std::printf("ACCEPTANCE: %d/%d criteria passed\n", h.passed,
              h.passed + h.failed);
  return h.failed == 0 ? 0 : 1;
}
