#include <doctest.h>

#include <random>

#include "framecat/oracle.hpp"

using namespace framecat;

namespace {

const char* kObjects = "theory O { sort X }";
const char* kInhabited = "theory I { sort X; axiom []: |- exists x:X. true; }";
const char* kGraph = "theory G { sort V; rel E(V,V); }";

}  // namespace

TEST_CASE("model enumeration counts") {
  Theory o = parse_theory(kObjects);
  CHECK(enumerate_models(o, 0).size() == 1);   // only the empty model
  CHECK(enumerate_models(o, 1).size() == 2);   // empty and singleton
  CHECK(enumerate_models(o, 2).size() == 5);   // the five PERs on a 2-set

  Theory i = parse_theory(kInhabited);
  CHECK(enumerate_models(i, 2).size() == 4);   // empty model excluded
  CHECK(enumerate_models(i, 1).size() == 1);

  // Models are canonically ordered and duplicate-free.
  auto models = enumerate_models(o, 2);
  for (std::size_t k = 1; k < models.size(); ++k)
    CHECK(models[k - 1] < models[k]);
}

TEST_CASE("formula interpretation is the recursive set semantics") {
  Theory g = parse_theory(kGraph);
  // A concrete graph on three classes of a 3-element parameter set.
  PerModel m;
  m.np = 3;
  m.per.assign(1, std::vector<bool>(9, false));
  for (int i = 0; i < 3; ++i) m.per[0][i * 3 + i] = true;
  m.rel.assign(1, {});
  m.rel[0].insert({0, 1});
  m.rel[0].insert({1, 2});

  std::vector<TypedVar> ctx{{"x", "V"}, {"y", "V"}};
  auto eq = interpret_formula(g, m, ctx, Formula::make_eq("V", "x", "y"));
  CHECK(eq == std::set<std::vector<int>>{{0, 0}, {1, 1}, {2, 2}});

  auto none = interpret_formula(g, m, ctx, Formula::make_false());
  CHECK(none.empty());

  std::vector<TypedVar> ctx1{{"x", "V"}};
  auto dom = interpret_formula(
      g, m, ctx1,
      Formula::make_exists("y", "V", Formula::make_rel("E", {"x", "y"})));
  CHECK(dom == std::set<std::vector<int>>{{0}, {1}});
}

TEST_CASE("hom and iso counts over the object classifier") {
  Theory o = parse_theory(kObjects);
  auto models = enumerate_models(o, 2);
  REQUIRE(models.size() == 5);
  int homs = 0, isos = 0;
  for (const auto& m : models)
    for (const auto& n : models) {
      homs += static_cast<int>(enumerate_homs(o, m, n).size());
      isos += static_cast<int>(enumerate_isos(o, m, n).size());
    }
  CHECK(homs == 27);
  CHECK(isos == 12);

  // Singleton model: one endo-hom, which is an iso.
  PerModel single;
  single.np = 2;
  single.per.assign(1, std::vector<bool>(4, false));
  single.per[0][0] = true;
  single.rel.clear();
  CHECK(enumerate_homs(o, single, single).size() == 1);
  CHECK(enumerate_isos(o, single, single).size() == 1);
}

TEST_CASE("homs out of and into empty carriers") {
  Theory o = parse_theory(kObjects);
  PerModel empty;
  empty.np = 1;
  empty.per.assign(1, std::vector<bool>(1, false));
  PerModel point = empty;
  point.per[0][0] = true;
  CHECK(enumerate_homs(o, empty, point).size() == 1);   // unique empty map
  CHECK(enumerate_homs(o, point, empty).empty());       // nothing to map into
}

TEST_CASE("graph homs preserve edges") {
  Theory g = parse_theory(kGraph);
  auto models = enumerate_models(g, 2);
  for (const auto& m : models)
    for (const auto& n : models)
      for (const auto& h : enumerate_homs(g, m, n))
        CHECK(is_model_hom(g, m, n, h));
}

TEST_CASE("bundle models over the terminal category") {
  Theory g = parse_theory(kGraph);
  FiniteCategory pt = terminal_category();
  BundleModel m = set_model(g, {2}, {{{0, 1}}});
  CHECK_FALSE(check_bundle_model(g, pt, m).has_value());

  // Violating stability is impossible over 1; violating an axiom is not.
  Theory sym = parse_theory(
      "theory S { sort V; rel E(V,V); axiom [x:V,y:V]: E(x,y) |- E(y,x); }");
  auto v = check_bundle_model(sym, pt, m);
  REQUIRE(v.has_value());
  CHECK(v->reason == "axiom");
}

TEST_CASE("per models embed as set models over the point") {
  Theory g = parse_theory(kGraph);
  FiniteCategory pt = terminal_category();
  for (const auto& m : enumerate_models(g, 2)) {
    BundleModel b = per_to_set_model(g, m);
    CHECK_FALSE(check_bundle_model(g, pt, b).has_value());
  }
}

namespace {

FiniteCategory chain_category() {
  // 0 -> 1 with identities; the walking arrow.
  return free_arrow_category();
}

BundleModel random_bundle_model(std::mt19937& rng, const Theory& theory,
                                const FiniteCategory& cat, int max_fiber) {
  auto all = enumerate_bundle_models(theory, cat, max_fiber);
  return all[rng() % all.size()];
}

}  // namespace

TEST_CASE("base change and transformation actions") {
  Theory g = parse_theory(kGraph);
  std::mt19937 rng(606);

  SUBCASE("base change along the identity is the identity") {
    FiniteCategory k = codiscrete_groupoid(2);
    BundleModel m = random_bundle_model(rng, g, k, 2);
    BasedChangeResult r = base_change(g, k, k, identity_functor(k), m);
    CHECK_FALSE(check_bundle_model(g, k, r.model).has_value());
    CHECK(r.model.sorts[0].n_elem == m.sorts[0].n_elem);
    CHECK(r.model.rel[0].size() == m.rel[0].size());
  }

  SUBCASE("identity transformation acts as the identity hom") {
    FiniteCategory k = codiscrete_groupoid(2);
    BundleModel m = random_bundle_model(rng, g, k, 2);
    InternalTransformation id;
    id.at.resize(k.n_obj);
    for (int x = 0; x < k.n_obj; ++x) id.at[x] = k.ident[x];
    auto maps = transformation_action(g, k, k, identity_functor(k),
                                      identity_functor(k), id, m);
    for (const auto& sort_map : maps)
      for (std::size_t i = 0; i < sort_map.size(); ++i)
        CHECK(sort_map[i] == static_cast<int>(i));
  }

  SUBCASE("interpretation commutes with base change on seeded triples") {
    // Pulling back then interpreting equals interpreting
    // then pulling back, on random functors, models and formulas.
    std::vector<FormulaPtr> formulas = {
        Formula::make_rel("E", {"x", "y"}),
        Formula::make_eq("V", "x", "y"),
        Formula::make_or({Formula::make_rel("E", {"x", "y"}),
                          Formula::make_eq("V", "x", "y")}),
        Formula::make_exists("z", "V",
                             Formula::make_and(
                                 {Formula::make_rel("E", {"x", "z"}),
                                  Formula::make_rel("E", {"z", "y"})})),
    };
    std::vector<TypedVar> ctx{{"x", "V"}, {"y", "V"}};
    int done = 0;
    for (int trial = 0; trial < 300 && done < 100; ++trial) {
      FiniteCategory k = rng() % 2 ? codiscrete_groupoid(2) : chain_category();
      FiniteCategory h = rng() % 2 ? terminal_category() : chain_category();
      auto functors = enumerate_functors(h, k);
      if (functors.empty()) continue;
      const auto& f = functors[rng() % functors.size()];
      BundleModel m = random_bundle_model(rng, g, k, 2);
      const auto& phi = formulas[rng() % formulas.size()];

      BasedChangeResult pulled = base_change(g, h, k, f, m);
      auto direct = interpret_formula_bundle(g, h, pulled.model, ctx, phi);
      auto upstairs = interpret_formula_bundle(g, k, m, ctx, phi);
      // Transport the upstairs interpretation through the element pairing.
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
            if (it == index.end()) { ok = false; break; }
            img.push_back(it->second);
          }
          if (ok) transported.insert(img);
        }
      CAPTURE(trial);
      CHECK(direct == transported);
      ++done;
    }
    CHECK(done == 100);
  }
}

TEST_CASE("bundle model isomorphism search") {
  Theory g = parse_theory(kGraph);
  FiniteCategory k = codiscrete_groupoid(2);
  std::mt19937 rng(99);
  BundleModel m = random_bundle_model(rng, g, k, 2);
  auto id_iso = find_bundle_model_iso(g, k, m, m);
  REQUIRE(id_iso.has_value());
  CHECK(is_bundle_model_hom(g, k, m, m, *id_iso));
}

TEST_CASE("base change is functorial up to isomorphism") {
  Theory g = parse_theory(kGraph);
  std::mt19937 rng(2024);
  int done = 0;
  while (done < 30) {
    FiniteCategory k = rng() % 2 ? codiscrete_groupoid(2) : chain_category();
    FiniteCategory mid = rng() % 2 ? terminal_category() : chain_category();
    FiniteCategory h = rng() % 2 ? terminal_category() : chain_category();
    auto fs = enumerate_functors(h, mid);
    auto gs = enumerate_functors(mid, k);
    if (fs.empty() || gs.empty()) continue;
    const auto& f = fs[rng() % fs.size()];
    const auto& psi = gs[rng() % gs.size()];
    BundleModel m = random_bundle_model(rng, g, k, 2);

    BasedChangeResult once =
        base_change(g, h, k, compose_functors(f, psi), m);
    BasedChangeResult stepwise =
        base_change(g, h, mid, f, base_change(g, mid, k, psi, m).model);
    auto iso = find_bundle_model_iso(g, h, once.model, stepwise.model);
    CAPTURE(done);
    REQUIRE(iso.has_value());
    ++done;
  }
}
