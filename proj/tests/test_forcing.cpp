#include <doctest.h>

#include <set>

#include "support.hpp"

using namespace framecat;
using namespace framecat::testsupport;

namespace {

std::vector<std::string> tokens(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

long surjections(int d, int x) {
  // Inclusion-exclusion count of surjections from a d-set onto an x-set.
  long total = 0;
  for (int j = 0; j <= x; ++j) {
    long term = binomial(x, j);
    long pw = 1;
    for (int i = 0; i < d; ++i) pw *= (x - j);
    total += (j % 2 ? -term : term) * pw;
  }
  return total;
}

long partial_surjections(int m, int x) {
  long total = 0;
  for (int d = 0; d <= m; ++d) total += binomial(m, d) * surjections(d, x);
  return total;
}

}  // namespace

TEST_CASE("forcing presentation points are the partial surjections") {
  SUBCASE("two-element source onto two targets leaves the two bijections") {
    auto locale = gen_forcing_presentation(tokens("n", 2), {"a", "b"});
    CHECK(enumerate_points(locale.pres).size() == 2);
  }

  SUBCASE("empty target admits exactly the empty map") {
    auto locale = gen_forcing_presentation(tokens("n", 2), {});
    CHECK(enumerate_points(locale.pres).size() == 1);
  }

  SUBCASE("two sources onto one target give the three inhabited domains") {
    auto locale = gen_forcing_presentation(tokens("n", 2), {"a"});
    CHECK(enumerate_points(locale.pres).size() == 3);
  }

  SUBCASE("counts match the combinatorial oracle up to size four") {
    for (int m = 0; m <= 4; ++m)
      for (int x = 0; x <= 4; ++x) {
        auto locale = gen_forcing_presentation(tokens("n", m), tokens("x", x));
        CAPTURE(m);
        CAPTURE(x);
        CHECK(enumerate_points(locale.pres).size() ==
              static_cast<std::size_t>(partial_surjections(m, x)));
      }
  }
}

TEST_CASE("basis opens are the extendable finite partial functions") {
  auto locale = gen_forcing_presentation(tokens("n", 3), {"a", "b"});
  auto g = [&](int n, int x) { return locale.graph_gen(n, x); };

  CHECK(basis_open_check(locale, MeetTerm::of({g(0, 0)})));
  CHECK_FALSE(basis_open_check(locale, MeetTerm::of({g(0, 0), g(0, 1)})));
  CHECK(basis_open_check(locale, MeetTerm::top()));

  // The two routes agree on every small meet for |M|, |X| <= 3.
  for (int m = 0; m <= 3; ++m)
    for (int x = 0; x <= 3; ++x) {
      auto loc = gen_forcing_presentation(tokens("n", m), tokens("x", x));
      int n_gens = loc.pres.size();
      std::vector<MeetTerm> meets{MeetTerm::top()};
      for (int i = 0; i < n_gens; ++i) {
        meets.push_back(MeetTerm::of({i}));
        for (int j = i + 1; j < n_gens; ++j) {
          meets.push_back(MeetTerm::of({i, j}));
          for (int k = j + 1; k < n_gens; ++k)
            meets.push_back(MeetTerm::of({i, j, k}));
        }
      }
      for (const auto& meet : meets) {
        CAPTURE(m);
        CAPTURE(x);
        CHECK_NOTHROW(basis_open_check(loc, meet));
      }
    }
}

TEST_CASE("representing anafunctor over the terminal category") {
  Theory o = parse_theory(kTheoryO);
  ParameterSet p = ParameterSet::numeric(2);
  ClassifierBundle b = gen_classifier(o, p);
  PointCategory pc = point_category(b, false);
  FiniteCategory one = terminal_category();

  SUBCASE("a two-element model yields the two bijection objects") {
    BundleModel m = set_model(o, {2}, {});
    RepresentingAnafunctor anaf =
        build_representing_anafunctor(b, pc, one, m);
    CHECK(anaf.mid.n_obj == 2);
    CHECK(is_fully_faithful(anaf.mid, one, anaf.left));
    CHECK(is_surjective_on_objects(anaf.mid, one, anaf.left));
    CHECK(is_functor(anaf.mid, pc.cat, anaf.right));
    // Both objects land on the discrete two-class model point.
    for (int obj : anaf.right.obj) {
      PerModel dec =
          decode_object_point(o, p, *b.g0, pc.objects[obj]);
      CHECK(dec.class_count(0) == 2);
    }
  }

  SUBCASE("the empty model gives the base itself") {
    BundleModel m = set_model(o, {0}, {});
    RepresentingAnafunctor anaf =
        build_representing_anafunctor(b, pc, one, m);
    CHECK(anaf.mid.n_obj == 1);  // the unique empty partial surjection
    CHECK(anaf.mid.n_arr == 1);
  }

  SUBCASE("a fiber larger than the parameter set is rejected") {
    BundleModel m = set_model(o, {3}, {});
    CHECK_THROWS_AS(build_representing_anafunctor(b, pc, one, m),
                    ForcingError);
  }

  SUBCASE("the object map satisfies the worked-example frame hom") {
    Theory g = parse_theory(kTheoryGraphSym);
    ClassifierBundle bg = gen_classifier(g, p);
    PointCategory pcg = point_category(bg, false);
    BundleModel m = set_model(g, {2}, {{{0, 1}, {1, 0}}});
    RepresentingAnafunctor anaf =
        build_representing_anafunctor(bg, pcg, one, m);
    // [n ~ m] -> \/_x [f(n)=x] & [f(m)=x];
    // [(n1,n2) in E] -> \/_{(x1,x2) in E^M} [f(n1)=x1] & [f(n2)=x2].
    auto g0 = bg.g0;
    auto target = std::make_shared<Presentation>(anaf.forcing.pres);
    FrameHomSpec hom = make_hom_by_id(
        g0, target, [&](const Presentation& t, const Generator& gen) {
          if (gen.tags.at("kind") == "sim") {
            Dnf acc = Dnf::bottom();
            for (int x = 0; x < 2; ++x)
              acc = acc.join(Dnf::single(MeetTerm::of(
                  {t.gen(anaf.forcing.f_id("V", gen.tags.at("p"), x)),
                   t.gen(anaf.forcing.f_id("V", gen.tags.at("q"), x))})));
            return acc;
          }
          std::string n1 = gen.tags.at("args").substr(0, 1);
          std::string n2 = gen.tags.at("args").substr(2, 1);
          Dnf acc = Dnf::bottom();
          for (const auto& t2 : m.rel[0])
            acc = acc.join(Dnf::single(MeetTerm::of(
                {t.gen(anaf.forcing.f_id("V", n1, t2[0])),
                 t.gen(anaf.forcing.f_id("V", n2, t2[1]))})));
          return acc;
        });
    REQUIRE(check_frame_hom(hom).ok);
    for (int o2 = 0; o2 < anaf.mid.n_obj; ++o2) {
      Point via_hom = point_pushforward(hom, anaf.mid_objects[o2]);
      CHECK(via_hom == pcg.objects[anaf.right.obj[o2]]);
    }
  }
}

TEST_CASE("pullback isomorphism over the terminal base") {
  Theory o = parse_theory(kTheoryO);
  ParameterSet p = ParameterSet::numeric(2);
  ClassifierBundle b = gen_classifier(o, p);
  PointCategory pc = point_category(b, false);
  FiniteCategory one = terminal_category();
  for (int size = 0; size <= 2; ++size) {
    BundleModel m = set_model(o, {size}, {});
    RepresentingAnafunctor anaf =
        build_representing_anafunctor(b, pc, one, m);
    PullbackIsoWitness w = verify_pullback_iso(b, pc, one, m, anaf);
    CAPTURE(size);
    CHECK(w.ok);
  }
}

TEST_CASE("zeta over the terminal category for the object theory") {
  Theory o = parse_theory(kTheoryO);
  ClassifierBundle b = gen_classifier(o, ParameterSet::numeric(2));
  FiniteCategory one = terminal_category();

  ZetaReport rep = verify_zeta(b, one);
  for (const auto& e : rep.entries) {
    CAPTURE(e.check);
    CAPTURE(e.detail);
    CHECK(e.pass);
  }
  // 25 functor pairs; the abstract bundle models over 1 are the three
  // carrier sizes.
  bool saw_ff = false, saw_es = false;
  for (const auto& e : rep.entries) {
    if (e.check == "zeta-fully-faithful") {
      saw_ff = true;
      CHECK(e.detail == "25 functor pairs");
    }
    if (e.check == "zeta-essentially-surjective") {
      saw_es = true;
      CHECK(e.detail == "3/3 models recovered");
    }
  }
  CHECK(saw_ff);
  CHECK(saw_es);

  // The five subquotient-presented set models are each recovered as well.
  PointCategory pc = point_category(b, false);
  BundleModel e = generic_as_bundle_model(generic_point_model(b, pc));
  int recovered = 0;
  for (const auto& m : enumerate_models(o, 2))
    if (zeta_recovers(b, pc, e, one, per_to_set_model(o, m))) ++recovered;
  CHECK(recovered == 5);
}

TEST_CASE("endotransformations match endomorphisms of the pulled-back model") {
  Theory o = parse_theory(kTheoryO);
  ClassifierBundle b = gen_classifier(o, ParameterSet::numeric(2));
  PointCategory pc = point_category(b, false);
  GenericPointModel gm = generic_point_model(b, pc);
  BundleModel e = generic_as_bundle_model(gm);
  FiniteCategory one = terminal_category();
  for (const auto& f : enumerate_functors(one, pc.cat)) {
    auto transformations = enumerate_transformations(one, pc.cat, f, f);
    BasedChangeResult m = base_change(o, one, pc.cat, f, e);
    auto homs = enumerate_bundle_model_homs(o, one, m.model, m.model);
    CHECK(transformations.size() == homs.size());
  }
}

TEST_CASE("zeta core variant over the terminal category") {
  Theory o = parse_theory(kTheoryO);
  ClassifierBundle b = gen_classifier(o, ParameterSet::numeric(2));
  ZetaReport rep = verify_zeta(b, terminal_category(), true);
  for (const auto& e : rep.entries) {
    CAPTURE(e.check);
    CAPTURE(e.detail);
    CHECK(e.pass);
  }
}

TEST_CASE("the explicit pullback isomorphism pair verifies as frame homs") {
  // For a two-element set model of the theory of objects at |P| = 2:
  // E' is the forcing locale glued with the generic bundle fiber, E'' the
  // forcing locale glued with the canonical presentation of the carrier.
  Theory o = parse_theory(kTheoryO);
  ParameterSet p = ParameterSet::numeric(2);
  ClassifierBundle b = gen_classifier(o, p);
  const std::vector<std::string> xs{"a", "b"};

  // E'': generators [=x] and [f(n)=x], canonical + forcing relations.
  auto e2 = std::make_shared<Presentation>();
  for (const auto& x : xs)
    e2->add_generator("eq:" + x, "[=" + x + "]", {{"kind", "eq"}});
  for (const auto& n : p.tokens)
    for (const auto& x : xs)
      e2->add_generator("f:" + n + ":" + x, "[f(" + n + ")=" + x + "]",
                        {{"kind", "f"}});
  e2->add_relation(Sequent{
      MeetTerm::of({e2->gen("eq:a"), e2->gen("eq:b")}), Dnf::bottom(), ""});
  e2->add_relation(Sequent{
      MeetTerm::top(),
      Dnf::gen(e2->gen("eq:a")).join(Dnf::gen(e2->gen("eq:b"))), ""});
  for (const auto& n : p.tokens)
    e2->add_relation(
        Sequent{MeetTerm::of({e2->gen("f:" + n + ":a"), e2->gen("f:" + n + ":b")}),
                Dnf::bottom(), ""});
  for (const auto& x : xs) {
    Dnf hit;
    for (const auto& n : p.tokens)
      hit.terms.push_back(MeetTerm::single(e2->gen("f:" + n + ":" + x)));
    hit.normalize();
    e2->add_relation(Sequent{MeetTerm::top(), hit, ""});
  }

  // E': the bundle fiber E_X plus the forcing generators, with the model
  // part identified with the graph of the forced surjection.
  auto e1 = std::make_shared<Presentation>(*b.per_sort[0].eA);
  for (const auto& n : p.tokens)
    for (const auto& x : xs)
      e1->add_generator("f:" + n + ":" + x, "[f(" + n + ")=" + x + "]",
                        {{"kind", "f"}});
  for (const auto& n : p.tokens)
    e1->add_relation(
        Sequent{MeetTerm::of({e1->gen("f:" + n + ":a"), e1->gen("f:" + n + ":b")}),
                Dnf::bottom(), ""});
  for (const auto& x : xs) {
    Dnf hit;
    for (const auto& n : p.tokens)
      hit.terms.push_back(MeetTerm::single(e1->gen("f:" + n + ":" + x)));
    hit.normalize();
    e1->add_relation(Sequent{MeetTerm::top(), hit, ""});
  }
  auto glue = [&](const std::string& n, const std::string& m2) {
    Dnf agree = Dnf::bottom();
    for (const auto& x : xs)
      agree = agree.join(Dnf::single(MeetTerm::of(
          {e1->gen("f:" + n + ":" + x), e1->gen("f:" + m2 + ":" + x)})));
    GenId sim = e1->gen(sim_id("X", n, m2));
    e1->add_relation(Sequent{MeetTerm::single(sim), agree, ""});
    for (const auto& t : agree.terms)
      e1->add_relation(Sequent{t, Dnf::gen(sim), ""});
  };
  for (const auto& n : p.tokens)
    for (const auto& m2 : p.tokens) glue(n, m2);

  // [=x] |-> \/_n [f(n)=x] & [== n]; [f(n)=x] |-> [f(n)=x].
  FrameHomSpec fwd = make_hom_by_id(
      e2, e1, [&](const Presentation& t, const Generator& gen) {
        if (gen.tags.at("kind") == "f") return Dnf::gen(t.gen(gen.id));
        std::string x = gen.id.substr(3);
        Dnf acc = Dnf::bottom();
        for (const auto& n : p.tokens)
          acc = acc.join(Dnf::single(MeetTerm::of(
              {t.gen("f:" + n + ":" + x), t.gen(equiv_id("X", 1, n))})));
        return acc;
      });
  // [== n] |-> \/_x [f(n)=x] & [=x]; the model part is forced through the
  // graph of the surjection.
  FrameHomSpec bwd = make_hom_by_id(
      e1, e2, [&](const Presentation& t, const Generator& gen) {
        const std::string& kind = gen.tags.at("kind");
        if (kind == "f") return Dnf::gen(t.gen(gen.id));
        if (kind == "equiv") {
          Dnf acc = Dnf::bottom();
          for (const auto& x : xs)
            acc = acc.join(Dnf::single(MeetTerm::of(
                {t.gen("f:" + gen.tags.at("p") + ":" + x), t.gen("eq:" + x)})));
          return acc;
        }
        // [n ~ m] |-> \/_x [f(n)=x] & [f(m)=x]
        Dnf acc = Dnf::bottom();
        for (const auto& x : xs)
          acc = acc.join(Dnf::single(MeetTerm::of(
              {t.gen("f:" + gen.tags.at("p") + ":" + x),
               t.gen("f:" + gen.tags.at("q") + ":" + x)})));
        return acc;
      });
  CHECK(check_frame_hom(fwd).ok);
  CHECK(check_frame_hom(bwd).ok);
  CHECK(iso_check(fwd, bwd));
}
