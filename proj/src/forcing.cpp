#include "framecat/forcing.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace framecat {

PartialSurjectionLocale gen_forcing_presentation(
    std::vector<std::string> source, std::vector<std::string> target) {
  PartialSurjectionLocale out;
  out.source = std::move(source);
  out.target = std::move(target);
  for (const auto& n : out.source)
    for (const auto& x : out.target)
      out.pres.add_generator("f:" + n + ":" + x, "[f(" + n + ")=" + x + "]",
                             {{"kind", "f"}, {"n", n}, {"x", x}});
  int nx = static_cast<int>(out.target.size());
  for (int n = 0; n < static_cast<int>(out.source.size()); ++n)
    for (int x = 0; x < nx; ++x)
      for (int y = x + 1; y < nx; ++y)
        out.pres.add_relation(
            Sequent{MeetTerm::of({out.graph_gen(n, x), out.graph_gen(n, y)}),
                    Dnf::bottom(), "functionality"});
  for (int x = 0; x < nx; ++x) {
    Dnf hit;
    for (int n = 0; n < static_cast<int>(out.source.size()); ++n)
      hit.terms.push_back(MeetTerm::single(out.graph_gen(n, x)));
    hit.normalize();
    out.pres.add_relation(Sequent{MeetTerm::top(), hit, "surjectivity"});
  }
  return out;
}

bool basis_open_check(const PartialSurjectionLocale& locale,
                      const MeetTerm& meet) {
  int nx = static_cast<int>(locale.target.size());
  // Route one: the meet encodes a partial function with enough spare
  // capacity to extend to a partial surjection.
  std::map<int, int> graph;
  bool single_valued = true;
  for (GenId g : meet.gens) {
    int n = g / std::max(nx, 1);
    int x = g % std::max(nx, 1);
    auto it = graph.find(n);
    if (it != graph.end() && it->second != x) single_valued = false;
    graph[n] = x;
  }
  bool combinatorial = false;
  if (single_valued) {
    std::set<int> hit;
    for (auto [n, x] : graph) hit.insert(x);
    int spare = static_cast<int>(locale.source.size() - graph.size());
    int missing = nx - static_cast<int>(hit.size());
    combinatorial = spare >= missing;
  }
  // Route two: some point satisfies the meet.
  bool satisfiable = !entails(locale.pres, Sequent{meet, Dnf::bottom(), ""});
  if (combinatorial != satisfiable)
    throw ForcingError("basis_open_check: the two routes disagree");
  return combinatorial;
}

// ---------------------------------------------------------------------------
// Fiberwise forcing

FiberwiseForcing gen_fiberwise_forcing(const Theory& theory,
                                       const ParameterSet& p,
                                       const FiniteCategory& h,
                                       const BundleModel& m) {
  FiberwiseForcing out;
  for (int o = 0; o < h.n_obj; ++o)
    out.pres.add_generator(out.at_id(o), "[=h" + std::to_string(o) + "]",
                           {{"kind", "at"}, {"h", std::to_string(o)}});
  for (std::size_t s = 0; s < theory.sig.sorts.size(); ++s)
    for (const auto& n : p.tokens)
      for (int x = 0; x < m.sorts[s].n_elem; ++x)
        out.pres.add_generator(
            out.f_id(theory.sig.sorts[s], n, x),
            "[f" + theory.sig.sorts[s] + "(" + n + ")=" + std::to_string(x) + "]",
            {{"kind", "f"},
             {"sort", theory.sig.sorts[s]},
             {"n", n},
             {"x", std::to_string(x)}});
  for (int o = 0; o < h.n_obj; ++o)
    for (int o2 = o + 1; o2 < h.n_obj; ++o2)
      out.pres.add_relation(
          Sequent{MeetTerm::of({out.pres.gen(out.at_id(o)),
                                out.pres.gen(out.at_id(o2))}),
                  Dnf::bottom(), "one-object"});
  {
    Dnf anywhere;
    for (int o = 0; o < h.n_obj; ++o)
      anywhere.terms.push_back(MeetTerm::single(out.pres.gen(out.at_id(o))));
    anywhere.normalize();
    out.pres.add_relation(Sequent{MeetTerm::top(), anywhere, "some-object"});
  }
  for (std::size_t s = 0; s < theory.sig.sorts.size(); ++s) {
    const auto& sort = theory.sig.sorts[s];
    for (const auto& n : p.tokens)
      for (int x = 0; x < m.sorts[s].n_elem; ++x)
        out.pres.add_relation(
            Sequent{MeetTerm::single(out.pres.gen(out.f_id(sort, n, x))),
                    Dnf::gen(out.pres.gen(out.at_id(m.sorts[s].p[x]))),
                    "fiber-coherence"});
    for (const auto& n : p.tokens)
      for (int x = 0; x < m.sorts[s].n_elem; ++x)
        for (int y = x + 1; y < m.sorts[s].n_elem; ++y)
          out.pres.add_relation(
              Sequent{MeetTerm::of({out.pres.gen(out.f_id(sort, n, x)),
                                    out.pres.gen(out.f_id(sort, n, y))}),
                      Dnf::bottom(), "functionality"});
    for (int x = 0; x < m.sorts[s].n_elem; ++x) {
      Dnf hit;
      for (const auto& n : p.tokens)
        hit.terms.push_back(
            MeetTerm::single(out.pres.gen(out.f_id(sort, n, x))));
      hit.normalize();
      out.pres.add_relation(
          Sequent{MeetTerm::single(out.pres.gen(out.at_id(m.sorts[s].p[x]))),
                  hit, "fiber-surjectivity"});
    }
  }
  return out;
}

namespace {

struct MidObject {
  int h = -1;
  // Per sort: parameter index -> element (or -1 when undefined).
  std::vector<std::vector<int>> sigma;
};

MidObject read_mid_object(const Theory& theory, const ParameterSet& p,
                          const FiberwiseForcing& forcing,
                          const FiniteCategory& h, const BundleModel& m,
                          const Point& pt) {
  MidObject out;
  for (int o = 0; o < h.n_obj; ++o)
    if (pt.get(forcing.pres.gen(forcing.at_id(o)))) out.h = o;
  out.sigma.resize(theory.sig.sorts.size());
  for (std::size_t s = 0; s < theory.sig.sorts.size(); ++s) {
    out.sigma[s].assign(p.size(), -1);
    for (int n = 0; n < p.size(); ++n)
      for (int x = 0; x < m.sorts[s].n_elem; ++x)
        if (pt.get(forcing.pres.gen(
                forcing.f_id(theory.sig.sorts[s], p.tokens[n], x))))
          out.sigma[s][n] = x;
  }
  return out;
}

Point object_point(const ClassifierBundle& bundle, const BundleModel& m,
                   const MidObject& o) {
  const Theory& theory = bundle.theory;
  const ParameterSet& p = bundle.params;
  const Presentation& g0 = *bundle.g0;
  Point pt(g0.size());
  for (int g = 0; g < g0.size(); ++g) {
    const Generator& gen = g0.generators[g];
    if (gen.tags.at("kind") == "sim") {
      int s = theory.sig.sort_index(gen.tags.at("sort"));
      int pi = -1, qi = -1;
      for (int i = 0; i < p.size(); ++i) {
        if (p.tokens[i] == gen.tags.at("p")) pi = i;
        if (p.tokens[i] == gen.tags.at("q")) qi = i;
      }
      int xp = o.sigma[s][pi], xq = o.sigma[s][qi];
      pt.set(g, xp >= 0 && xp == xq);
    } else {
      int r = theory.sig.rel_index(gen.tags.at("rel"));
      const auto& arity = theory.sig.relations[r].arity;
      // Parse the argument tokens back to parameter indices.
      std::vector<std::string> args;
      {
        std::string acc;
        for (char c : gen.tags.at("args")) {
          if (c == ',') { args.push_back(acc); acc.clear(); }
          else acc += c;
        }
        args.push_back(acc);
      }
      std::vector<int> elems;
      bool defined = true;
      for (std::size_t i = 0; i < args.size() && defined; ++i) {
        int ni = -1;
        for (int j = 0; j < p.size(); ++j)
          if (p.tokens[j] == args[i]) ni = j;
        int x = o.sigma[arity[i]][ni];
        if (x < 0) defined = false;
        else elems.push_back(x);
      }
      pt.set(g, defined && m.rel[r].count(elems) != 0);
    }
  }
  return pt;
}

Point arrow_point(const ClassifierBundle& bundle, const BundleModel& m,
                  const FiniteCategory& h, const MidObject& o1,
                  const MidObject& o2, int f, const Point& src_pt,
                  const Point& tgt_pt) {
  const Theory& theory = bundle.theory;
  const ParameterSet& p = bundle.params;
  const Presentation& g1 = *bundle.arrows.g1;
  const Presentation& g0 = *bundle.g0;
  (void)h;
  Point pt(g1.size());
  for (int g = 0; g < g1.size(); ++g) {
    const Generator& gen = g1.generators[g];
    if (gen.tags.count("base")) {
      GenId base = g0.gen(gen.tags.at("base"));
      pt.set(g, gen.tags.at("copy") == "1" ? src_pt.get(base)
                                           : tgt_pt.get(base));
      continue;
    }
    int s = theory.sig.sort_index(gen.tags.at("sort"));
    int pi = -1, qi = -1;
    for (int i = 0; i < p.size(); ++i) {
      if (p.tokens[i] == gen.tags.at("p")) pi = i;
      if (p.tokens[i] == gen.tags.at("q")) qi = i;
    }
    int xp = o1.sigma[s][pi], xq = o2.sigma[s][qi];
    pt.set(g, xp >= 0 && xq >= 0 && m.sorts[s].act[xp][f] == xq);
  }
  return pt;
}

int lookup_point(const std::vector<Point>& sorted, const Point& pt,
                 const char* what) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), pt);
  if (it == sorted.end() || !(*it == pt))
    throw ForcingError(std::string("representing anafunctor: ") + what +
                       " is not a point of the classifier");
  return static_cast<int>(it - sorted.begin());
}

}  // namespace

RepresentingAnafunctor build_representing_anafunctor(
    const ClassifierBundle& bundle, const PointCategory& pc,
    const FiniteCategory& h, const BundleModel& m, bool use_core) {
  const Theory& theory = bundle.theory;
  const ParameterSet& p = bundle.params;
  for (std::size_t s = 0; s < m.sorts.size(); ++s) {
    std::vector<int> fiber(h.n_obj, 0);
    for (int x = 0; x < m.sorts[s].n_elem; ++x) ++fiber[m.sorts[s].p[x]];
    for (int o = 0; o < h.n_obj; ++o)
      if (fiber[o] > p.size())
        throw ForcingError("fiber of sort " + theory.sig.sorts[s] +
                           " over object " + std::to_string(o) + " has " +
                           std::to_string(fiber[o]) +
                           " elements, exceeding the parameter set");
  }
  RepresentingAnafunctor out;
  out.forcing = gen_fiberwise_forcing(theory, p, h, m);
  out.mid_objects = enumerate_points(out.forcing.pres);

  std::vector<MidObject> objs;
  for (const auto& pt : out.mid_objects)
    objs.push_back(read_mid_object(theory, p, out.forcing, h, m, pt));

  int n_obj = static_cast<int>(objs.size());
  for (int a = 0; a < n_obj; ++a)
    for (int b = 0; b < n_obj; ++b)
      for (int f = 0; f < h.n_arr; ++f)
        if (h.src[f] == objs[a].h && h.tgt[f] == objs[b].h)
          out.mid_arrows.emplace_back(a, b, f);
  std::map<std::tuple<int, int, int>, int> arr_index;
  for (std::size_t i = 0; i < out.mid_arrows.size(); ++i)
    arr_index[out.mid_arrows[i]] = static_cast<int>(i);

  FiniteCategory& mid = out.mid;
  mid.n_obj = n_obj;
  mid.n_arr = static_cast<int>(out.mid_arrows.size());
  mid.src.resize(mid.n_arr);
  mid.tgt.resize(mid.n_arr);
  mid.ident.resize(mid.n_obj);
  mid.comp.assign(mid.n_arr, std::vector<int>(mid.n_arr, -1));
  for (int i = 0; i < mid.n_arr; ++i) {
    auto [a, b, f] = out.mid_arrows[i];
    mid.src[i] = a;
    mid.tgt[i] = b;
  }
  for (int a = 0; a < n_obj; ++a)
    mid.ident[a] = arr_index.at({a, a, h.ident[objs[a].h]});
  for (int i = 0; i < mid.n_arr; ++i)
    for (int j = 0; j < mid.n_arr; ++j) {
      auto [a, b, f] = out.mid_arrows[i];
      auto [b2, c, g] = out.mid_arrows[j];
      if (b != b2) continue;
      mid.comp[i][j] = arr_index.at({a, c, h.comp[f][g]});
    }
  if (h.has_inverse()) {
    mid.inv.resize(mid.n_arr);
    for (int i = 0; i < mid.n_arr; ++i) {
      auto [a, b, f] = out.mid_arrows[i];
      mid.inv[i] = arr_index.at({b, a, h.inv[f]});
    }
  }

  out.left.obj.resize(n_obj);
  for (int a = 0; a < n_obj; ++a) out.left.obj[a] = objs[a].h;
  out.left.arr.resize(mid.n_arr);
  for (int i = 0; i < mid.n_arr; ++i)
    out.left.arr[i] = std::get<2>(out.mid_arrows[i]);

  std::vector<Point> obj_pts;
  out.right.obj.resize(n_obj);
  for (int a = 0; a < n_obj; ++a) {
    obj_pts.push_back(object_point(bundle, m, objs[a]));
    out.right.obj[a] = lookup_point(pc.objects, obj_pts.back(), "object image");
  }
  out.right.arr.resize(mid.n_arr);
  for (int i = 0; i < mid.n_arr; ++i) {
    auto [a, b, f] = out.mid_arrows[i];
    Point pt = arrow_point(bundle, m, h, objs[a], objs[b], f, obj_pts[a],
                           obj_pts[b]);
    const Presentation& arr_pres =
        use_core ? *bundle.core.g1_core : *bundle.arrows.g1;
    for (const auto& rel : arr_pres.relations)
      if (!pt.satisfies(rel))
        throw ForcingError("arrow image violates " + rel.label);
    out.right.arr[i] = lookup_point(pc.arrows, pt, "arrow image");
  }
  return out;
}

BundleModel generic_as_bundle_model(const GenericPointModel& gm) {
  BundleModel m;
  m.sorts = gm.sorts;
  m.rel.resize(gm.rel.size());
  for (std::size_t r = 0; r < gm.rel.size(); ++r)
    for (const auto& t : gm.rel[r]) m.rel[r].insert(t);
  return m;
}

PullbackIsoWitness verify_pullback_iso(const ClassifierBundle& bundle,
                                       const PointCategory& pc,
                                       const FiniteCategory& h,
                                       const BundleModel& m,
                                       const RepresentingAnafunctor& anaf) {
  PullbackIsoWitness out;
  GenericPointModel gm = generic_point_model(bundle, pc);
  BundleModel e = generic_as_bundle_model(gm);
  BasedChangeResult e1 =
      base_change(bundle.theory, anaf.mid, pc.cat, anaf.right, e);
  BasedChangeResult e2 = base_change(bundle.theory, anaf.mid, h, anaf.left, m);
  auto iso =
      find_bundle_model_iso(bundle.theory, anaf.mid, e1.model, e2.model);
  if (!iso) {
    out.detail = "no fiberwise isomorphism found";
    return out;
  }
  out.ok = true;
  out.iso = *iso;
  return out;
}

BundleModel descend_bundle_model(const Theory& theory,
                                 const FiniteCategory& dom,
                                 const FiniteCategory& cod,
                                 const InternalFunctor& phi,
                                 const BundleModel& m) {
  BundleModel out;
  std::vector<std::vector<int>> class_of(m.sorts.size());
  for (std::size_t s = 0; s < m.sorts.size(); ++s) {
    DescentResult d = descend_action(dom, cod, phi, m.sorts[s]);
    out.sorts.push_back(d.descended);
    class_of[s] = d.class_of;
  }
  out.rel.resize(m.rel.size());
  for (std::size_t r = 0; r < m.rel.size(); ++r) {
    const auto& arity = theory.sig.relations[r].arity;
    for (const auto& t : m.rel[r]) {
      std::vector<int> img;
      for (std::size_t i = 0; i < t.size(); ++i)
        img.push_back(class_of[arity[i]][t[i]]);
      out.rel[r].insert(std::move(img));
    }
  }
  return out;
}

bool ZetaReport::all_pass() const {
  for (const auto& e : entries)
    if (!e.pass) return false;
  return true;
}

ZetaReport verify_zeta(const ClassifierBundle& bundle, const FiniteCategory& k,
                       bool use_core) {
  ZetaReport report;
  const Theory& theory = bundle.theory;
  PointCategory pc = point_category(bundle, use_core);
  GenericPointModel gm = generic_point_model(bundle, pc);
  BundleModel e = generic_as_bundle_model(gm);

  auto add = [&](const std::string& check, bool pass,
                 const std::string& detail) {
    report.entries.push_back(ZetaReport::Entry{check, pass, detail});
  };

  // (a) Full and faithful: transformations correspond to model homs.
  auto functors = enumerate_functors(k, pc.cat);
  int ff_failures = 0;
  for (std::size_t i = 0; i < functors.size(); ++i) {
    for (std::size_t j = 0; j < functors.size(); ++j) {
      auto transformations =
          enumerate_transformations(k, pc.cat, functors[i], functors[j]);
      BasedChangeResult mi = base_change(theory, k, pc.cat, functors[i], e);
      BasedChangeResult mj = base_change(theory, k, pc.cat, functors[j], e);
      auto homs = enumerate_bundle_model_homs(theory, k, mi.model, mj.model);
      if (use_core) {
        // Only invertible model maps correspond to groupoid 2-cells.
        std::vector<std::vector<std::vector<int>>> isos;
        for (const auto& f : homs) {
          bool bij = true;
          std::vector<std::vector<int>> inv(f.size());
          for (std::size_t s = 0; s < f.size() && bij; ++s) {
            inv[s].assign(mj.model.sorts[s].n_elem, -1);
            for (std::size_t x = 0; x < f[s].size(); ++x) {
              if (inv[s][f[s][x]] >= 0) { bij = false; break; }
              inv[s][f[s][x]] = static_cast<int>(x);
            }
            for (int y : inv[s])
              if (y < 0) bij = false;
          }
          if (bij && is_bundle_model_hom(theory, k, mj.model, mi.model, inv))
            isos.push_back(f);
        }
        homs = std::move(isos);
      }
      std::set<std::vector<std::vector<int>>> images;
      bool all_land = true;
      for (const auto& tr : transformations) {
        auto img = transformation_action(theory, k, pc.cat, functors[i],
                                         functors[j], tr, e);
        if (std::find(homs.begin(), homs.end(), img) == homs.end())
          all_land = false;
        images.insert(img);
      }
      bool faithful = images.size() == transformations.size();
      bool full = images.size() == homs.size();
      if (!(faithful && full && all_land)) {
        ++ff_failures;
        add("zeta-fully-faithful", false,
            "functor pair (" + std::to_string(i) + "," + std::to_string(j) +
                "): " + std::to_string(transformations.size()) +
                " transformations vs " + std::to_string(homs.size()) +
                " homs");
      }
    }
  }
  if (ff_failures == 0)
    add("zeta-fully-faithful", true,
        std::to_string(functors.size() * functors.size()) + " functor pairs");

  // (b) Essential surjectivity on bundle models with small fibers.
  auto models = enumerate_bundle_models(theory, k, bundle.params.size());
  int passes = 0;
  for (std::size_t idx = 0; idx < models.size(); ++idx) {
    std::string why;
    if (zeta_recovers(bundle, pc, e, k, models[idx], use_core, &why))
      ++passes;
    else
      add("zeta-essentially-surjective", false,
          "model " + std::to_string(idx) + ": " + why);
  }
  add("zeta-essentially-surjective", passes == static_cast<int>(models.size()),
      std::to_string(passes) + "/" + std::to_string(models.size()) +
          " models recovered");
  return report;
}

bool zeta_recovers(const ClassifierBundle& bundle, const PointCategory& pc,
                   const BundleModel& e, const FiniteCategory& k,
                   const BundleModel& m, bool use_core, std::string* detail) {
  const Theory& theory = bundle.theory;
  RepresentingAnafunctor anaf =
      build_representing_anafunctor(bundle, pc, k, m, use_core);
  PullbackIsoWitness w = verify_pullback_iso(bundle, pc, k, m, anaf);
  if (!w.ok) {
    if (detail) *detail = w.detail;
    return false;
  }
  // The pullback of E along the anafunctor must recover the model.
  BasedChangeResult e1 = base_change(theory, anaf.mid, pc.cat, anaf.right, e);
  BundleModel down =
      descend_bundle_model(theory, anaf.mid, k, anaf.left, e1.model);
  if (!find_bundle_model_iso(theory, k, down, m)) {
    if (detail) *detail = "descended pullback not isomorphic";
    return false;
  }
  return true;
}

}  // namespace framecat
