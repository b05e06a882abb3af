#include "framecat/verify.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace framecat {

BijectionReport check_bijections(const Theory& theory, const ParameterSet& p) {
  BijectionReport rep;
  ClassifierBundle bundle = gen_classifier(theory, p);
  auto models = enumerate_models(theory, p.size());
  rep.n_models = static_cast<int>(models.size());

  // Bijection I: points of g0 against models.
  auto g0_pts = enumerate_points(*bundle.g0);
  rep.g0_points = static_cast<int>(g0_pts.size());
  std::vector<int> decoded_obj;
  {
    std::set<int> seen;
    for (const auto& pt : g0_pts) {
      PerModel m = decode_object_point(theory, p, *bundle.g0, pt);
      int idx = model_index(models, m);
      if (idx < 0) rep.fail("object point decodes outside the model list");
      if (!seen.insert(idx).second) rep.fail("object decoding not injective");
      decoded_obj.push_back(idx);
    }
    if (seen.size() != models.size())
      rep.fail("object decoding not onto the model list");
  }

  // Bijection II: points of g1 against homomorphisms.
  auto g1_pts = enumerate_points(*bundle.arrows.g1);
  rep.g1_points = static_cast<int>(g1_pts.size());
  for (const auto& m : models)
    for (const auto& n : models)
      rep.n_homs += static_cast<int>(enumerate_homs(theory, m, n).size());
  {
    std::set<std::tuple<int, int, ModelHom>> seen;
    for (const auto& pt : g1_pts) {
      DecodedArrow d = decode_arrow_point(bundle, pt);
      int di = model_index(models, d.dom), ci = model_index(models, d.cod);
      if (di < 0 || ci < 0) rep.fail("arrow endpoints decode outside models");
      if (!is_model_hom(theory, d.dom, d.cod, d.hom))
        rep.fail("arrow point decodes to a non-homomorphism");
      if (!seen.insert({di, ci, d.hom}).second)
        rep.fail("arrow decoding not injective");
      // Structure maps read off the expected endpoints.
      Point sp = point_pushforward(bundle.arrows.s, pt);
      Point tp = point_pushforward(bundle.arrows.t, pt);
      if (!(decode_object_point(theory, p, *bundle.g0, sp) == d.dom))
        rep.fail("s does not decode to the domain");
      if (!(decode_object_point(theory, p, *bundle.g0, tp) == d.cod))
        rep.fail("t does not decode to the codomain");
    }
    if (static_cast<int>(seen.size()) != rep.n_homs)
      rep.fail("arrow decoding not onto the hom list");
  }
  // e decodes model points to identity homs.
  for (const auto& pt : g0_pts) {
    Point ep = point_pushforward(bundle.arrows.e, pt);
    DecodedArrow d = decode_arrow_point(bundle, ep);
    PerModel m = decode_object_point(theory, p, *bundle.g0, pt);
    if (!(d.dom == m) || !(d.cod == m) || !(d.hom == identity_hom(m)))
      rep.fail("e does not decode to the identity hom");
  }

  // Bijection III: core points against isomorphisms, i against inverses.
  auto core_pts = enumerate_points(*bundle.core.g1_core);
  rep.core_points = static_cast<int>(core_pts.size());
  for (const auto& m : models)
    for (const auto& n : models)
      rep.n_isos += static_cast<int>(enumerate_isos(theory, m, n).size());
  {
    std::set<std::tuple<int, int, ModelHom>> seen;
    std::set<std::tuple<int, int, ModelHom>> all_isos;
    for (std::size_t i = 0; i < models.size(); ++i)
      for (std::size_t j = 0; j < models.size(); ++j)
        for (const auto& h : enumerate_isos(theory, models[i], models[j]))
          all_isos.insert({static_cast<int>(i), static_cast<int>(j), h});
    for (const auto& pt : core_pts) {
      DecodedArrow d = decode_arrow_point(bundle, pt);
      int di = model_index(models, d.dom), ci = model_index(models, d.cod);
      if (!all_isos.count({di, ci, d.hom}))
        rep.fail("core point does not decode to an isomorphism");
      seen.insert({di, ci, d.hom});
      DecodedArrow inv =
          decode_arrow_point(bundle, point_pushforward(bundle.core.i, pt));
      if (!(compose_hom(d.dom, d.cod, d.hom, inv.hom) == identity_hom(d.dom)))
        rep.fail("i does not decode to the inverse");
    }
    if (seen.size() != all_isos.size())
      rep.fail("core decoding not onto the isomorphism list");
  }

  // Bijection IV: bundle points against pairs (model, class).
  for (std::size_t s = 0; s < theory.sig.sorts.size(); ++s) {
    auto eA_pts = enumerate_points(*bundle.per_sort[s].eA);
    rep.bundle_points += static_cast<int>(eA_pts.size());
    std::set<std::pair<int, int>> seen;
    int expected = 0;
    for (const auto& m : models)
      expected += m.class_count(static_cast<int>(s));
    rep.n_carriers += expected;
    for (const auto& pt : eA_pts) {
      DecodedBundleElem d =
          decode_bundle_point(bundle, static_cast<int>(s), pt);
      int mi = model_index(models, d.model);
      if (mi < 0) rep.fail("bundle point decodes outside the model list");
      if (!d.model.defined(static_cast<int>(s), d.cls))
        rep.fail("bundle class is not in the carrier");
      if (!seen.insert({mi, d.cls}).second)
        rep.fail("bundle decoding not injective");
      // rho reads off the underlying model point.
      Point rp = point_pushforward(bundle.per_sort[s].rho, pt);
      if (!(decode_object_point(theory, p, *bundle.g0, rp) == d.model))
        rep.fail("rho does not decode to the underlying model");
    }
    if (static_cast<int>(seen.size()) != expected)
      rep.fail("bundle decoding not onto the carrier sum");
  }

  // m decodes to composition and theta to hom application, checked through
  // the point category and the generic model.
  PointCategory pc = point_category(bundle, false);
  for (int a = 0; a < pc.cat.n_arr; ++a)
    for (int b = 0; b < pc.cat.n_arr; ++b) {
      if (pc.cat.tgt[a] != pc.cat.src[b]) continue;
      DecodedArrow da = decode_arrow_point(bundle, pc.arrows[a]);
      DecodedArrow db = decode_arrow_point(bundle, pc.arrows[b]);
      DecodedArrow dc =
          decode_arrow_point(bundle, pc.arrows[pc.cat.comp[a][b]]);
      if (!(dc.hom == compose_hom(da.dom, da.cod, da.hom, db.hom)))
        rep.fail("m does not decode to hom composition");
    }
  GenericPointModel gm = generic_point_model(bundle, pc);
  for (std::size_t s = 0; s < theory.sig.sorts.size(); ++s) {
    for (int x = 0; x < gm.sorts[s].n_elem; ++x)
      for (int g = 0; g < pc.cat.n_arr; ++g) {
        if (pc.cat.src[g] != gm.sorts[s].p[x]) continue;
        DecodedBundleElem dx = decode_bundle_point(
            bundle, static_cast<int>(s), gm.sort_points[s][x]);
        DecodedArrow dg = decode_arrow_point(bundle, pc.arrows[g]);
        DecodedBundleElem dy = decode_bundle_point(
            bundle, static_cast<int>(s), gm.sort_points[s][gm.sorts[s].act[x][g]]);
        auto dom_classes = dx.model.classes(static_cast<int>(s));
        auto it =
            std::lower_bound(dom_classes.begin(), dom_classes.end(), dx.cls);
        int applied = dg.hom.map[s][it - dom_classes.begin()];
        if (!(dy.model == dg.cod) || dy.cls != applied)
          rep.fail("theta does not decode to hom application");
      }
  }
  return rep;
}

bool check_point_category_laws(const ClassifierBundle& bundle,
                               std::string* detail) {
  PointCategory pc = point_category(bundle, false);
  auto res = check_category(pc.cat);
  if (!res.ok) {
    if (detail) *detail = "point category: " + res.violations[0].equation;
    return false;
  }
  PointCategory core_pc = point_category(bundle, true);
  auto core_res = check_category(core_pc.cat);
  if (!core_res.ok) {
    if (detail) *detail = "core groupoid: " + core_res.violations[0].equation;
    return false;
  }
  if (core_pc.cat.n_arr > 0 && !core_pc.cat.has_inverse()) {
    if (detail) *detail = "core groupoid has no inverse table";
    return false;
  }
  return true;
}

bool check_generic_model_soundness(const ClassifierBundle& bundle,
                                   std::string* detail) {
  for (std::size_t a = 0; a < bundle.theory.axioms.size(); ++a) {
    const auto& ax = bundle.theory.axioms[a];
    InterpretedSublocale lhs = interpret_in_E(bundle, ax.context, ax.lhs);
    InterpretedSublocale rhs = interpret_in_E(bundle, ax.context, ax.rhs);
    auto lp = enumerate_points(lhs.sublocale);
    auto rp = enumerate_points(rhs.sublocale);
    if (!std::includes(rp.begin(), rp.end(), lp.begin(), lp.end())) {
      if (detail)
        *detail = "axiom " + std::to_string(a) + " not sound in the bundle";
      return false;
    }
  }
  return true;
}

std::vector<ContextFormula> formula_corpus(const Theory& theory) {
  std::vector<ContextFormula> out;
  for (const auto& ax : theory.axioms) {
    out.push_back({ax.context, ax.lhs});
    out.push_back({ax.context, ax.rhs});
  }
  if (!theory.sig.sorts.empty()) {
    const std::string& a = theory.sig.sorts.front();
    out.push_back({{}, Formula::make_exists("x", a, Formula::make_true())});
    out.push_back({{TypedVar{"x", a}, TypedVar{"y", a}},
                   Formula::make_eq(a, "x", "y")});
    out.push_back({{TypedVar{"x", a}}, Formula::make_false()});
  }
  for (const auto& rel : theory.sig.relations) {
    std::vector<TypedVar> ctx;
    std::vector<std::string> vars;
    for (std::size_t i = 0; i < rel.arity.size(); ++i) {
      ctx.push_back(
          TypedVar{"x" + std::to_string(i), theory.sig.sorts[rel.arity[i]]});
      vars.push_back("x" + std::to_string(i));
    }
    out.push_back({ctx, Formula::make_rel(rel.name, vars)});
  }
  return out;
}

bool check_interpretation_coherence(const ClassifierBundle& bundle,
                                    std::string* detail) {
  const Theory& theory = bundle.theory;
  const ParameterSet& p = bundle.params;
  auto models = enumerate_models(theory, p.size());
  for (const auto& cf : formula_corpus(theory)) {
    InterpretedSublocale sub = interpret_in_E(bundle, cf.ctx, cf.formula);
    // Decoded side: (model, class tuple) for every point of the sublocale.
    std::set<std::pair<int, std::vector<int>>> decoded;
    for (const auto& pt : enumerate_points(sub.sublocale)) {
      PerModel m = decode_object_point(theory, p, *sub.ambient, pt);
      int mi = model_index(models, m);
      if (mi < 0) {
        if (detail) *detail = "sublocale point outside the model list";
        return false;
      }
      std::vector<int> classes;
      for (std::size_t j = 0; j < cf.ctx.size(); ++j) {
        int sort = theory.sig.sort_index(cf.ctx[j].sort);
        int cls = -1;
        for (int i = 0; i < p.size() && cls < 0; ++i)
          if (pt.get(sub.ambient->gen(equiv_id(
                  cf.ctx[j].sort, static_cast<int>(j) + 1, p.tokens[i]))))
            cls = m.class_of(sort, i);
        classes.push_back(cls);
      }
      decoded.insert({mi, classes});
    }
    // Oracle side: the recursive interpretation, unioned over models.
    std::set<std::pair<int, std::vector<int>>> expected;
    for (std::size_t mi = 0; mi < models.size(); ++mi)
      for (const auto& t :
           interpret_formula(theory, models[mi], cf.ctx, cf.formula))
        expected.insert({static_cast<int>(mi), t});
    if (decoded != expected) {
      if (detail)
        *detail = "interpretation of a corpus formula disagrees with the oracle";
      return false;
    }
  }
  return true;
}

}  // namespace framecat
