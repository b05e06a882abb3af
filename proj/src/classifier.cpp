#include "framecat/classifier.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace framecat {

ParameterSet ParameterSet::numeric(int n, TheoryOrientation role) {
  ParameterSet p;
  p.role = role;
  for (int i = 0; i < n; ++i) p.tokens.push_back(std::to_string(i));
  return p;
}

std::string sim_id(const std::string& sort, const std::string& p,
                   const std::string& q) {
  return "sim:" + sort + ":" + p + ":" + q;
}
std::string rel_id(const std::string& rel,
                   const std::vector<std::string>& args) {
  std::string out = "rel:" + rel;
  for (const auto& a : args) out += ":" + a;
  return out;
}
std::string alpha_id(const std::string& sort, const std::string& p,
                     const std::string& q) {
  return "alpha:" + sort + ":" + p + ":" + q;
}
std::string equiv_id(const std::string& sort, int copy, const std::string& p) {
  return "equiv:" + sort + ":" + std::to_string(copy) + ":" + p;
}

namespace {

std::string join_tokens(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i];
  }
  return out;
}

// All k-tuples over {0, .., n-1} in lexicographic order.
std::vector<std::vector<int>> index_tuples(int n, int k) {
  std::vector<std::vector<int>> out{{}};
  for (int i = 0; i < k; ++i) {
    std::vector<std::vector<int>> next;
    for (const auto& t : out)
      for (int v = 0; v < n; ++v) {
        auto u = t;
        u.push_back(v);
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  return out;
}

std::vector<std::string> tokens_of(const ParameterSet& p,
                                   const std::vector<int>& tuple) {
  std::vector<std::string> out;
  for (int i : tuple) out.push_back(p.tokens[i]);
  return out;
}

// True when the truth of the formula already forces the variable into the
// domain of its sort (so that lowering needs no explicit [p ~ p] guard).
bool strict_in(const FormulaPtr& f, const std::string& var) {
  switch (f->kind) {
    case Formula::Kind::Rel:
      return std::find(f->vars.begin(), f->vars.end(), var) != f->vars.end();
    case Formula::Kind::Eq:
      return f->vars[0] == var || f->vars[1] == var;
    case Formula::Kind::True:
      return false;
    case Formula::Kind::False:
      return true;
    case Formula::Kind::And:
      for (const auto& k : f->kids)
        if (strict_in(k, var)) return true;
      return false;
    case Formula::Kind::Or: {
      if (f->kids.empty()) return false;
      for (const auto& k : f->kids)
        if (!strict_in(k, var)) return false;
      return true;
    }
    case Formula::Kind::Exists:
      if (f->var == var) return false;  // shadowed
      return strict_in(f->kids[0], var);
  }
  return false;
}

Dnf lower_rec(const Theory& theory, const Presentation& pres,
              const std::map<std::string, std::pair<std::string, int>>& env,
              const FormulaPtr& f, const ParameterSet& p,
              const std::string& prefix) {
  switch (f->kind) {
    case Formula::Kind::True:
      return Dnf::top();
    case Formula::Kind::False:
      return Dnf::bottom();
    case Formula::Kind::Rel: {
      std::vector<std::string> args;
      for (const auto& v : f->vars) args.push_back(p.tokens[env.at(v).second]);
      return Dnf::gen(pres.gen(prefix + rel_id(f->rel, args)));
    }
    case Formula::Kind::Eq: {
      const auto& x = env.at(f->vars[0]);
      const auto& y = env.at(f->vars[1]);
      return Dnf::gen(pres.gen(
          prefix + sim_id(f->sort, p.tokens[x.second], p.tokens[y.second])));
    }
    case Formula::Kind::And: {
      Dnf acc = Dnf::top();
      for (const auto& k : f->kids)
        acc = acc.meet(lower_rec(theory, pres, env, k, p, prefix));
      return acc;
    }
    case Formula::Kind::Or: {
      Dnf acc = Dnf::bottom();
      for (const auto& k : f->kids)
        acc = acc.join(lower_rec(theory, pres, env, k, p, prefix));
      return acc;
    }
    case Formula::Kind::Exists: {
      Dnf acc = Dnf::bottom();
      bool guarded = !strict_in(f->kids[0], f->var);
      for (int w = 0; w < p.size(); ++w) {
        auto env2 = env;
        env2[f->var] = {f->sort, w};
        Dnf body = lower_rec(theory, pres, env2, f->kids[0], p, prefix);
        if (guarded)
          body = body.meet(Dnf::gen(pres.gen(
              prefix + sim_id(f->sort, p.tokens[w], p.tokens[w]))));
        acc = acc.join(body);
      }
      return acc;
    }
  }
  return Dnf::bottom();
}

}  // namespace

Dnf lower_formula(const Theory& theory, const Presentation& pres,
                  const std::vector<TypedVar>& ctx,
                  const std::vector<int>& params, const FormulaPtr& formula,
                  const ParameterSet& p, const std::string& prefix) {
  if (ctx.size() != params.size())
    throw ClassifierError("lower_formula: context/parameter length mismatch");
  std::map<std::string, std::pair<std::string, int>> env;
  for (std::size_t i = 0; i < ctx.size(); ++i)
    env[ctx[i].name] = {ctx[i].sort, params[i]};
  return lower_rec(theory, pres, env, formula, p, prefix);
}

// ---------------------------------------------------------------------------
// G0

Presentation gen_objects(const Theory& theory, const ParameterSet& p) {
  Presentation g0;
  g0.orientation = p.presentation_orientation();
  int n = p.size();
  for (const auto& sort : theory.sig.sorts)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        g0.add_generator(sim_id(sort, p.tokens[i], p.tokens[j]),
                         "[" + p.tokens[i] + " ~" + sort + " " + p.tokens[j] + "]",
                         {{"kind", "sim"},
                          {"sort", sort},
                          {"p", p.tokens[i]},
                          {"q", p.tokens[j]}});
  for (const auto& rel : theory.sig.relations) {
    for (const auto& t : index_tuples(n, static_cast<int>(rel.arity.size()))) {
      auto args = tokens_of(p, t);
      g0.add_generator(rel_id(rel.name, args),
                       "[(" + join_tokens(args) + ") in " + rel.name + "]",
                       {{"kind", "rel"},
                        {"rel", rel.name},
                        {"args", join_tokens(args)}});
    }
  }

  auto sim = [&](const std::string& sort, int i, int j) {
    return g0.gen(sim_id(sort, p.tokens[i], p.tokens[j]));
  };
  for (const auto& sort : theory.sig.sorts) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        g0.add_relation(Sequent{MeetTerm::single(sim(sort, i, j)),
                                Dnf::gen(sim(sort, j, i)), "sym:" + sort});
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          g0.add_relation(
              Sequent{MeetTerm::of({sim(sort, i, j), sim(sort, j, k)}),
                      Dnf::gen(sim(sort, i, k)), "trans:" + sort});
  }
  for (std::size_t r = 0; r < theory.sig.relations.size(); ++r) {
    const auto& rel = theory.sig.relations[r];
    int k = static_cast<int>(rel.arity.size());
    auto rel_gen = [&](const std::vector<int>& t) {
      return g0.gen(rel_id(rel.name, tokens_of(p, t)));
    };
    for (const auto& pt : index_tuples(n, k))
      for (const auto& qt : index_tuples(n, k)) {
        std::vector<GenId> lhs{rel_gen(pt)};
        for (int i = 0; i < k; ++i)
          lhs.push_back(g0.gen(sim_id(theory.sig.sorts[rel.arity[i]],
                                      p.tokens[pt[i]], p.tokens[qt[i]])));
        g0.add_relation(Sequent{MeetTerm::of(std::move(lhs)),
                                Dnf::gen(rel_gen(qt)), "stab:" + rel.name});
      }
    for (const auto& pt : index_tuples(n, k)) {
      std::vector<GenId> rhs;
      for (int i = 0; i < k; ++i)
        rhs.push_back(g0.gen(sim_id(theory.sig.sorts[rel.arity[i]],
                                    p.tokens[pt[i]], p.tokens[pt[i]])));
      g0.add_relation(Sequent{MeetTerm::single(rel_gen(pt)),
                              Dnf::single(MeetTerm::of(std::move(rhs))),
                              "strict:" + rel.name});
    }
  }
  for (std::size_t a = 0; a < theory.axioms.size(); ++a) {
    const auto& ax = theory.axioms[a];
    int k = static_cast<int>(ax.context.size());
    for (const auto& pt : index_tuples(n, k)) {
      std::vector<GenId> guard;
      for (int i = 0; i < k; ++i)
        guard.push_back(g0.gen(
            sim_id(ax.context[i].sort, p.tokens[pt[i]], p.tokens[pt[i]])));
      Dnf lhs = lower_formula(theory, g0, ax.context, pt, ax.lhs, p);
      Dnf rhs = lower_formula(theory, g0, ax.context, pt, ax.rhs, p);
      for (const auto& term : lhs.terms)
        g0.add_relation(Sequent{MeetTerm::of(guard).meet(term), rhs,
                                "axiom:" + std::to_string(a)});
    }
  }
  return g0;
}

// ---------------------------------------------------------------------------
// Copies and hom schemas

namespace {

Presentation make_copies(const Presentation& base,
                         const std::vector<std::string>& prefixes) {
  Presentation out;
  out.orientation = base.orientation;
  for (std::size_t k = 0; k < prefixes.size(); ++k) {
    for (const auto& g : base.generators) {
      Generator c = g;
      c.id = prefixes[k] + g.id;
      c.display = prefixes[k] + g.display;
      c.tags["copy"] = std::to_string(k + 1);
      c.tags["base"] = g.id;
      out.add_generator(std::move(c));
    }
  }
  int sz = base.size();
  for (std::size_t k = 0; k < prefixes.size(); ++k) {
    int off = static_cast<int>(k) * sz;
    for (const auto& rel : base.relations) {
      Sequent s;
      s.label = prefixes[k] + rel.label;
      std::vector<GenId> lhs;
      for (GenId g : rel.lhs.gens) lhs.push_back(g + off);
      s.lhs = MeetTerm::of(std::move(lhs));
      for (const auto& t : rel.rhs.terms) {
        std::vector<GenId> gs;
        for (GenId g : t.gens) gs.push_back(g + off);
        s.rhs.terms.push_back(MeetTerm::of(std::move(gs)));
      }
      out.add_relation(std::move(s));
    }
  }
  return out;
}

using HomGenName = std::function<std::string(const std::string& sort,
                                             const std::string& p,
                                             const std::string& q)>;

// The axioms making a family of [f(p) = q] generators the graph of a total
// function between the subquotients carried by two tagged copies: class
// functionality, totality on the domain, strictness and saturation, plus
// preservation of every relation symbol.
void add_hom_schemas(Presentation& pres, const Theory& theory,
                     const ParameterSet& p, const std::string& pre1,
                     const std::string& pre2, const HomGenName& fid,
                     const std::string& label) {
  int n = p.size();
  auto sim1 = [&](const std::string& sort, int i, int j) {
    return pres.gen(pre1 + sim_id(sort, p.tokens[i], p.tokens[j]));
  };
  auto sim2 = [&](const std::string& sort, int i, int j) {
    return pres.gen(pre2 + sim_id(sort, p.tokens[i], p.tokens[j]));
  };
  auto f = [&](const std::string& sort, int i, int j) {
    return pres.gen(fid(sort, p.tokens[i], p.tokens[j]));
  };
  for (const auto& sort : theory.sig.sorts) {
    for (int i = 0; i < n; ++i)
      for (int i2 = 0; i2 < n; ++i2)
        for (int j = 0; j < n; ++j)
          for (int j2 = 0; j2 < n; ++j2)
            pres.add_relation(Sequent{
                MeetTerm::of({f(sort, i, j), f(sort, i2, j2), sim1(sort, i, i2)}),
                Dnf::gen(sim2(sort, j, j2)), label + ":func:" + sort});
    for (int i = 0; i < n; ++i) {
      Dnf total;
      for (int j = 0; j < n; ++j)
        total.terms.push_back(MeetTerm::single(f(sort, i, j)));
      total.normalize();
      pres.add_relation(Sequent{MeetTerm::single(sim1(sort, i, i)), total,
                                label + ":total:" + sort});
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        pres.add_relation(
            Sequent{MeetTerm::single(f(sort, i, j)),
                    Dnf::single(MeetTerm::of({sim1(sort, i, i), sim2(sort, j, j)})),
                    label + ":strict:" + sort});
    for (int i = 0; i < n; ++i)
      for (int i2 = 0; i2 < n; ++i2)
        for (int j = 0; j < n; ++j)
          for (int j2 = 0; j2 < n; ++j2)
            pres.add_relation(Sequent{
                MeetTerm::of({f(sort, i, j), sim1(sort, i, i2), sim2(sort, j, j2)}),
                Dnf::gen(f(sort, i2, j2)), label + ":sat:" + sort});
  }
  for (const auto& rel : theory.sig.relations) {
    int k = static_cast<int>(rel.arity.size());
    for (const auto& pt : index_tuples(n, k))
      for (const auto& qt : index_tuples(n, k)) {
        std::vector<GenId> lhs{
            pres.gen(pre1 + rel_id(rel.name, tokens_of(p, pt)))};
        for (int i = 0; i < k; ++i)
          lhs.push_back(f(theory.sig.sorts[rel.arity[i]], pt[i], qt[i]));
        pres.add_relation(Sequent{
            MeetTerm::of(std::move(lhs)),
            Dnf::gen(pres.gen(pre2 + rel_id(rel.name, tokens_of(p, qt)))),
            label + ":pres:" + rel.name});
      }
  }
}

void add_alpha_generators(Presentation& pres, const Theory& theory,
                          const ParameterSet& p, const std::string& name,
                          const HomGenName& fid) {
  int n = p.size();
  for (const auto& sort : theory.sig.sorts)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        pres.add_generator(fid(sort, p.tokens[i], p.tokens[j]),
                           "[" + name + sort + "(" + p.tokens[i] + ")=" +
                               p.tokens[j] + "]",
                           {{"kind", name},
                            {"sort", sort},
                            {"p", p.tokens[i]},
                            {"q", p.tokens[j]}});
}

void verify_or_throw(FrameHomSpec& hom, const std::string& name) {
  auto res = check_frame_hom(hom);
  if (!res.ok) {
    std::string msg = "structure map " + name + " failed on relation ";
    msg += (res.failed_relation >= 0
                ? hom.source->relations[res.failed_relation].label
                : std::string("?"));
    msg += ": " + hom.target->show(res.failed_image);
    if (res.countermodel)
      msg += " refuted by " + hom.target->show(*res.countermodel);
    throw ClassifierError(msg);
  }
}

}  // namespace

ArrowData gen_arrows(const Theory& theory, const ParameterSet& p,
                     const std::shared_ptr<const Presentation>& g0) {
  ArrowData out;
  Presentation g1 = make_copies(*g0, {"1:", "2:"});
  auto aid = [](const std::string& sort, const std::string& a,
                const std::string& b) { return alpha_id(sort, a, b); };
  add_alpha_generators(g1, theory, p, "alpha", aid);
  add_hom_schemas(g1, theory, p, "1:", "2:", aid, "alpha");
  out.g1 = std::make_shared<Presentation>(std::move(g1));

  Presentation pairs = make_copies(*g0, {"1:", "2:", "3:"});
  auto bid = [](const std::string& sort, const std::string& a,
                const std::string& b) { return "beta:" + sort + ":" + a + ":" + b; };
  auto gid = [](const std::string& sort, const std::string& a,
                const std::string& b) { return "gamma:" + sort + ":" + a + ":" + b; };
  add_alpha_generators(pairs, theory, p, "beta", bid);
  add_alpha_generators(pairs, theory, p, "gamma", gid);
  add_hom_schemas(pairs, theory, p, "1:", "2:", bid, "beta");
  add_hom_schemas(pairs, theory, p, "2:", "3:", gid, "gamma");
  out.g1xg1 = std::make_shared<Presentation>(std::move(pairs));

  out.s = make_hom_by_id(g0, out.g1, [](const Presentation& t, const Generator& g) {
    return Dnf::gen(t.gen("1:" + g.id));
  });
  out.t = make_hom_by_id(g0, out.g1, [](const Presentation& t, const Generator& g) {
    return Dnf::gen(t.gen("2:" + g.id));
  });
  out.e = make_hom_by_id(out.g1, g0, [](const Presentation& t, const Generator& g) {
    if (g.tags.count("base")) return Dnf::gen(t.gen(g.tags.at("base")));
    // alpha generator: [alphaA(p) = q] -> [p ~A q]
    return Dnf::gen(
        t.gen(sim_id(g.tags.at("sort"), g.tags.at("p"), g.tags.at("q"))));
  });
  out.m = make_hom_by_id(
      out.g1, out.g1xg1, [&](const Presentation& t, const Generator& g) {
        if (g.tags.count("base")) {
          const std::string& base = g.tags.at("base");
          return Dnf::gen(
              t.gen((g.tags.at("copy") == "1" ? "1:" : "3:") + base));
        }
        const std::string& sort = g.tags.at("sort");
        Dnf acc = Dnf::bottom();
        for (const auto& q : p.tokens) {
          acc = acc.join(Dnf::single(MeetTerm::of(
              {t.gen("beta:" + sort + ":" + g.tags.at("p") + ":" + q),
               t.gen("gamma:" + sort + ":" + q + ":" + g.tags.at("q"))})));
        }
        return acc;
      });
  out.p1 = make_hom_by_id(
      out.g1, out.g1xg1, [](const Presentation& t, const Generator& g) {
        if (g.tags.count("base"))
          return Dnf::gen(
              t.gen((g.tags.at("copy") == "1" ? "1:" : "2:") + g.tags.at("base")));
        return Dnf::gen(t.gen("beta:" + g.tags.at("sort") + ":" +
                              g.tags.at("p") + ":" + g.tags.at("q")));
      });
  out.p2 = make_hom_by_id(
      out.g1, out.g1xg1, [](const Presentation& t, const Generator& g) {
        if (g.tags.count("base"))
          return Dnf::gen(
              t.gen((g.tags.at("copy") == "1" ? "2:" : "3:") + g.tags.at("base")));
        return Dnf::gen(t.gen("gamma:" + g.tags.at("sort") + ":" +
                              g.tags.at("p") + ":" + g.tags.at("q")));
      });
  return out;
}

CoreData gen_core(const Theory& theory, const ParameterSet& p,
                  const std::shared_ptr<const Presentation>& g0,
                  const ArrowData& arrows) {
  CoreData out;
  Presentation core = *arrows.g1;
  int n = p.size();
  auto sim1 = [&](const std::string& sort, int i, int j) {
    return core.gen("1:" + sim_id(sort, p.tokens[i], p.tokens[j]));
  };
  auto sim2 = [&](const std::string& sort, int i, int j) {
    return core.gen("2:" + sim_id(sort, p.tokens[i], p.tokens[j]));
  };
  auto a = [&](const std::string& sort, int i, int j) {
    return core.gen(alpha_id(sort, p.tokens[i], p.tokens[j]));
  };
  for (const auto& sort : theory.sig.sorts) {
    for (int i = 0; i < n; ++i)
      for (int i2 = 0; i2 < n; ++i2)
        for (int j = 0; j < n; ++j)
          for (int j2 = 0; j2 < n; ++j2)
            core.add_relation(Sequent{
                MeetTerm::of({a(sort, i, j), a(sort, i2, j2), sim2(sort, j, j2)}),
                Dnf::gen(sim1(sort, i, i2)), "core:inj:" + sort});
    for (int j = 0; j < n; ++j) {
      Dnf onto;
      for (int i = 0; i < n; ++i)
        onto.terms.push_back(MeetTerm::single(a(sort, i, j)));
      onto.normalize();
      core.add_relation(Sequent{MeetTerm::single(sim2(sort, j, j)), onto,
                                "core:surj:" + sort});
    }
  }
  for (const auto& rel : theory.sig.relations) {
    int k = static_cast<int>(rel.arity.size());
    for (const auto& pt : index_tuples(n, k))
      for (const auto& qt : index_tuples(n, k)) {
        std::vector<GenId> lhs{
            core.gen("2:" + rel_id(rel.name, tokens_of(p, qt)))};
        for (int i = 0; i < k; ++i)
          lhs.push_back(a(theory.sig.sorts[rel.arity[i]], pt[i], qt[i]));
        core.add_relation(Sequent{
            MeetTerm::of(std::move(lhs)),
            Dnf::gen(core.gen("1:" + rel_id(rel.name, tokens_of(p, pt)))),
            "core:refl:" + rel.name});
      }
  }
  out.g1_core = std::make_shared<Presentation>(std::move(core));
  out.i = make_hom_by_id(
      out.g1_core, out.g1_core, [](const Presentation& t, const Generator& g) {
        if (g.tags.count("base"))
          return Dnf::gen(
              t.gen((g.tags.at("copy") == "1" ? "2:" : "1:") + g.tags.at("base")));
        return Dnf::gen(
            t.gen(alpha_id(g.tags.at("sort"), g.tags.at("q"), g.tags.at("p"))));
      });
  out.s = make_hom_by_id(g0, out.g1_core,
                         [](const Presentation& t, const Generator& g) {
                           return Dnf::gen(t.gen("1:" + g.id));
                         });
  out.t = make_hom_by_id(g0, out.g1_core,
                         [](const Presentation& t, const Generator& g) {
                           return Dnf::gen(t.gen("2:" + g.id));
                         });
  out.e = make_hom_by_id(
      out.g1_core, g0, [](const Presentation& t, const Generator& g) {
        if (g.tags.count("base")) return Dnf::gen(t.gen(g.tags.at("base")));
        return Dnf::gen(
            t.gen(sim_id(g.tags.at("sort"), g.tags.at("p"), g.tags.at("q"))));
      });
  return out;
}

// ---------------------------------------------------------------------------
// Generic bundle

namespace {

FiberExtension bundle_fiber(const Theory& theory, const ParameterSet& p,
                            const Presentation& g0, const std::string& sort) {
  (void)theory;
  FiberExtension fib;
  int n = p.size();
  int base = g0.size();
  for (int i = 0; i < n; ++i) {
    Generator g;
    g.id = "equiv:" + sort + ":" + p.tokens[i];  // copy index added by namer
    g.display = "[=" + sort + " " + p.tokens[i] + "]";
    g.tags = {{"kind", "equiv"}, {"sort", sort}, {"p", p.tokens[i]}};
    fib.extra_gens.push_back(std::move(g));
  }
  auto sim = [&](int i, int j) {
    return g0.gen(sim_id(sort, p.tokens[i], p.tokens[j]));
  };
  auto eq = [&](int i) { return base + i; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      fib.extra_rels.push_back(
          Sequent{MeetTerm::of({eq(i), sim(i, j)}),
                  Dnf::single(MeetTerm::of({eq(j), sim(i, j)})), "eq-move"});
      fib.extra_rels.push_back(
          Sequent{MeetTerm::of({eq(j), sim(i, j)}),
                  Dnf::single(MeetTerm::of({eq(i), sim(i, j)})), "eq-move"});
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      fib.extra_rels.push_back(Sequent{MeetTerm::of({eq(i), eq(j)}),
                                       Dnf::gen(sim(i, j)), "eq-glue"});
    }
  Dnf inhabited;
  for (int i = 0; i < n; ++i)
    inhabited.terms.push_back(MeetTerm::single(eq(i)));
  inhabited.normalize();
  fib.extra_rels.push_back(
      Sequent{MeetTerm::top(), inhabited, "eq-inhabited"});
  for (int i = 0; i < n; ++i)
    fib.extra_rels.push_back(
        Sequent{MeetTerm::single(eq(i)), Dnf::gen(sim(i, i)), "eq-domain"});
  return fib;
}

CopyNamer equiv_namer() {
  return [](int copy, const Generator& g) {
    Generator out = g;
    out.id = equiv_id(g.tags.at("sort"), copy, g.tags.at("p"));
    out.display = "[=" + g.tags.at("sort") + "," + std::to_string(copy) + " " +
                  g.tags.at("p") + "]";
    out.tags["copy"] = std::to_string(copy);
    return out;
  };
}

}  // namespace

SortBundle gen_generic_bundle(const Theory& theory, const ParameterSet& p,
                              const std::shared_ptr<const Presentation>& g0,
                              int sort) {
  SortBundle out;
  const std::string& name = theory.sig.sorts[sort];
  out.eA = std::make_shared<Presentation>(relative_product(
      *g0, {bundle_fiber(theory, p, *g0, name)}, equiv_namer()));
  out.rho = make_hom_by_id(g0, out.eA,
                           [](const Presentation& t, const Generator& g) {
                             return Dnf::gen(t.gen(g.id));
                           });
  return out;
}

FrameHomSpec gen_action(const Theory& theory, const ParameterSet& p,
                        const std::shared_ptr<const Presentation>& g0,
                        const ArrowData& arrows, int sort, SortBundle& bundle) {
  (void)g0;
  const std::string& name = theory.sig.sorts[sort];
  // E_A x_{G0} G1, pulled back along rho and s: the arrow presentation plus
  // the bundle generators attached to the source copy.
  Presentation prod = *arrows.g1;
  int n = p.size();
  std::vector<GenId> eq(n);
  for (int i = 0; i < n; ++i) {
    Generator g;
    g.id = equiv_id(name, 1, p.tokens[i]);
    g.display = "[=" + name + ",1 " + p.tokens[i] + "]";
    g.tags = {{"kind", "equiv"},
              {"sort", name},
              {"p", p.tokens[i]},
              {"copy", "1"}};
    eq[i] = prod.add_generator(std::move(g));
  }
  auto sim1 = [&](int i, int j) {
    return prod.gen("1:" + sim_id(name, p.tokens[i], p.tokens[j]));
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      prod.add_relation(Sequent{MeetTerm::of({eq[i], sim1(i, j)}),
                                Dnf::single(MeetTerm::of({eq[j], sim1(i, j)})),
                                "eq-move"});
      prod.add_relation(Sequent{MeetTerm::of({eq[j], sim1(i, j)}),
                                Dnf::single(MeetTerm::of({eq[i], sim1(i, j)})),
                                "eq-move"});
      prod.add_relation(Sequent{MeetTerm::of({eq[i], eq[j]}),
                                Dnf::gen(sim1(i, j)), "eq-glue"});
    }
  Dnf inhabited;
  for (int i = 0; i < n; ++i) inhabited.terms.push_back(MeetTerm::single(eq[i]));
  inhabited.normalize();
  prod.add_relation(Sequent{MeetTerm::top(), inhabited, "eq-inhabited"});
  for (int i = 0; i < n; ++i)
    prod.add_relation(
        Sequent{MeetTerm::single(eq[i]), Dnf::gen(sim1(i, i)), "eq-domain"});
  bundle.eA_x_g1 = std::make_shared<Presentation>(std::move(prod));

  return make_hom_by_id(
      bundle.eA, bundle.eA_x_g1,
      [&](const Presentation& t, const Generator& g) {
        if (g.tags.at("kind") == "equiv") {
          // [= q] -> \/_p [= p] /\ [alpha(p) = q]
          Dnf acc = Dnf::bottom();
          for (const auto& w : p.tokens)
            acc = acc.join(Dnf::single(MeetTerm::of(
                {t.gen(equiv_id(name, 1, w)),
                 t.gen(alpha_id(name, w, g.tags.at("p")))})));
          return acc;
        }
        return Dnf::gen(t.gen("2:" + g.id));  // model part to the target copy
      });
}

ClassifierBundle gen_classifier(const Theory& theory, const ParameterSet& p) {
  ClassifierBundle b;
  b.theory = theory;
  b.params = p;
  b.g0 = std::make_shared<Presentation>(gen_objects(theory, p));
  b.arrows = gen_arrows(theory, p, b.g0);
  verify_or_throw(b.arrows.s, "s");
  verify_or_throw(b.arrows.t, "t");
  verify_or_throw(b.arrows.e, "e");
  verify_or_throw(b.arrows.m, "m");
  verify_or_throw(b.arrows.p1, "pi1");
  verify_or_throw(b.arrows.p2, "pi2");
  b.core = gen_core(theory, p, b.g0, b.arrows);
  verify_or_throw(b.core.i, "i");
  verify_or_throw(b.core.s, "s_core");
  verify_or_throw(b.core.t, "t_core");
  verify_or_throw(b.core.e, "e_core");
  for (std::size_t s = 0; s < theory.sig.sorts.size(); ++s) {
    SortBundle sb =
        gen_generic_bundle(theory, p, b.g0, static_cast<int>(s));
    verify_or_throw(sb.rho, "rho:" + theory.sig.sorts[s]);
    sb.theta = gen_action(theory, p, b.g0, b.arrows, static_cast<int>(s), sb);
    verify_or_throw(sb.theta, "theta:" + theory.sig.sorts[s]);
    b.per_sort.push_back(std::move(sb));
  }
  for (const auto& rel : theory.sig.relations) {
    std::vector<FiberExtension> fibers;
    for (int s : rel.arity)
      fibers.push_back(bundle_fiber(theory, p, *b.g0, theory.sig.sorts[s]));
    auto prod = std::make_shared<Presentation>(
        relative_product(*b.g0, fibers, equiv_namer()));
    Dnf force = Dnf::bottom();
    int k = static_cast<int>(rel.arity.size());
    for (const auto& pt : index_tuples(p.size(), k)) {
      std::vector<GenId> gens{prod->gen(rel_id(rel.name, tokens_of(p, pt)))};
      for (int i = 0; i < k; ++i)
        gens.push_back(prod->gen(
            equiv_id(theory.sig.sorts[rel.arity[i]], i + 1, p.tokens[pt[i]])));
      force = force.join(Dnf::single(MeetTerm::of(std::move(gens))));
    }
    b.rel_products.push_back(prod);
    b.rel_subs.push_back(
        {Sequent{MeetTerm::top(), force, "rel-sub:" + rel.name}});
  }
  return b;
}

InterpretedSublocale interpret_in_E(const ClassifierBundle& bundle,
                                    const std::vector<TypedVar>& ctx,
                                    const FormulaPtr& formula) {
  const Theory& theory = bundle.theory;
  const ParameterSet& p = bundle.params;
  std::vector<FiberExtension> fibers;
  for (const auto& tv : ctx)
    fibers.push_back(bundle_fiber(theory, p, *bundle.g0, tv.sort));
  InterpretedSublocale out;
  out.ambient = std::make_shared<Presentation>(
      relative_product(*bundle.g0, fibers, equiv_namer()));
  Dnf force = Dnf::bottom();
  for (const auto& pt : index_tuples(p.size(), static_cast<int>(ctx.size()))) {
    Dnf lowered = lower_formula(theory, *out.ambient, ctx, pt, formula, p);
    std::vector<GenId> eqs;
    for (std::size_t i = 0; i < ctx.size(); ++i)
      eqs.push_back(out.ambient->gen(
          equiv_id(ctx[i].sort, static_cast<int>(i) + 1, p.tokens[pt[i]])));
    force = force.join(lowered.meet(Dnf::single(MeetTerm::of(std::move(eqs)))));
  }
  out.relation = Sequent{MeetTerm::top(), force, "interpret"};
  out.sublocale = add_relations(*out.ambient, {out.relation});
  return out;
}

// ---------------------------------------------------------------------------
// Point category

namespace {

int find_point(const std::vector<Point>& sorted, const Point& pt,
               const char* what) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), pt);
  if (it == sorted.end() || !(*it == pt))
    throw ClassifierError(std::string("point lookup failed: ") + what);
  return static_cast<int>(it - sorted.begin());
}

Point transport_point(const Presentation& dest,
                      const std::function<bool(const Generator&)>& bit) {
  Point out(dest.size());
  for (int g = 0; g < dest.size(); ++g) out.set(g, bit(dest.generators[g]));
  return out;
}

bool is_point_of(const Presentation& pres, const Point& pt) {
  for (const auto& rel : pres.relations)
    if (!pt.satisfies(rel)) return false;
  return true;
}

}  // namespace

PointCategory point_category(const ClassifierBundle& bundle, bool use_core) {
  PointCategory pc;
  pc.objects = enumerate_points(*bundle.g0);
  const Presentation& arr_pres =
      use_core ? *bundle.core.g1_core : *bundle.arrows.g1;
  pc.arrows = enumerate_points(arr_pres);
  const FrameHomSpec& s = use_core ? bundle.core.s : bundle.arrows.s;
  const FrameHomSpec& t = use_core ? bundle.core.t : bundle.arrows.t;
  const FrameHomSpec& e = use_core ? bundle.core.e : bundle.arrows.e;

  FiniteCategory& cat = pc.cat;
  cat.n_obj = static_cast<int>(pc.objects.size());
  cat.n_arr = static_cast<int>(pc.arrows.size());
  cat.src.resize(cat.n_arr);
  cat.tgt.resize(cat.n_arr);
  cat.ident.resize(cat.n_obj);
  cat.comp.assign(cat.n_arr, std::vector<int>(cat.n_arr, -1));
  for (int a = 0; a < cat.n_arr; ++a) {
    cat.src[a] = find_point(pc.objects, point_pushforward(s, pc.arrows[a]),
                            "source of arrow");
    cat.tgt[a] = find_point(pc.objects, point_pushforward(t, pc.arrows[a]),
                            "target of arrow");
  }
  for (int x = 0; x < cat.n_obj; ++x)
    cat.ident[x] = find_point(pc.arrows, point_pushforward(e, pc.objects[x]),
                              "identity arrow");
  const Presentation& pairs = *bundle.arrows.g1xg1;
  for (int a = 0; a < cat.n_arr; ++a)
    for (int b = 0; b < cat.n_arr; ++b) {
      if (cat.tgt[a] != cat.src[b]) continue;
      const Point& pa = pc.arrows[a];
      const Point& pb = pc.arrows[b];
      Point glued = transport_point(pairs, [&](const Generator& g) {
        if (g.tags.count("base")) {
          const std::string& base = g.tags.at("base");
          const std::string& copy = g.tags.at("copy");
          if (copy == "1") return pa.get(arr_pres.gen("1:" + base));
          if (copy == "2") return pa.get(arr_pres.gen("2:" + base));
          return pb.get(arr_pres.gen("2:" + base));
        }
        const std::string& kind = g.tags.at("kind");
        GenId alpha = arr_pres.gen(
            alpha_id(g.tags.at("sort"), g.tags.at("p"), g.tags.at("q")));
        return kind == "beta" ? pa.get(alpha) : pb.get(alpha);
      });
      if (!is_point_of(pairs, glued))
        throw ClassifierError("composable pair failed to glue to a point");
      Point composite = point_pushforward(bundle.arrows.m, glued);
      cat.comp[a][b] = find_point(pc.arrows, composite, "composite arrow");
    }
  if (use_core) {
    cat.inv.resize(cat.n_arr);
    for (int a = 0; a < cat.n_arr; ++a)
      cat.inv[a] = find_point(
          pc.arrows, point_pushforward(bundle.core.i, pc.arrows[a]), "inverse");
  }
  return pc;
}

GenericPointModel generic_point_model(const ClassifierBundle& bundle,
                                      const PointCategory& pc) {
  GenericPointModel gm;
  const Theory& theory = bundle.theory;
  int n_sorts = static_cast<int>(theory.sig.sorts.size());
  gm.sort_points.resize(n_sorts);
  gm.sorts.resize(n_sorts);
  const Presentation& arr_pres = *bundle.arrows.g1;
  for (int s = 0; s < n_sorts; ++s) {
    const SortBundle& sb = bundle.per_sort[s];
    gm.sort_points[s] = enumerate_points(*sb.eA);
    SheafAction& act = gm.sorts[s];
    act.n_elem = static_cast<int>(gm.sort_points[s].size());
    act.p.resize(act.n_elem);
    for (int x = 0; x < act.n_elem; ++x)
      act.p[x] = find_point(pc.objects,
                            point_pushforward(sb.rho, gm.sort_points[s][x]),
                            "bundle fiber");
    act.act.assign(act.n_elem, std::vector<int>(pc.cat.n_arr, -1));
    for (int x = 0; x < act.n_elem; ++x) {
      const Point& px = gm.sort_points[s][x];
      for (int g = 0; g < pc.cat.n_arr; ++g) {
        if (pc.cat.src[g] != act.p[x]) continue;
        const Point& pg = pc.arrows[g];
        Point glued = transport_point(*sb.eA_x_g1, [&](const Generator& gen) {
          if (gen.tags.at("kind") == "equiv")
            return px.get(sb.eA->gen(gen.id));
          return pg.get(arr_pres.gen(gen.id));
        });
        if (!is_point_of(*sb.eA_x_g1, glued))
          throw ClassifierError("bundle/arrow pair failed to glue to a point");
        act.act[x][g] = find_point(
            gm.sort_points[s], point_pushforward(sb.theta, glued), "theta");
      }
    }
  }
  gm.rel.resize(theory.sig.relations.size());
  for (std::size_t r = 0; r < theory.sig.relations.size(); ++r) {
    const auto& rel = theory.sig.relations[r];
    int k = static_cast<int>(rel.arity.size());
    const Presentation& prod = *bundle.rel_products[r];
    // All same-fiber tuples, tested against the defining relation.
    std::function<void(int, std::vector<int>&, int)> rec =
        [&](int i, std::vector<int>& tuple, int fiber) {
          if (i == k) {
            Point glued = transport_point(prod, [&](const Generator& g) {
              if (g.tags.at("kind") == "equiv") {
                int copy = std::stoi(g.tags.at("copy"));
                int sort = rel.arity[copy - 1];
                const Point& px = gm.sort_points[sort][tuple[copy - 1]];
                return px.get(bundle.per_sort[sort].eA->gen(
                    equiv_id(g.tags.at("sort"), 1, g.tags.at("p"))));
              }
              return pc.objects[fiber].get(bundle.g0->gen(g.id));
            });
            if (is_point_of(prod, glued) &&
                glued.satisfies(bundle.rel_subs[r][0].rhs))
              gm.rel[r].push_back(tuple);
            return;
          }
          int sort = rel.arity[i];
          for (int x = 0; x < gm.sorts[sort].n_elem; ++x) {
            if (gm.sorts[sort].p[x] != fiber) continue;
            tuple.push_back(x);
            rec(i + 1, tuple, fiber);
            tuple.pop_back();
          }
        };
    for (int fiber = 0; fiber < pc.cat.n_obj; ++fiber) {
      std::vector<int> tuple;
      rec(0, tuple, fiber);
    }
  }
  return gm;
}

// ---------------------------------------------------------------------------
// Disjoint union of theories

namespace {

FormulaPtr rename_formula(const FormulaPtr& f,
                          const std::map<std::string, std::string>& sorts,
                          const std::map<std::string, std::string>& rels) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Rel:
      return Formula::make_rel(rels.at(f->rel), f->vars);
    case Formula::Kind::Eq:
      return Formula::make_eq(sorts.at(f->sort), f->vars[0], f->vars[1]);
    case Formula::Kind::And: {
      std::vector<FormulaPtr> kids;
      for (const auto& k : f->kids)
        kids.push_back(rename_formula(k, sorts, rels));
      return Formula::make_and(std::move(kids));
    }
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> kids;
      for (const auto& k : f->kids)
        kids.push_back(rename_formula(k, sorts, rels));
      return Formula::make_or(std::move(kids));
    }
    case Formula::Kind::Exists:
      return Formula::make_exists(f->var, sorts.at(f->sort),
                                  rename_formula(f->kids[0], sorts, rels));
  }
  return f;
}

}  // namespace

Theory disjoint_union(const Theory& a, const Theory& b) {
  if (a.orientation != b.orientation)
    throw ClassifierError("disjoint_union: orientations differ");
  Theory u;
  u.name = a.name + "_" + b.name;
  u.orientation = a.orientation;

  auto collide_sort = [&](const std::string& s) {
    return a.sig.sort_index(s) >= 0 && b.sig.sort_index(s) >= 0;
  };
  auto collide_rel = [&](const std::string& r) {
    return a.sig.rel_index(r) >= 0 && b.sig.rel_index(r) >= 0;
  };
  std::map<std::string, std::string> sa, sb, ra, rb;
  for (const auto& s : a.sig.sorts) sa[s] = collide_sort(s) ? s + "1" : s;
  for (const auto& s : b.sig.sorts) sb[s] = collide_sort(s) ? s + "2" : s;
  for (const auto& r : a.sig.relations)
    ra[r.name] = collide_rel(r.name) ? r.name + "1" : r.name;
  for (const auto& r : b.sig.relations)
    rb[r.name] = collide_rel(r.name) ? r.name + "2" : r.name;

  // a's sorts and relations first; the order contract is relied upon when
  // splitting models of the union back into pairs.
  for (const auto& s : a.sig.sorts) u.sig.sorts.push_back(sa[s]);
  for (const auto& s : b.sig.sorts) u.sig.sorts.push_back(sb[s]);
  for (const auto& r : a.sig.relations) {
    Signature::Rel nr;
    nr.name = ra[r.name];
    for (int s : r.arity)
      nr.arity.push_back(u.sig.sort_index(sa.at(a.sig.sorts[s])));
    u.sig.relations.push_back(std::move(nr));
  }
  for (const auto& r : b.sig.relations) {
    Signature::Rel nr;
    nr.name = rb[r.name];
    for (int s : r.arity)
      nr.arity.push_back(u.sig.sort_index(sb.at(b.sig.sorts[s])));
    u.sig.relations.push_back(std::move(nr));
  }
  for (const auto& ax : a.axioms) {
    TheorySequent seq;
    for (const auto& tv : ax.context)
      seq.context.push_back(TypedVar{tv.name, sa.at(tv.sort)});
    seq.lhs = rename_formula(ax.lhs, sa, ra);
    seq.rhs = rename_formula(ax.rhs, sa, ra);
    u.axioms.push_back(std::move(seq));
  }
  for (const auto& ax : b.axioms) {
    TheorySequent seq;
    for (const auto& tv : ax.context)
      seq.context.push_back(TypedVar{tv.name, sb.at(tv.sort)});
    seq.lhs = rename_formula(ax.lhs, sb, rb);
    seq.rhs = rename_formula(ax.rhs, sb, rb);
    u.axioms.push_back(std::move(seq));
  }
  return u;
}

}  // namespace framecat
