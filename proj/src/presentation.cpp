#include "framecat/presentation.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>
#include <unordered_set>

namespace framecat {

// ---------------------------------------------------------------------------
// MeetTerm / Dnf

MeetTerm MeetTerm::of(std::vector<GenId> gs) {
  std::sort(gs.begin(), gs.end());
  gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
  return MeetTerm{std::move(gs)};
}

MeetTerm MeetTerm::meet(const MeetTerm& other) const {
  std::vector<GenId> out;
  out.reserve(gens.size() + other.gens.size());
  std::set_union(gens.begin(), gens.end(), other.gens.begin(), other.gens.end(),
                 std::back_inserter(out));
  return MeetTerm{std::move(out)};
}

bool MeetTerm::subsumes(const MeetTerm& other) const {
  return std::includes(other.gens.begin(), other.gens.end(), gens.begin(),
                       gens.end());
}

void Dnf::normalize() {
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  std::vector<MeetTerm> keep;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < terms.size() && !redundant; ++j) {
      if (i == j) continue;
      // terms[j] subsumes terms[i]: drop terms[i]; ties broken by order.
      if (terms[j].subsumes(terms[i]) && !(terms[i] == terms[j])) redundant = true;
    }
    if (!redundant) keep.push_back(terms[i]);
  }
  terms = std::move(keep);
}

Dnf Dnf::join(const Dnf& other) const {
  Dnf out;
  out.terms = terms;
  out.terms.insert(out.terms.end(), other.terms.begin(), other.terms.end());
  out.normalize();
  return out;
}

Dnf Dnf::meet(const Dnf& other) const {
  Dnf out;
  out.terms.reserve(terms.size() * other.terms.size());
  for (const auto& a : terms)
    for (const auto& b : other.terms) out.terms.push_back(a.meet(b));
  out.normalize();
  return out;
}

// ---------------------------------------------------------------------------
// Point

bool Point::contains(const MeetTerm& t) const {
  for (GenId g : t.gens)
    if (!get(g)) return false;
  return true;
}

bool Point::satisfies(const Dnf& d) const {
  for (const auto& t : d.terms)
    if (contains(t)) return true;
  return false;
}

bool Point::satisfies(const Sequent& s) const {
  return !contains(s.lhs) || satisfies(s.rhs);
}

int Point::popcount() const {
  int n = 0;
  for (auto w : words) n += std::popcount(w);
  return n;
}

bool Point::operator<(const Point& o) const {
  for (std::size_t i = words.size(); i-- > 0;) {
    if (words[i] != o.words[i]) return words[i] < o.words[i];
  }
  return false;
}

// ---------------------------------------------------------------------------
// Presentation

GenId Presentation::add_generator(Generator g) {
  if (by_id_.count(g.id))
    throw PresentationError("duplicate generator id: " + g.id);
  GenId idx = static_cast<GenId>(generators.size());
  by_id_.emplace(g.id, idx);
  generators.push_back(std::move(g));
  return idx;
}

GenId Presentation::add_generator(const std::string& id,
                                  const std::string& display,
                                  std::map<std::string, std::string> tags) {
  return add_generator(Generator{id, display, std::move(tags)});
}

bool Presentation::has_generator(const std::string& id) const {
  return by_id_.count(id) != 0;
}

GenId Presentation::gen(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end())
    throw PresentationError("unknown generator: " + id);
  return it->second;
}

void Presentation::add_relation(Sequent s) {
  auto check = [&](GenId g) {
    if (g < 0 || g >= size())
      throw PresentationError("relation mentions undeclared generator index " +
                              std::to_string(g));
  };
  for (GenId g : s.lhs.gens) check(g);
  for (const auto& t : s.rhs.terms)
    for (GenId g : t.gens) check(g);
  s.rhs.normalize();
  relations.push_back(std::move(s));
}

std::string Presentation::show(const MeetTerm& t) const {
  if (t.is_top()) return "true";
  std::string out;
  for (std::size_t i = 0; i < t.gens.size(); ++i) {
    if (i) out += " & ";
    out += generators[t.gens[i]].display;
  }
  return out;
}

std::string Presentation::show(const Dnf& d) const {
  if (d.is_bottom()) return "false";
  std::string out;
  for (std::size_t i = 0; i < d.terms.size(); ++i) {
    if (i) out += " | ";
    bool paren = d.terms.size() > 1 && d.terms[i].gens.size() > 1;
    if (paren) out += "(";
    out += show(d.terms[i]);
    if (paren) out += ")";
  }
  return out;
}

std::string Presentation::show(const Sequent& s) const {
  return show(s.lhs) + " |- " + show(s.rhs);
}

std::string Presentation::show(const Point& p) const {
  std::string out = "{";
  bool first = true;
  for (int g = 0; g < size(); ++g) {
    if (!p.get(g)) continue;
    if (!first) out += ", ";
    out += generators[g].display;
    first = false;
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Point search. A single backtracking engine serves both full enumeration and
// countermodel search; it propagates relation heads, contrapositives and
// blocked meets (terms that may not become wholly true) to a fixpoint before
// branching on the lowest unknown generator.

namespace {

enum : signed char { kUnknown = 0, kTrue = 1, kFalse = -1 };

struct Search {
  const Presentation& pres;
  std::vector<MeetTerm> blocked;  // each must not be wholly true
  std::vector<signed char> val;
  std::size_t node_cap;
  std::size_t nodes = 0;

  // Occurrence lists: generator -> constraint ids. Constraint ids below
  // n_rel are relations; the rest index blocked meets.
  std::vector<std::vector<int>> occ;
  std::vector<char> queued;
  std::vector<int> queue;
  bool indexed = false;

  Search(const Presentation& p, std::size_t cap)
      : pres(p), val(p.generators.size(), kUnknown), node_cap(cap) {}

  void build_index() {
    int n_rel = static_cast<int>(pres.relations.size());
    int n_all = n_rel + static_cast<int>(blocked.size());
    occ.assign(pres.generators.size(), {});
    auto note = [&](GenId g, int c) {
      if (occ[g].empty() || occ[g].back() != c) occ[g].push_back(c);
    };
    for (int r = 0; r < n_rel; ++r) {
      for (GenId g : pres.relations[r].lhs.gens) note(g, r);
      for (const auto& t : pres.relations[r].rhs.terms)
        for (GenId g : t.gens) note(g, r);
    }
    for (std::size_t b = 0; b < blocked.size(); ++b)
      for (GenId g : blocked[b].gens) note(g, n_rel + static_cast<int>(b));
    queued.assign(n_all, 0);
    queue.clear();
    indexed = true;
  }

  bool term_false(const MeetTerm& t) const {
    for (GenId g : t.gens)
      if (val[g] == kFalse) return true;
    return false;
  }
  bool term_true(const MeetTerm& t) const {
    for (GenId g : t.gens)
      if (val[g] != kTrue) return false;
    return true;
  }

  void enqueue(int c) {
    if (!queued[c]) {
      queued[c] = 1;
      queue.push_back(c);
    }
  }
  void enqueue_all() {
    for (int c = 0; c < static_cast<int>(queued.size()); ++c) enqueue(c);
  }
  void touch(GenId g) {
    for (int c : occ[g]) enqueue(c);
  }

  // Returns false on conflict. Assignments ripple through the occurrence
  // lists, so only touched constraints are re-examined.
  bool propagate() {
    int n_rel = static_cast<int>(pres.relations.size());
    while (!queue.empty()) {
      int c = queue.back();
      queue.pop_back();
      queued[c] = 0;
      if (c < n_rel) {
        const auto& rel = pres.relations[c];
        int lhs_unknown = -1, lhs_unknown_count = 0;
        bool lhs_false = false;
        for (GenId g : rel.lhs.gens) {
          if (val[g] == kFalse) { lhs_false = true; break; }
          if (val[g] == kUnknown) { ++lhs_unknown_count; lhs_unknown = g; }
        }
        if (lhs_false) continue;
        int live = 0;
        const MeetTerm* live_term = nullptr;
        bool satisfied = false;
        for (const auto& t : rel.rhs.terms) {
          if (term_false(t)) continue;
          ++live;
          live_term = &t;
          if (term_true(t)) { satisfied = true; break; }
        }
        if (satisfied) continue;
        if (lhs_unknown_count == 0) {
          if (live == 0) return false;  // fired rule with dead head
          if (live == 1) {
            for (GenId g : live_term->gens) {
              if (val[g] == kUnknown) {
                val[g] = kTrue;
                touch(g);
              }
            }
          }
        } else if (lhs_unknown_count == 1 && live == 0) {
          val[lhs_unknown] = kFalse;  // head dead: the body must not fire
          touch(lhs_unknown);
        }
      } else {
        const auto& t = blocked[c - n_rel];
        int unknown = -1, unknown_count = 0;
        bool dead = false;
        for (GenId g : t.gens) {
          if (val[g] == kFalse) { dead = true; break; }
          if (val[g] == kUnknown) { ++unknown_count; unknown = g; }
        }
        if (dead) continue;
        if (unknown_count == 0) return false;  // blocked meet became true
        if (unknown_count == 1) {
          val[unknown] = kFalse;
          touch(unknown);
        }
      }
    }
    return true;
  }

  bool consistent_total(Point& out) const {
    out = Point(pres.size());
    for (int g = 0; g < pres.size(); ++g) out.set(g, val[g] == kTrue);
    for (const auto& rel : pres.relations)
      if (!out.satisfies(rel)) return false;
    for (const auto& t : blocked)
      if (out.contains(t)) return false;
    return true;
  }

  bool dfs(const std::function<bool(const Point&)>& on_point) {
    if (++nodes > node_cap)
      throw SaturationLimitError("point search exceeded node cap");
    auto saved = val;
    if (!propagate()) {
      val = std::move(saved);
      queue.clear();
      std::fill(queued.begin(), queued.end(), 0);
      return true;
    }
    int pick = -1;
    for (int g = 0; g < pres.size(); ++g)
      if (val[g] == kUnknown) { pick = g; break; }
    if (pick < 0) {
      Point pt;
      bool ok = consistent_total(pt);
      bool keep_going = !ok || on_point(pt);
      val = std::move(saved);
      return keep_going;
    }
    for (signed char v : {kFalse, kTrue}) {
      auto snapshot = val;
      val[pick] = v;
      touch(pick);
      bool keep_going = dfs(on_point);
      val = std::move(snapshot);
      if (!keep_going) { val = std::move(saved); return false; }
    }
    val = std::move(saved);
    return true;
  }

  // Depth-first over unknowns; on_point returns false to stop the search.
  bool run(const std::function<bool(const Point&)>& on_point) {
    if (!indexed) build_index();
    enqueue_all();
    return dfs(on_point);
  }

  // Satisfiability mode: branch only over live disjuncts of fired relations.
  // Once nothing is active, completing every unknown with false is a point.
  bool find_one(Point& out) {
    if (!indexed) build_index();
    enqueue_all();
    return sat_dfs(out);
  }

  bool sat_dfs(Point& out) {
    if (++nodes > node_cap)
      throw SaturationLimitError("point search exceeded node cap");
    auto saved = val;
    if (!propagate()) {
      val = std::move(saved);
      queue.clear();
      std::fill(queued.begin(), queued.end(), 0);
      return false;
    }
    const Sequent* active = nullptr;
    for (const auto& rel : pres.relations) {
      bool lhs_true = true;
      for (GenId g : rel.lhs.gens)
        if (val[g] != kTrue) { lhs_true = false; break; }
      if (!lhs_true) continue;
      bool satisfied = false;
      for (const auto& t : rel.rhs.terms)
        if (term_true(t)) { satisfied = true; break; }
      if (!satisfied) { active = &rel; break; }
    }
    if (!active) {
      Point pt(pres.size());
      for (int g = 0; g < pres.size(); ++g) pt.set(g, val[g] == kTrue);
      bool ok = true;
      for (const auto& rel : pres.relations)
        if (!pt.satisfies(rel)) { ok = false; break; }
      if (ok)
        for (const auto& t : blocked)
          if (pt.contains(t)) { ok = false; break; }
      val = std::move(saved);
      if (ok) out = pt;
      return ok;
    }
    for (const auto& t : active->rhs.terms) {
      if (term_false(t)) continue;
      auto snapshot = val;
      for (GenId g : t.gens) {
        if (val[g] == kUnknown) {
          val[g] = kTrue;
          touch(g);
        }
      }
      if (sat_dfs(out)) { val = std::move(saved); return true; }
      val = std::move(snapshot);
    }
    val = std::move(saved);
    return false;
  }
};

}  // namespace

std::vector<Point> enumerate_points(const Presentation& pres,
                                    std::size_t limit) {
  std::vector<Point> out;
  Search search(pres, std::size_t(1) << 40);
  search.run([&](const Point& pt) {
    out.push_back(pt);
    if (out.size() > limit)
      throw SaturationLimitError("point enumeration exceeded limit");
    return true;
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool entails(const Presentation& pres, const Sequent& seq,
             Point* countermodel) {
  for (GenId g : seq.lhs.gens)
    if (g < 0 || g >= pres.size())
      throw PresentationError("sequent mentions undeclared generator");
  for (const auto& t : seq.rhs.terms)
    for (GenId g : t.gens)
      if (g < 0 || g >= pres.size())
        throw PresentationError("sequent mentions undeclared generator");
  Search search(pres, std::size_t(1) << 40);
  for (GenId g : seq.lhs.gens) search.val[g] = kTrue;
  search.blocked = seq.rhs.terms;
  Point refutation;
  if (!search.find_one(refutation)) return true;
  if (countermodel) *countermodel = refutation;
  return false;
}

// ---------------------------------------------------------------------------
// Forward-chaining saturation (the proof-theoretic route).

namespace {

struct Saturator {
  const Presentation& pres;
  const Sequent& goal;
  std::size_t cap;
  std::size_t visited = 0;
  std::unordered_map<std::string, bool> memo;

  Saturator(const Presentation& p, const Sequent& g, std::size_t c)
      : pres(p), goal(g), cap(c) {}

  static std::string key(const std::vector<bool>& facts) {
    std::string k(facts.size(), '0');
    for (std::size_t i = 0; i < facts.size(); ++i)
      if (facts[i]) k[i] = '1';
    return k;
  }

  bool holds(const std::vector<bool>& facts, const MeetTerm& t) const {
    for (GenId g : t.gens)
      if (!facts[g]) return false;
    return true;
  }

  bool derive(std::vector<bool> facts) {
    if (++visited > cap)
      throw SaturationLimitError("saturation exceeded derived-fact cap");
    // Deterministic closure under single-headed rules first.
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& t : goal.rhs.terms)
        if (holds(facts, t)) return true;
      for (const auto& rel : pres.relations) {
        if (!holds(facts, rel.lhs)) continue;
        if (rel.rhs.is_bottom()) return true;  // inconsistent branch closes
        bool satisfied = false;
        for (const auto& t : rel.rhs.terms)
          if (holds(facts, t)) { satisfied = true; break; }
        if (satisfied) continue;
        if (rel.rhs.terms.size() == 1) {
          for (GenId g : rel.rhs.terms[0].gens) {
            if (!facts[g]) { facts[g] = true; changed = true; }
          }
        }
      }
    }
    for (const auto& t : goal.rhs.terms)
      if (holds(facts, t)) return true;
    auto k = key(facts);
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    // First unsatisfied disjunctive rule drives the case split.
    for (const auto& rel : pres.relations) {
      if (!holds(facts, rel.lhs)) continue;
      bool satisfied = false;
      for (const auto& t : rel.rhs.terms)
        if (holds(facts, t)) { satisfied = true; break; }
      if (satisfied) continue;
      bool all = true;
      for (const auto& t : rel.rhs.terms) {
        auto branch = facts;
        for (GenId g : t.gens) branch[g] = true;
        if (!derive(std::move(branch))) { all = false; break; }
      }
      memo.emplace(std::move(k), all);
      return all;
    }
    memo.emplace(std::move(k), false);  // saturated, goal not reached
    return false;
  }
};

}  // namespace

bool saturate_derives(const Presentation& pres, const Sequent& seq,
                      std::size_t fact_cap) {
  Saturator s(pres, seq, fact_cap);
  std::vector<bool> facts(pres.generators.size(), false);
  for (GenId g : seq.lhs.gens) facts[g] = true;
  return s.derive(std::move(facts));
}

Presentation add_relations(const Presentation& pres,
                           const std::vector<Sequent>& extra) {
  Presentation out = pres;
  for (const auto& s : extra) out.add_relation(s);
  return out;
}

// ---------------------------------------------------------------------------
// Frame homomorphisms

FrameHomSpec make_hom(std::shared_ptr<const Presentation> source,
                      std::shared_ptr<const Presentation> target,
                      std::vector<Dnf> map) {
  if (map.size() != source->generators.size())
    throw PresentationError("hom map must cover every source generator");
  for (auto& d : map) {
    for (const auto& t : d.terms)
      for (GenId g : t.gens)
        if (g < 0 || g >= target->size())
          throw PresentationError("hom map mentions undeclared target generator");
    d.normalize();
  }
  return FrameHomSpec{std::move(source), std::move(target), std::move(map), false};
}

FrameHomSpec make_hom_by_id(
    std::shared_ptr<const Presentation> source,
    std::shared_ptr<const Presentation> target,
    const std::function<Dnf(const Presentation& tgt, const Generator& g)>& f) {
  std::vector<Dnf> map;
  map.reserve(source->generators.size());
  for (const auto& g : source->generators) map.push_back(f(*target, g));
  return make_hom(std::move(source), std::move(target), std::move(map));
}

Dnf apply_hom(const FrameHomSpec& hom, const MeetTerm& t) {
  Dnf acc = Dnf::top();
  for (GenId g : t.gens) acc = acc.meet(hom.map[g]);
  return acc;
}

Dnf apply_hom(const FrameHomSpec& hom, const Dnf& d) {
  Dnf acc = Dnf::bottom();
  for (const auto& t : d.terms) acc = acc.join(apply_hom(hom, t));
  return acc;
}

HomCheckResult check_frame_hom(FrameHomSpec& hom) {
  HomCheckResult res;
  for (std::size_t i = 0; i < hom.source->relations.size(); ++i) {
    const auto& rel = hom.source->relations[i];
    Dnf lhs_image = apply_hom(hom, rel.lhs);
    Dnf rhs_image = apply_hom(hom, rel.rhs);
    for (const auto& t : lhs_image.terms) {
      Sequent image{t, rhs_image, rel.label};
      Point counter;
      if (!entails(*hom.target, image, &counter)) {
        res.ok = false;
        res.failed_relation = static_cast<int>(i);
        res.failed_image = image;
        res.countermodel = counter;
        hom.verified = false;
        return res;
      }
    }
  }
  res.ok = true;
  hom.verified = true;
  return res;
}

Point point_pushforward(const FrameHomSpec& hom, const Point& pt) {
  if (!hom.verified)
    throw PresentationError("point_pushforward requires a verified hom");
  Point out(hom.source->size());
  for (int g = 0; g < hom.source->size(); ++g)
    out.set(g, pt.satisfies(hom.map[g]));
  return out;
}

FrameHomSpec compose_homs(const FrameHomSpec& f, const FrameHomSpec& g) {
  if (!same_generators(*f.target, *g.source))
    throw PresentationError("compose_homs: middle presentations disagree");
  std::vector<Dnf> map;
  map.reserve(f.map.size());
  for (const auto& d : f.map) map.push_back(apply_hom(g, d));
  FrameHomSpec out = make_hom(f.source, g.target, std::move(map));
  out.verified = f.verified && g.verified;
  return out;
}

bool same_generators(const Presentation& a, const Presentation& b) {
  if (a.generators.size() != b.generators.size()) return false;
  for (std::size_t i = 0; i < a.generators.size(); ++i)
    if (a.generators[i].id != b.generators[i].id) return false;
  return true;
}

namespace {

bool equal_in(const Presentation& pres, const Dnf& a, const Dnf& b) {
  for (const auto& t : a.terms)
    if (!entails(pres, Sequent{t, b, ""})) return false;
  for (const auto& t : b.terms)
    if (!entails(pres, Sequent{t, a, ""})) return false;
  return true;
}

}  // namespace

bool iso_check(const FrameHomSpec& f, const FrameHomSpec& g) {
  if (!same_generators(*f.target, *g.source) ||
      !same_generators(*g.target, *f.source))
    throw PresentationError("iso_check: presentations do not match up");
  FrameHomSpec fg = compose_homs(f, g);  // endo on f.source
  for (int x = 0; x < f.source->size(); ++x)
    if (!equal_in(*f.source, fg.map[x], Dnf::gen(x))) return false;
  FrameHomSpec gf = compose_homs(g, f);  // endo on g.source
  for (int x = 0; x < g.source->size(); ++x)
    if (!equal_in(*g.source, gf.map[x], Dnf::gen(x))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Stock constructions

Presentation canonical_presentation(const std::vector<std::string>& names,
                                    Orientation orientation) {
  Presentation pres;
  pres.orientation = orientation;
  for (const auto& x : names)
    pres.add_generator("eq:" + x, "[=" + x + "]", {{"kind", "eq"}, {"elem", x}});
  int n = pres.size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      pres.add_relation(Sequent{MeetTerm::of({i, j}), Dnf::bottom(),
                                "singleton"});
  Dnf cover;
  for (int i = 0; i < n; ++i) cover.terms.push_back(MeetTerm::single(i));
  cover.normalize();
  pres.add_relation(Sequent{MeetTerm::top(), cover, "cover"});
  return pres;
}

Generator default_copy_namer(int copy, const Generator& g) {
  Generator out = g;
  out.id = g.id + "<" + std::to_string(copy) + ">";
  out.display = g.display + "<" + std::to_string(copy) + ">";
  out.tags["copy"] = std::to_string(copy);
  return out;
}

Presentation relative_product(const Presentation& base,
                              const std::vector<FiberExtension>& fibers,
                              const CopyNamer& namer) {
  Presentation out = base;
  int copy = 0;
  for (const auto& fib : fibers) {
    ++copy;
    std::vector<GenId> remap(base.size() + fib.extra_gens.size());
    for (int g = 0; g < base.size(); ++g) remap[g] = g;
    for (std::size_t k = 0; k < fib.extra_gens.size(); ++k) {
      Generator named = namer(copy, fib.extra_gens[k]);
      if (out.has_generator(named.id))
        throw PresentationError("relative_product: name collision on " +
                                named.id);
      remap[base.size() + k] = out.add_generator(std::move(named));
    }
    for (const auto& rel : fib.extra_rels) {
      Sequent s;
      s.label = rel.label;
      std::vector<GenId> lhs;
      for (GenId g : rel.lhs.gens) lhs.push_back(remap.at(g));
      s.lhs = MeetTerm::of(std::move(lhs));
      for (const auto& t : rel.rhs.terms) {
        std::vector<GenId> gs;
        for (GenId g : t.gens) gs.push_back(remap.at(g));
        s.rhs.terms.push_back(MeetTerm::of(std::move(gs)));
      }
      s.rhs.normalize();
      out.add_relation(std::move(s));
    }
  }
  return out;
}

SpanData SpanData::identity(int n) {
  SpanData s;
  s.n_base = s.n_mid = s.n_big = n;
  s.q.resize(n);
  s.incl.resize(n);
  for (int i = 0; i < n; ++i) s.q[i] = s.incl[i] = i;
  return s;
}

void SpanData::validate() const {
  if (static_cast<int>(q.size()) != n_mid ||
      static_cast<int>(incl.size()) != n_mid)
    throw PresentationError("span: table sizes disagree with n_mid");
  std::vector<bool> hit(n_base, false);
  for (int v : q) {
    if (v < 0 || v >= n_base) throw PresentationError("span: q out of range");
    hit[v] = true;
  }
  for (bool h : hit)
    if (!h) throw PresentationError("span: q is not onto the base");
  std::vector<bool> used(n_big, false);
  for (int v : incl) {
    if (v < 0 || v >= n_big)
      throw PresentationError("span: inclusion out of range");
    if (used[v]) throw PresentationError("span: inclusion is not one-to-one");
    used[v] = true;
  }
}

Presentation expand_presentation(const Presentation& pres,
                                 const SpanData& gen_span,
                                 const SpanData& rel_span) {
  gen_span.validate();
  rel_span.validate();
  if (gen_span.n_base != pres.size())
    throw PresentationError("gen span base does not match the presentation");
  if (rel_span.n_base != static_cast<int>(pres.relations.size()))
    throw PresentationError("rel span base does not match the presentation");

  // big index -> mid index (or -1 for a dead generator)
  std::vector<int> mid_of_big(gen_span.n_big, -1);
  for (int m = 0; m < gen_span.n_mid; ++m) mid_of_big[gen_span.incl[m]] = m;

  Presentation out;
  out.orientation = pres.orientation;
  for (int b = 0; b < gen_span.n_big; ++b) {
    int m = mid_of_big[b];
    if (m >= 0) {
      const Generator& g0 = pres.generators[gen_span.q[m]];
      out.add_generator("dup:" + g0.id + ":" + std::to_string(b),
                        g0.display + "#" + std::to_string(b),
                        {{"kind", "dup"}, {"of", g0.id}});
    } else {
      out.add_generator("dead:" + std::to_string(b),
                        "dead#" + std::to_string(b), {{"kind", "dead"}});
    }
  }

  // Substitution of an original generator by the join of its duplicates.
  std::vector<Dnf> subst(pres.size(), Dnf::bottom());
  for (int m = 0; m < gen_span.n_mid; ++m) {
    subst[gen_span.q[m]] =
        subst[gen_span.q[m]].join(Dnf::gen(gen_span.incl[m]));
  }
  auto subst_term = [&](const MeetTerm& t) {
    Dnf acc = Dnf::top();
    for (GenId g : t.gens) acc = acc.meet(subst[g]);
    return acc;
  };
  auto translate = [&](const Sequent& rel, std::vector<Sequent>& sink) {
    Dnf lhs = subst_term(rel.lhs);
    Dnf rhs = Dnf::bottom();
    for (const auto& t : rel.rhs.terms) rhs = rhs.join(subst_term(t));
    for (const auto& t : lhs.terms) sink.push_back(Sequent{t, rhs, rel.label});
  };

  std::vector<Sequent> rels;
  std::vector<bool> is_mid_rel(rel_span.n_big, false);
  for (int m = 0; m < rel_span.n_mid; ++m) is_mid_rel[rel_span.incl[m]] = true;
  std::vector<int> mid_rel_of_big(rel_span.n_big, -1);
  for (int m = 0; m < rel_span.n_mid; ++m)
    mid_rel_of_big[rel_span.incl[m]] = m;
  for (int b = 0; b < rel_span.n_big; ++b) {
    if (is_mid_rel[b]) {
      translate(pres.relations[rel_span.q[mid_rel_of_big[b]]], rels);
    } else {
      rels.push_back(Sequent{MeetTerm::top(), Dnf::top(), "padding"});
    }
  }
  // Duplicates identified, dead generators annihilated.
  for (int b = 0; b < gen_span.n_big; ++b) {
    int m = mid_of_big[b];
    if (m < 0) {
      rels.push_back(
          Sequent{MeetTerm::single(b), Dnf::bottom(), "dead generator"});
      continue;
    }
    for (int b2 = 0; b2 < gen_span.n_big; ++b2) {
      int m2 = mid_of_big[b2];
      if (b2 == b || m2 < 0) continue;
      if (gen_span.q[m] == gen_span.q[m2])
        rels.push_back(
            Sequent{MeetTerm::single(b), Dnf::gen(b2), "duplicate"});
    }
  }
  for (auto& r : rels) out.add_relation(std::move(r));
  return out;
}

Point expand_point(const Presentation& pres, const SpanData& gen_span,
                   const Presentation& expanded, const Point& pt) {
  (void)pres;
  Point out(expanded.size());
  for (int m = 0; m < gen_span.n_mid; ++m)
    out.set(gen_span.incl[m], pt.get(gen_span.q[m]));
  return out;
}

}  // namespace framecat
