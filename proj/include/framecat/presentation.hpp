// Finite frame presentations: generators, sequent relations, points,
// entailment, frame homomorphisms and the standard constructions on them.
#ifndef FRAMECAT_PRESENTATION_HPP
#define FRAMECAT_PRESENTATION_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace framecat {

using GenId = int;

struct Generator {
  std::string id;       // interned symbol, unique within a presentation
  std::string display;  // pretty form, e.g. "[0 ~X 1]"
  std::map<std::string, std::string> tags;
};

// Finite meet of generators; the empty meet is top.
struct MeetTerm {
  std::vector<GenId> gens;  // sorted, unique

  static MeetTerm top() { return MeetTerm{}; }
  static MeetTerm single(GenId g) { return MeetTerm{{g}}; }
  static MeetTerm of(std::vector<GenId> gs);

  bool is_top() const { return gens.empty(); }
  MeetTerm meet(const MeetTerm& other) const;
  // true iff this term's generator set is contained in other's
  // (i.e. this is the weaker condition and absorbs other in a join).
  bool subsumes(const MeetTerm& other) const;

  bool operator==(const MeetTerm& other) const { return gens == other.gens; }
  bool operator<(const MeetTerm& other) const { return gens < other.gens; }
};

// Finite join of meet terms in antichain normal form; the empty join is bottom.
struct Dnf {
  std::vector<MeetTerm> terms;  // sorted, no term subsumes another

  static Dnf bottom() { return Dnf{}; }
  static Dnf top() { return Dnf{{MeetTerm::top()}}; }
  static Dnf single(MeetTerm t) { return Dnf{{std::move(t)}}; }
  static Dnf gen(GenId g) { return single(MeetTerm::single(g)); }

  bool is_bottom() const { return terms.empty(); }
  bool is_top() const { return terms.size() == 1 && terms[0].is_top(); }

  Dnf join(const Dnf& other) const;
  Dnf meet(const Dnf& other) const;
  void normalize();

  bool operator==(const Dnf& other) const { return terms == other.terms; }
};

struct Sequent {
  MeetTerm lhs;
  Dnf rhs;
  std::string label;  // diagnostic only, not serialized

  bool operator==(const Sequent& o) const { return lhs == o.lhs && rhs == o.rhs; }
};

enum class Orientation { Open, Closed };

// Subset of generators, ordered numerically with generator 0 as the least
// significant bit.
struct Point {
  int width = 0;
  std::vector<std::uint64_t> words;

  explicit Point(int n = 0) : width(n), words((n + 63) / 64, 0) {}

  bool get(GenId g) const { return (words[g >> 6] >> (g & 63)) & 1; }
  void set(GenId g, bool v) {
    if (v)
      words[g >> 6] |= std::uint64_t(1) << (g & 63);
    else
      words[g >> 6] &= ~(std::uint64_t(1) << (g & 63));
  }
  bool contains(const MeetTerm& t) const;
  bool satisfies(const Dnf& d) const;
  bool satisfies(const Sequent& s) const;
  int popcount() const;

  bool operator==(const Point& o) const { return words == o.words; }
  bool operator<(const Point& o) const;  // numeric on the bitmask
};

struct PresentationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SaturationLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Presentation {
  std::vector<Generator> generators;
  std::vector<Sequent> relations;
  Orientation orientation = Orientation::Open;

  GenId add_generator(Generator g);
  GenId add_generator(const std::string& id, const std::string& display,
                      std::map<std::string, std::string> tags = {});
  bool has_generator(const std::string& id) const;
  GenId gen(const std::string& id) const;  // throws PresentationError if unknown
  void add_relation(Sequent s);            // validates generator range

  int size() const { return static_cast<int>(generators.size()); }
  std::string show(const MeetTerm& t) const;
  std::string show(const Dnf& d) const;
  std::string show(const Sequent& s) const;
  std::string show(const Point& p) const;

 private:
  std::unordered_map<std::string, GenId> by_id_;
};

// All satisfying subsets in ascending bitmask order.
std::vector<Point> enumerate_points(const Presentation& pres,
                                    std::size_t limit = 1u << 22);

// Semantic entailment: seq holds in every point of pres. Decided by a
// propagating countermodel search; the refuting point is reported when
// entailment fails.
bool entails(const Presentation& pres, const Sequent& seq,
             Point* countermodel = nullptr);

// Independent proof-theoretic route: cut-free forward chaining with the
// relations as rules and case splits on disjunctive heads. Used to
// cross-check `entails`; throws SaturationLimitError beyond the fact cap.
bool saturate_derives(const Presentation& pres, const Sequent& seq,
                      std::size_t fact_cap = 1000000);

Presentation add_relations(const Presentation& pres,
                           const std::vector<Sequent>& extra);

// ---------------------------------------------------------------------------
// Frame homomorphisms between presented frames.

struct FrameHomSpec {
  std::shared_ptr<const Presentation> source;
  std::shared_ptr<const Presentation> target;
  std::vector<Dnf> map;  // one Dnf over target per source generator
  bool verified = false;
};

struct HomCheckResult {
  bool ok = false;
  int failed_relation = -1;    // index into source->relations
  Sequent failed_image;        // over the target
  std::optional<Point> countermodel;
};

FrameHomSpec make_hom(std::shared_ptr<const Presentation> source,
                      std::shared_ptr<const Presentation> target,
                      std::vector<Dnf> map);

// Builds the map by generator id: every source generator must be assigned.
FrameHomSpec make_hom_by_id(
    std::shared_ptr<const Presentation> source,
    std::shared_ptr<const Presentation> target,
    const std::function<Dnf(const Presentation& tgt, const Generator& g)>& f);

Dnf apply_hom(const FrameHomSpec& hom, const MeetTerm& t);
Dnf apply_hom(const FrameHomSpec& hom, const Dnf& d);

HomCheckResult check_frame_hom(FrameHomSpec& hom);

// Transports a point of the target back along the hom; the result satisfies
// the source relations whenever hom is verified.
Point point_pushforward(const FrameHomSpec& hom, const Point& pt);

// Substitution composite: (f then g) as frame maps, requires f.target and
// g.source to present the same frame (same generator ids).
FrameHomSpec compose_homs(const FrameHomSpec& f, const FrameHomSpec& g);

// True iff f and g are mutually inverse up to derivable equality.
bool iso_check(const FrameHomSpec& f, const FrameHomSpec& g);

bool same_generators(const Presentation& a, const Presentation& b);

// ---------------------------------------------------------------------------
// Stock constructions.

// Generators [=x] for x in X; relations [=x] /\ [=y] |- (x = y), T |- \/ [=x].
Presentation canonical_presentation(const std::vector<std::string>& names,
                                    Orientation orientation = Orientation::Open);

// A fiber extension for relative products: extra generators and relations on
// top of a shared base presentation. Relations may mention base generators by
// id and extra generators by their local ids.
struct FiberExtension {
  std::vector<Generator> extra_gens;
  std::vector<Sequent> extra_rels;  // over [base gens..., extra gens...]
};

// Renames an extra generator for its tagged copy; copy indices start at 1.
using CopyNamer = std::function<Generator(int copy_index, const Generator& g)>;

Generator default_copy_namer(int copy, const Generator& g);

// One shared copy of base plus a tagged copy of each fiber's extras; presents
// the wide pullback of the fibers over the base.
Presentation relative_product(const Presentation& base,
                              const std::vector<FiberExtension>& fibers,
                              const CopyNamer& namer = default_copy_namer);

// Span of finite index sets: mid maps onto base (q, surjective) and embeds
// into big (incl, injective).
struct SpanData {
  int n_base = 0;
  int n_mid = 0;
  int n_big = 0;
  std::vector<int> q;     // size n_mid, onto [0, n_base)
  std::vector<int> incl;  // size n_mid, one-to-one into [0, n_big)

  static SpanData identity(int n);
  void validate() const;  // throws PresentationError
};

// Re-presents pres (over gen_span.n_base generators) with gen_span.n_big
// generators: duplicated generators are forced equal, generators outside the
// middle set are forced false, and each original relation is translated by
// substituting the join of its duplicates. rel_span duplicates or pads the
// relation list the same way.
Presentation expand_presentation(const Presentation& pres,
                                 const SpanData& gen_span,
                                 const SpanData& rel_span);

// The expansion bijection: a point of pres corresponds to the
// preimage of its generator set inside the middle copy.
Point expand_point(const Presentation& pres, const SpanData& gen_span,
                   const Presentation& expanded, const Point& pt);

}  // namespace framecat

#endif  // FRAMECAT_PRESENTATION_HPP
