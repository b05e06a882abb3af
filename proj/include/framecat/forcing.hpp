// The forcing locale of (fiberwise) partial surjections, the representing
// anafunctor of an arbitrary bundle model, and the universal-property
// verification at finite scale.
#ifndef FRAMECAT_FORCING_HPP
#define FRAMECAT_FORCING_HPP

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "framecat/classifier.hpp"
#include "framecat/decode.hpp"
#include "framecat/fincat.hpp"
#include "framecat/oracle.hpp"
#include "framecat/presentation.hpp"

namespace framecat {

struct ForcingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Generators [f(n)=x]; functionality compiled by decidable equality on the
// target tokens, one surjectivity axiom per target.
struct PartialSurjectionLocale {
  std::vector<std::string> source;  // M
  std::vector<std::string> target;  // X
  Presentation pres;

  GenId graph_gen(int n, int x) const {
    return n * static_cast<int>(target.size()) + x;
  }
};

PartialSurjectionLocale gen_forcing_presentation(
    std::vector<std::string> source, std::vector<std::string> target);

// True iff the meet encodes a finite partial function that extends to a
// partial surjection (at finite scale the leftover source must cover the
// missed targets); computed both combinatorially and by point satisfiability,
// which are asserted equal.
bool basis_open_check(const PartialSurjectionLocale& locale,
                      const MeetTerm& meet);

// ---------------------------------------------------------------------------
// Fiberwise forcing over a finite category and the representing anafunctor.

// Presentation of the locale of pairs (object h, per-sort partial surjection
// from the parameters onto the fibers of a bundle model at h).
struct FiberwiseForcing {
  Presentation pres;
  // Generator ids: "at:<h>" and "f:<sort>:<n>:<element>".
  std::string at_id(int h) const { return "at:" + std::to_string(h); }
  std::string f_id(const std::string& sort, const std::string& n,
                   int elem) const {
    return "f:" + sort + ":" + n + ":" + std::to_string(elem);
  }
};

FiberwiseForcing gen_fiberwise_forcing(const Theory& theory,
                                       const ParameterSet& p,
                                       const FiniteCategory& h,
                                       const BundleModel& m);

struct RepresentingAnafunctor {
  FiberwiseForcing forcing;
  std::vector<Point> mid_objects;  // points of the forcing presentation
  FiniteCategory mid;
  InternalFunctor left;   // mid -> H (fully faithful, surjective on objects)
  InternalFunctor right;  // mid -> point category of the classifier
  std::vector<std::tuple<int, int, int>> mid_arrows;  // (src obj, tgt obj, H arrow)
};

// Requires every fiber of every sort to have at most |P| elements; reports
// the offending fiber otherwise. When use_core is set the right leg lands in
// the core point category (the base must then be a groupoid).
RepresentingAnafunctor build_representing_anafunctor(
    const ClassifierBundle& bundle, const PointCategory& pc,
    const FiniteCategory& h, const BundleModel& m, bool use_core = false);

struct PullbackIsoWitness {
  bool ok = false;
  std::vector<std::vector<int>> iso;  // per sort, E' elements -> E'' elements
  std::string detail;
};

// Realizes E' ~ E'' between the two pullbacks over the middle category by
// backtracking search over fiber bijections.
PullbackIsoWitness verify_pullback_iso(const ClassifierBundle& bundle,
                                       const PointCategory& pc,
                                       const FiniteCategory& h,
                                       const BundleModel& m,
                                       const RepresentingAnafunctor& anaf);

struct ZetaReport {
  struct Entry {
    std::string check;
    bool pass = false;
    std::string detail;
  };
  std::vector<Entry> entries;
  bool all_pass() const;
};

// (a) transformations between functors into the point category biject with
// model homomorphisms of the pulled-back generic models; (b) every bundle
// model with small fibers is recovered from its representing anafunctor.
// With use_core set, functors land in the core groupoid and homs are
// replaced by isomorphisms (the base must be a groupoid for part (b)).
ZetaReport verify_zeta(const ClassifierBundle& bundle,
                       const FiniteCategory& k, bool use_core = false);

// One instance of the essential-surjectivity check: the pullback of the
// generic model along the representing anafunctor of m descends to a model
// isomorphic to m.
bool zeta_recovers(const ClassifierBundle& bundle, const PointCategory& pc,
                   const BundleModel& e, const FiniteCategory& k,
                   const BundleModel& m, bool use_core = false,
                   std::string* detail = nullptr);

// Descends a bundle model along a surjective weak equivalence (per-sort
// descent plus the image of every relation tuple).
BundleModel descend_bundle_model(const Theory& theory,
                                 const FiniteCategory& dom,
                                 const FiniteCategory& cod,
                                 const InternalFunctor& phi,
                                 const BundleModel& m);

// The generic model as a bundle model over the point category.
BundleModel generic_as_bundle_model(const GenericPointModel& gm);

}  // namespace framecat

#endif  // FRAMECAT_FORCING_HPP
