// Internal categories in finite sets: categories and groupoids as tables,
// functors, transformations, discrete opfibrations, sheaf actions, cores,
// descent along surjective weak equivalences, and anafunctor plumbing.
#ifndef FRAMECAT_FINCAT_HPP
#define FRAMECAT_FINCAT_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace framecat {

// Composition is stored in diagrammatic order: comp[f][g] is "f then g",
// defined exactly when tgt[f] == src[g] (and -1 otherwise).
struct FiniteCategory {
  int n_obj = 0;
  int n_arr = 0;
  std::vector<int> src, tgt;            // arrows -> objects
  std::vector<int> ident;               // objects -> arrows
  std::vector<std::vector<int>> comp;   // n_arr x n_arr, -1 off composables
  std::vector<int> inv;                 // arrows -> arrows; empty if absent

  bool has_inverse() const { return !inv.empty(); }
  int m(int f, int g) const { return comp[f][g]; }
  std::vector<int> hom(int x, int y) const;
};

struct CatViolation {
  std::string equation;
  std::vector<int> witness;
};

struct CatCheckResult {
  bool ok = true;
  std::vector<CatViolation> violations;
};

// Validates the category (and groupoid, when an inverse table is present)
// equations, reporting every violated equation with a witness tuple.
CatCheckResult check_category(const FiniteCategory& cat);

FiniteCategory terminal_category();
FiniteCategory codiscrete_groupoid(int n_obj);
FiniteCategory free_arrow_category();  // two objects, one non-identity arrow
FiniteCategory discrete_category(int n_obj);

struct InternalFunctor {
  std::vector<int> obj;  // H0 -> K0
  std::vector<int> arr;  // H1 -> K1
};

InternalFunctor identity_functor(const FiniteCategory& cat);
bool is_functor(const FiniteCategory& dom, const FiniteCategory& cod,
                const InternalFunctor& f);
InternalFunctor compose_functors(const InternalFunctor& f,
                                 const InternalFunctor& g);  // f then g
bool is_fully_faithful(const FiniteCategory& dom, const FiniteCategory& cod,
                       const InternalFunctor& f);
bool is_surjective_on_objects(const FiniteCategory& dom,
                              const FiniteCategory& cod,
                              const InternalFunctor& f);

struct InternalTransformation {
  std::vector<int> at;  // H0 -> K1
};

bool is_transformation(const FiniteCategory& dom, const FiniteCategory& cod,
                       const InternalFunctor& f, const InternalFunctor& g,
                       const InternalTransformation& a);
std::vector<InternalTransformation> enumerate_transformations(
    const FiniteCategory& dom, const FiniteCategory& cod,
    const InternalFunctor& f, const InternalFunctor& g);
std::vector<InternalFunctor> enumerate_functors(const FiniteCategory& dom,
                                                const FiniteCategory& cod);

// Wide subcategory of invertible arrows; arrows are the pairs (f, g) with
// f g = id and g f = id. Returns the groupoid together with the inclusion.
struct CoreResult {
  FiniteCategory core;
  InternalFunctor inclusion;
  std::vector<std::pair<int, int>> arrow_pairs;
};
CoreResult core(const FiniteCategory& cat);

// The category induced by an object assignment f : S -> obj(K): objects S,
// hom(a, b) = hom(f a, f b). The projection functor is fully faithful, and
// surjective on objects when f is onto.
struct InducedCategory {
  FiniteCategory cat;
  InternalFunctor proj;
  std::vector<std::tuple<int, int, int>> arrows;  // (src, tgt, K arrow)
};
InducedCategory induced_category(const FiniteCategory& k,
                                 const std::vector<int>& assignment);

// ---------------------------------------------------------------------------
// Sheaf actions and discrete opfibrations.

struct SheafAction {
  int n_elem = 0;
  std::vector<int> p;                 // elements -> H0
  std::vector<std::vector<int>> act;  // act[x][g] = beta(x, g), -1 off fibers
};

struct ActionViolation {
  std::string equation;
  std::vector<int> witness;
};
std::optional<ActionViolation> check_action(const FiniteCategory& cat,
                                            const SheafAction& a);

struct DiscreteOpfibration {
  FiniteCategory total;
  InternalFunctor proj;
  // total arrows correspond to pairs (element, base arrow)
  std::vector<std::pair<int, int>> arrow_pairs;
};

bool is_discrete_opfibration(const FiniteCategory& total,
                             const FiniteCategory& base,
                             const InternalFunctor& proj);

DiscreteOpfibration action_to_dofib(const FiniteCategory& cat,
                                    const SheafAction& a);
SheafAction dofib_to_action(const FiniteCategory& total,
                            const FiniteCategory& base,
                            const InternalFunctor& proj);

// Pullback of an action along a functor; elements of the result are the
// pairs (object of dom, element over its image).
struct PulledBackAction {
  SheafAction action;
  std::vector<std::pair<int, int>> elems;
};
PulledBackAction pullback_action(const FiniteCategory& dom,
                                 const FiniteCategory& cod,
                                 const InternalFunctor& f,
                                 const SheafAction& a);

// Component at a sheaf of the transformation a : f => g, acting by
// (x, y) -> (x, beta(y, a_x)). Returns the element map pullback(f, A) ->
// pullback(g, A) in the pair indexing of pullback_action.
std::vector<int> sheaf_transformation_component(
    const FiniteCategory& dom, const FiniteCategory& cod,
    const InternalFunctor& f, const InternalFunctor& g,
    const InternalTransformation& a, const SheafAction& sheaf);

// Descent along a fully faithful functor that is surjective on objects:
// quotients the total space by the canonical identifications and returns the
// action downstairs plus the element map realizing pullback(phi, result) ~ X.
struct DescentResult {
  SheafAction descended;                    // over the codomain
  std::vector<int> class_of;                // X elements -> descended elements
  std::vector<int> witness;                 // X elements -> pullback elements
  std::vector<std::pair<int, int>> pullback_elems;
};
DescentResult descend_action(const FiniteCategory& dom,
                             const FiniteCategory& cod,
                             const InternalFunctor& phi, const SheafAction& x);

// Descent stated on discrete opfibrations: converts to the action form,
// descends, and rebuilds the total category downstairs.
struct DescendedDofib {
  DiscreteOpfibration dofib;      // over the codomain
  std::vector<int> class_of;      // upstairs objects -> downstairs objects
};
DescendedDofib descend_dofib(const FiniteCategory& dom,
                             const FiniteCategory& cod,
                             const InternalFunctor& phi,
                             const FiniteCategory& total,
                             const InternalFunctor& proj);

// Backtracking search for an isomorphism of actions over a common base:
// a fiber-preserving equivariant bijection.
std::optional<std::vector<int>> find_action_iso(const FiniteCategory& base,
                                                const SheafAction& a,
                                                const SheafAction& b);

// ---------------------------------------------------------------------------
// Anafunctors.

struct PullbackCategory {
  FiniteCategory cat;
  InternalFunctor pi1, pi2;
  std::vector<std::pair<int, int>> obj_pairs;
  std::vector<std::pair<int, int>> arr_pairs;
};
// Pullback of f : A -> C against g : B -> C.
PullbackCategory pullback_category(const FiniteCategory& a,
                                   const FiniteCategory& b,
                                   const FiniteCategory& c,
                                   const InternalFunctor& f,
                                   const InternalFunctor& g);

struct Anafunctor {
  FiniteCategory mid;
  InternalFunctor left;   // mid -> dom, fully faithful + surjective on objects
  InternalFunctor right;  // mid -> cod
};

bool is_anafunctor(const FiniteCategory& dom, const FiniteCategory& cod,
                   const Anafunctor& f);
Anafunctor identity_anafunctor(const FiniteCategory& cat);
Anafunctor compose_anafunctors(const FiniteCategory& h,
                               const FiniteCategory& k,
                               const FiniteCategory& l, const Anafunctor& f,
                               const Anafunctor& g);

// Raw 2-cell datum between anafunctors f, g : H -/-> K: a surjective weak
// equivalence Sigma into the span pullback plus a transformation on its
// domain. two_cell_canonical returns the unique transformation tau_bar on the
// span pullback with tau_bar . Sigma_0 = tau.
struct TwoCellError {
  std::string reason;
  std::vector<int> witness;
};
struct TwoCellResult {
  bool ok = false;
  InternalTransformation canonical;
  TwoCellError error;
};
TwoCellResult two_cell_canonical(const FiniteCategory& h,
                                 const FiniteCategory& k, const Anafunctor& f,
                                 const Anafunctor& g,
                                 const FiniteCategory& sigma_dom,
                                 const InternalFunctor& sigma,
                                 const InternalTransformation& tau);

// The span pullback of two anafunctors with common source and the composites
// appearing in the canonical 2-cell description.
struct SpanPullback {
  PullbackCategory pb;
  InternalFunctor left_to_cod;   // Phi1 after pi2-side pullback of Xi2
  InternalFunctor right_to_cod;  // Phi2 after pi1-side pullback of Xi1
};
SpanPullback span_pullback(const FiniteCategory& h, const FiniteCategory& k,
                           const Anafunctor& f, const Anafunctor& g);

}  // namespace framecat

#endif  // FRAMECAT_FINCAT_HPP
