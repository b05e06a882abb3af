// Brute-force semantics for finitary relational theories: subquotient models
// over a finite parameter set, their homomorphisms, recursive formula
// interpretation, bundle models over finite categories and base change.
// Everything here is an independent oracle for the classifier constructions.
#ifndef FRAMECAT_ORACLE_HPP
#define FRAMECAT_ORACLE_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "framecat/fincat.hpp"
#include "framecat/presentation.hpp"
#include "framecat/theory.hpp"

namespace framecat {

// A model of a theory whose sorts are subquotients of {0, .., np-1}: one
// partial equivalence relation per sort plus relation interpretations on
// equivalence classes (classes are named by their least element).
struct PerModel {
  int np = 0;
  std::vector<std::vector<bool>> per;            // [sort][p * np + q]
  std::vector<std::set<std::vector<int>>> rel;   // [relation] -> class tuples

  bool related(int sort, int p, int q) const { return per[sort][p * np + q]; }
  bool defined(int sort, int p) const { return related(sort, p, p); }
  int class_of(int sort, int p) const;           // least related element
  std::vector<int> classes(int sort) const;      // sorted representatives
  int class_count(int sort) const;

  // Total carrier size, summed over sorts.
  int total_size() const;

  bool operator==(const PerModel& o) const {
    return np == o.np && per == o.per && rel == o.rel;
  }
  bool operator<(const PerModel& o) const;
};

struct ModelHom {
  // Per sort, indexed by the domain's class list: image class representative.
  std::vector<std::vector<int>> map;

  bool operator==(const ModelHom& o) const { return map == o.map; }
  bool operator<(const ModelHom& o) const { return map < o.map; }
};

// Exhaustive, canonically ordered, duplicate-free.
std::vector<PerModel> enumerate_models(const Theory& theory, int np);

// Class tuples over the axiom context satisfying the formula (the recursive
// set interpretation: equality is the diagonal, and/or are meet/join, exists
// is a projection image).
std::set<std::vector<int>> interpret_formula(const Theory& theory,
                                             const PerModel& model,
                                             const std::vector<TypedVar>& ctx,
                                             const FormulaPtr& formula);
bool model_satisfies(const Theory& theory, const PerModel& model,
                     const TheorySequent& axiom);

std::vector<ModelHom> enumerate_homs(const Theory& theory, const PerModel& m,
                                     const PerModel& n);
std::vector<ModelHom> enumerate_isos(const Theory& theory, const PerModel& m,
                                     const PerModel& n);
ModelHom identity_hom(const PerModel& m);
// Diagrammatic composite: f : M -> N then g : N -> L.
ModelHom compose_hom(const PerModel& m, const PerModel& n, const ModelHom& f,
                     const ModelHom& g);
bool is_model_hom(const Theory& theory, const PerModel& m, const PerModel& n,
                  const ModelHom& f);

// ---------------------------------------------------------------------------
// Models over a finite category: one sheaf action per sort plus fiberwise
// relation interpretations stable under the action.

struct BundleModel {
  std::vector<SheafAction> sorts;
  std::vector<std::set<std::vector<int>>> rel;  // element tuples, same fiber
};

struct BundleModelViolation {
  std::string reason;
  std::vector<int> witness;
};

std::optional<BundleModelViolation> check_bundle_model(
    const Theory& theory, const FiniteCategory& cat, const BundleModel& m);

// Element tuples over the context (all components in a common fiber)
// satisfying the formula, computed fiber by fiber.
std::set<std::vector<int>> interpret_formula_bundle(
    const Theory& theory, const FiniteCategory& cat, const BundleModel& m,
    const std::vector<TypedVar>& ctx, const FormulaPtr& formula);

// A set-based model is a bundle model over the terminal category.
BundleModel set_model(const Theory& theory, const std::vector<int>& sizes,
                      const std::vector<std::set<std::vector<int>>>& rel);
// The bundle model over 1 carried by a PER model's classes.
BundleModel per_to_set_model(const Theory& theory, const PerModel& m);

struct BasedChangeResult {
  BundleModel model;
  // Per sort: the (object of dom, element of cod-model) pairs.
  std::vector<std::vector<std::pair<int, int>>> elems;
};
BasedChangeResult base_change(const Theory& theory, const FiniteCategory& dom,
                              const FiniteCategory& cod,
                              const InternalFunctor& f, const BundleModel& m);

// Per-sort element maps pullback(f, M) -> pullback(g, M) induced by a
// transformation; verified to be a homomorphism of bundle models.
std::vector<std::vector<int>> transformation_action(
    const Theory& theory, const FiniteCategory& dom, const FiniteCategory& cod,
    const InternalFunctor& f, const InternalFunctor& g,
    const InternalTransformation& a, const BundleModel& m);

bool is_bundle_model_hom(const Theory& theory, const FiniteCategory& cat,
                         const BundleModel& m, const BundleModel& n,
                         const std::vector<std::vector<int>>& map);
std::vector<std::vector<std::vector<int>>> enumerate_bundle_model_homs(
    const Theory& theory, const FiniteCategory& cat, const BundleModel& m,
    const BundleModel& n);

// Backtracking search for an isomorphism of bundle models (fiber bijections,
// equivariant, preserving relations both ways).
std::optional<std::vector<std::vector<int>>> find_bundle_model_iso(
    const Theory& theory, const FiniteCategory& cat, const BundleModel& m,
    const BundleModel& n);

// All bundle models over cat with every fiber of size <= max_fiber.
std::vector<BundleModel> enumerate_bundle_models(const Theory& theory,
                                                 const FiniteCategory& cat,
                                                 int max_fiber);

}  // namespace framecat

#endif  // FRAMECAT_ORACLE_HPP
