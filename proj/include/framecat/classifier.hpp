// Generates, for a theory and a finite parameter set, the presentations of
// the classifying category: objects, arrows, core groupoid, the generic
// bundle with its action, and the formula-lowering translation.
#ifndef FRAMECAT_CLASSIFIER_HPP
#define FRAMECAT_CLASSIFIER_HPP

#include <memory>
#include <string>
#include <vector>

#include "framecat/fincat.hpp"
#include "framecat/presentation.hpp"
#include "framecat/theory.hpp"

namespace framecat {

struct ParameterSet {
  std::vector<std::string> tokens;
  TheoryOrientation role = TheoryOrientation::LH;  // N for LH, Cantor for PS

  int size() const { return static_cast<int>(tokens.size()); }
  static ParameterSet numeric(int n,
                              TheoryOrientation role = TheoryOrientation::LH);
  Orientation presentation_orientation() const {
    return role == TheoryOrientation::LH ? Orientation::Open
                                         : Orientation::Closed;
  }
};

// Generator id conventions (fixed for golden files):
//   sim:A:p:q      the proposition [p ~A q]
//   rel:R:p1:...:pk           [(p1,..,pk) in R]
//   alpha:A:p:q               [alphaA(p) = q]
//   equiv:A:k:p               [=A,k p]   (k = copy index, from 1)
// Tagged copies inside arrow presentations carry a "1:", "2:", "3:" prefix.
std::string sim_id(const std::string& sort, const std::string& p,
                   const std::string& q);
std::string rel_id(const std::string& rel, const std::vector<std::string>& args);
std::string alpha_id(const std::string& sort, const std::string& p,
                     const std::string& q);
std::string equiv_id(const std::string& sort, int copy, const std::string& p);

// Lowers a formula to a join of generator meets at a parameter assignment
// for its context. A bare existential witness (one whose body does not
// already force membership in the sort's domain) carries an explicit
// [p ~A p] guard.
Dnf lower_formula(const Theory& theory, const Presentation& pres,
                  const std::vector<TypedVar>& ctx,
                  const std::vector<int>& params, const FormulaPtr& formula,
                  const ParameterSet& p, const std::string& prefix = "");

Presentation gen_objects(const Theory& theory, const ParameterSet& p);

struct ArrowData {
  std::shared_ptr<const Presentation> g1;
  std::shared_ptr<const Presentation> g1xg1;  // composable pairs
  FrameHomSpec s, t, e, m;  // frame maps; sources g0 / g1 as appropriate
  FrameHomSpec p1, p2;      // projections g1 -> g1xg1 (frame direction)
};

struct CoreData {
  std::shared_ptr<const Presentation> g1_core;
  FrameHomSpec i;                    // core -> core
  FrameHomSpec s, t, e;              // structure maps against the core
};

struct SortBundle {
  std::shared_ptr<const Presentation> eA;
  FrameHomSpec rho;                           // g0 -> eA
  std::shared_ptr<const Presentation> eA_x_g1;
  FrameHomSpec theta;                         // eA -> eA_x_g1
};

struct ClassifierBundle {
  Theory theory;
  ParameterSet params;
  std::shared_ptr<const Presentation> g0;
  ArrowData arrows;
  CoreData core;
  std::vector<SortBundle> per_sort;                 // by sort index
  std::vector<std::vector<Sequent>> rel_subs;       // per relation symbol
  std::vector<std::shared_ptr<const Presentation>> rel_products;
};

struct ClassifierError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ArrowData gen_arrows(const Theory& theory, const ParameterSet& p,
                     const std::shared_ptr<const Presentation>& g0);
CoreData gen_core(const Theory& theory, const ParameterSet& p,
                  const std::shared_ptr<const Presentation>& g0,
                  const ArrowData& arrows);
SortBundle gen_generic_bundle(const Theory& theory, const ParameterSet& p,
                              const std::shared_ptr<const Presentation>& g0,
                              int sort);
FrameHomSpec gen_action(const Theory& theory, const ParameterSet& p,
                        const std::shared_ptr<const Presentation>& g0,
                        const ArrowData& arrows, int sort, SortBundle& bundle);

// Runs the whole construction and verifies every structure map; throws
// ClassifierError when a proof obligation fails.
ClassifierBundle gen_classifier(const Theory& theory, const ParameterSet& p);

struct InterpretedSublocale {
  std::shared_ptr<const Presentation> ambient;  // context-indexed product
  Presentation sublocale;                       // ambient + forcing relation
  Sequent relation;
};
InterpretedSublocale interpret_in_E(const ClassifierBundle& bundle,
                                    const std::vector<TypedVar>& ctx,
                                    const FormulaPtr& formula);

// ---------------------------------------------------------------------------
// Point-level category of a classifier.

struct PointCategory {
  FiniteCategory cat;
  std::vector<Point> objects;  // points of g0
  std::vector<Point> arrows;   // points of g1 (or g1_core)
};

PointCategory point_category(const ClassifierBundle& bundle, bool use_core);

// The generic bundle as a concrete model over the point category: fibers are
// the points of each E_A, relations read off the defining sublocales.
struct GenericPointModel {
  std::vector<std::vector<Point>> sort_points;  // per sort, points of E_A
  // Sheaf actions plus relation tuples in the indexing of sort_points.
  std::vector<SheafAction> sorts;
  std::vector<std::vector<std::vector<int>>> rel;
};
GenericPointModel generic_point_model(const ClassifierBundle& bundle,
                                      const PointCategory& pc);

// Disjoint union of theories (sorts and relation symbols suffixed when they
// collide); classifiers of products are compared against it.
Theory disjoint_union(const Theory& a, const Theory& b);

}  // namespace framecat

#endif  // FRAMECAT_CLASSIFIER_HPP
