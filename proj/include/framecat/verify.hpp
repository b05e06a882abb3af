// Spec-level verification drivers: the point-model bijections, point
// category laws, generic-model soundness and interpretation coherence.
#ifndef FRAMECAT_VERIFY_HPP
#define FRAMECAT_VERIFY_HPP

#include <string>
#include <vector>

#include "framecat/classifier.hpp"
#include "framecat/decode.hpp"
#include "framecat/forcing.hpp"
#include "framecat/oracle.hpp"

namespace framecat {

struct BijectionReport {
  int n_models = 0, n_homs = 0, n_isos = 0, n_carriers = 0;
  int g0_points = 0, g1_points = 0, core_points = 0, bundle_points = 0;
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

// Decodes every point of g0 / g1 / core / E_A and matches the results
// against the oracle enumerations, including the structure-map readings
// (source, target, identity, composition, inverse, action).
BijectionReport check_bijections(const Theory& theory, const ParameterSet& p);

// Point category laws: the pushforward tables form a category, and a
// groupoid for the core.
bool check_point_category_laws(const ClassifierBundle& bundle,
                               std::string* detail = nullptr);

// Soundness of the generic model: lhs sublocale contained in rhs sublocale
// for every theory axiom.
bool check_generic_model_soundness(const ClassifierBundle& bundle,
                                   std::string* detail = nullptr);

// Interpretation coherence: the decoded points of each interpreted sublocale
// equal the oracle recursive interpretation, unioned over models.
bool check_interpretation_coherence(const ClassifierBundle& bundle,
                                    std::string* detail = nullptr);

// Formula shapes exercised by the coherence check.
struct ContextFormula {
  std::vector<TypedVar> ctx;
  FormulaPtr formula;
};
std::vector<ContextFormula> formula_corpus(const Theory& theory);

}  // namespace framecat

#endif  // FRAMECAT_VERIFY_HPP
