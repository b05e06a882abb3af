// Reads classifier points back as oracle-side data: PER models, model
// homomorphisms and bundle elements. These maps realize the point-level
// bijections between the generated presentations and the brute-force
// enumerations.
#ifndef FRAMECAT_DECODE_HPP
#define FRAMECAT_DECODE_HPP

#include <string>
#include <vector>

#include "framecat/classifier.hpp"
#include "framecat/oracle.hpp"

namespace framecat {

// The PER model carried by a point of g0 (or of a tagged copy inside an
// arrow presentation when prefix is "1:" or "2:").
PerModel decode_object_point(const Theory& theory, const ParameterSet& p,
                             const Presentation& pres, const Point& pt,
                             const std::string& prefix = "");

struct DecodedArrow {
  PerModel dom, cod;
  ModelHom hom;
};
// Works for points of g1 and of g1_core alike.
DecodedArrow decode_arrow_point(const ClassifierBundle& bundle,
                                const Point& pt);

struct DecodedBundleElem {
  PerModel model;
  int cls;  // class representative in the decoded sort
};
DecodedBundleElem decode_bundle_point(const ClassifierBundle& bundle, int sort,
                                      const Point& pt);

// Index into a canonically ordered model list; -1 when absent.
int model_index(const std::vector<PerModel>& models, const PerModel& m);

}  // namespace framecat

#endif  // FRAMECAT_DECODE_HPP
