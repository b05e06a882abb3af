// JSON serialization: canonical key-sorted encodings for presentations,
// frame homs, categories, actions and classifier bundles.
#ifndef FRAMECAT_JSON_IO_HPP
#define FRAMECAT_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "framecat/classifier.hpp"
#include "framecat/fincat.hpp"
#include "framecat/presentation.hpp"

namespace framecat {

using Json = nlohmann::json;

// Canonical encoding: keys sorted (nlohmann defaults), two-space indent,
// trailing newline. Golden files compare byte-for-byte against this.
std::string canon_dump(const Json& j);

Json presentation_to_json(const Presentation& pres);
Presentation presentation_from_json(const Json& j);

Json hom_to_json(const FrameHomSpec& hom);

Json point_to_json(const Presentation& pres, const Point& pt);

Json category_to_json(const FiniteCategory& cat);
FiniteCategory category_from_json(const Json& j);
Json functor_to_json(const InternalFunctor& f);
Json action_to_json(const SheafAction& a);

// One file per presentation and structure map under dir; returns the summary.
Json write_classifier_tree(const ClassifierBundle& bundle,
                           const std::string& dir);

}  // namespace framecat

#endif  // FRAMECAT_JSON_IO_HPP
