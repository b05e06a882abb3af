#include "framecat/decode.hpp"

#include <algorithm>

namespace framecat {

PerModel decode_object_point(const Theory& theory, const ParameterSet& p,
                             const Presentation& pres, const Point& pt,
                             const std::string& prefix) {
  PerModel m;
  m.np = p.size();
  int n = p.size();
  m.per.assign(theory.sig.sorts.size(), std::vector<bool>(n * n, false));
  for (std::size_t s = 0; s < theory.sig.sorts.size(); ++s)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m.per[s][i * n + j] = pt.get(
            pres.gen(prefix + sim_id(theory.sig.sorts[s], p.tokens[i],
                                     p.tokens[j])));
  m.rel.assign(theory.sig.relations.size(), {});
  for (std::size_t r = 0; r < theory.sig.relations.size(); ++r) {
    const auto& rel = theory.sig.relations[r];
    int k = static_cast<int>(rel.arity.size());
    if (n == 0 && k > 0) continue;  // no generators to read
    std::vector<int> tuple(k, 0);
    for (;;) {
      std::vector<std::string> args;
      for (int i : tuple) args.push_back(p.tokens[i]);
      if (pt.get(pres.gen(prefix + rel_id(rel.name, args)))) {
        std::vector<int> reps;
        for (int i = 0; i < k; ++i)
          reps.push_back(m.class_of(rel.arity[i], tuple[i]));
        m.rel[r].insert(std::move(reps));
      }
      int i = k - 1;
      while (i >= 0 && ++tuple[i] == n) tuple[i--] = 0;
      if (i < 0) break;
    }
  }
  return m;
}

DecodedArrow decode_arrow_point(const ClassifierBundle& bundle,
                                const Point& pt) {
  const Theory& theory = bundle.theory;
  const ParameterSet& p = bundle.params;
  const Presentation& pres = *bundle.arrows.g1;  // core shares the layout
  DecodedArrow out;
  out.dom = decode_object_point(theory, p, pres, pt, "1:");
  out.cod = decode_object_point(theory, p, pres, pt, "2:");
  out.hom.map.resize(theory.sig.sorts.size());
  for (std::size_t s = 0; s < theory.sig.sorts.size(); ++s) {
    for (int c : out.dom.classes(static_cast<int>(s))) {
      int image = -1;
      for (int q = 0; q < p.size() && image < 0; ++q)
        if (pt.get(pres.gen(
                alpha_id(theory.sig.sorts[s], p.tokens[c], p.tokens[q]))))
          image = out.cod.class_of(static_cast<int>(s), q);
      if (image < 0)
        throw ClassifierError("arrow point has no image for a class");
      out.hom.map[s].push_back(image);
    }
  }
  return out;
}

DecodedBundleElem decode_bundle_point(const ClassifierBundle& bundle, int sort,
                                      const Point& pt) {
  const Theory& theory = bundle.theory;
  const ParameterSet& p = bundle.params;
  const Presentation& pres = *bundle.per_sort[sort].eA;
  DecodedBundleElem out;
  out.model = decode_object_point(theory, p, pres, pt);
  out.cls = -1;
  for (int i = 0; i < p.size() && out.cls < 0; ++i)
    if (pt.get(pres.gen(equiv_id(theory.sig.sorts[sort], 1, p.tokens[i]))))
      out.cls = out.model.class_of(sort, i);
  if (out.cls < 0)
    throw ClassifierError("bundle point carries no equivalence class");
  return out;
}

int model_index(const std::vector<PerModel>& models, const PerModel& m) {
  auto it = std::lower_bound(models.begin(), models.end(), m);
  if (it == models.end() || !(*it == m)) return -1;
  return static_cast<int>(it - models.begin());
}

}  // namespace framecat
