#include "framecat/json_io.hpp"

#include <filesystem>
#include <fstream>

namespace framecat {

std::string canon_dump(const Json& j) { return j.dump(2) + "\n"; }

Json presentation_to_json(const Presentation& pres) {
  Json j;
  j["generators"] = Json::array();
  for (const auto& g : pres.generators) {
    Json jg;
    jg["id"] = g.id;
    jg["display"] = g.display;
    jg["tags"] = g.tags;
    j["generators"].push_back(std::move(jg));
  }
  j["relations"] = Json::array();
  for (const auto& rel : pres.relations) {
    Json jr;
    jr["lhs"] = Json::array();
    for (GenId g : rel.lhs.gens) jr["lhs"].push_back(pres.generators[g].id);
    jr["rhs"] = Json::array();
    for (const auto& t : rel.rhs.terms) {
      Json jt = Json::array();
      for (GenId g : t.gens) jt.push_back(pres.generators[g].id);
      jr["rhs"].push_back(std::move(jt));
    }
    j["relations"].push_back(std::move(jr));
  }
  j["orientation"] = pres.orientation == Orientation::Open ? "open" : "closed";
  return j;
}

Presentation presentation_from_json(const Json& j) {
  Presentation pres;
  pres.orientation = j.at("orientation").get<std::string>() == "closed"
                         ? Orientation::Closed
                         : Orientation::Open;
  for (const auto& jg : j.at("generators")) {
    Generator g;
    g.id = jg.at("id").get<std::string>();
    g.display = jg.at("display").get<std::string>();
    if (jg.contains("tags"))
      g.tags = jg.at("tags").get<std::map<std::string, std::string>>();
    pres.add_generator(std::move(g));
  }
  for (const auto& jr : j.at("relations")) {
    Sequent s;
    std::vector<GenId> lhs;
    for (const auto& id : jr.at("lhs"))
      lhs.push_back(pres.gen(id.get<std::string>()));
    s.lhs = MeetTerm::of(std::move(lhs));
    for (const auto& jt : jr.at("rhs")) {
      std::vector<GenId> gs;
      for (const auto& id : jt) gs.push_back(pres.gen(id.get<std::string>()));
      s.rhs.terms.push_back(MeetTerm::of(std::move(gs)));
    }
    pres.add_relation(std::move(s));
  }
  return pres;
}

Json hom_to_json(const FrameHomSpec& hom) {
  Json j;
  Json map;
  for (std::size_t g = 0; g < hom.map.size(); ++g) {
    Json image = Json::array();
    for (const auto& t : hom.map[g].terms) {
      Json jt = Json::array();
      for (GenId x : t.gens) jt.push_back(hom.target->generators[x].id);
      image.push_back(std::move(jt));
    }
    map[hom.source->generators[g].id] = std::move(image);
  }
  j["map"] = std::move(map);
  j["verified"] = hom.verified;
  return j;
}

Json point_to_json(const Presentation& pres, const Point& pt) {
  Json j = Json::array();
  for (int g = 0; g < pres.size(); ++g)
    if (pt.get(g)) j.push_back(pres.generators[g].id);
  return j;
}

Json category_to_json(const FiniteCategory& cat) {
  Json j;
  j["objects"] = cat.n_obj;
  j["arrows"] = cat.n_arr;
  j["src"] = cat.src;
  j["tgt"] = cat.tgt;
  j["ident"] = cat.ident;
  j["comp"] = cat.comp;
  if (cat.has_inverse()) j["inv"] = cat.inv;
  return j;
}

FiniteCategory category_from_json(const Json& j) {
  FiniteCategory cat;
  cat.n_obj = j.at("objects").get<int>();
  cat.n_arr = j.at("arrows").get<int>();
  cat.src = j.at("src").get<std::vector<int>>();
  cat.tgt = j.at("tgt").get<std::vector<int>>();
  cat.ident = j.at("ident").get<std::vector<int>>();
  cat.comp = j.at("comp").get<std::vector<std::vector<int>>>();
  if (j.contains("inv")) cat.inv = j.at("inv").get<std::vector<int>>();
  return cat;
}

Json functor_to_json(const InternalFunctor& f) {
  Json j;
  j["obj"] = f.obj;
  j["arr"] = f.arr;
  return j;
}

Json action_to_json(const SheafAction& a) {
  Json j;
  j["elements"] = a.n_elem;
  j["p"] = a.p;
  j["act"] = a.act;
  return j;
}

Json write_classifier_tree(const ClassifierBundle& bundle,
                           const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto put = [&](const std::string& rel, const Json& j) {
    fs::path path = fs::path(dir) / rel;
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    out << canon_dump(j);
  };
  put("g0.json", presentation_to_json(*bundle.g0));
  put("g1.json", presentation_to_json(*bundle.arrows.g1));
  put("g1_core.json", presentation_to_json(*bundle.core.g1_core));
  put("g1xg1.json", presentation_to_json(*bundle.arrows.g1xg1));
  put("s.json", hom_to_json(bundle.arrows.s));
  put("t.json", hom_to_json(bundle.arrows.t));
  put("e.json", hom_to_json(bundle.arrows.e));
  put("m.json", hom_to_json(bundle.arrows.m));
  put("i.json", hom_to_json(bundle.core.i));
  Json summary;
  summary["theory"] = bundle.theory.name;
  summary["parameters"] = bundle.params.tokens;
  summary["orientation"] =
      bundle.params.role == TheoryOrientation::LH ? "lh" : "ps";
  summary["g0_generators"] = bundle.g0->size();
  summary["g1_generators"] = bundle.arrows.g1->size();
  for (std::size_t s = 0; s < bundle.per_sort.size(); ++s) {
    const std::string& name = bundle.theory.sig.sorts[s];
    put("sorts/" + name + "/eA.json",
        presentation_to_json(*bundle.per_sort[s].eA));
    put("sorts/" + name + "/rho.json", hom_to_json(bundle.per_sort[s].rho));
    put("sorts/" + name + "/eA_x_g1.json",
        presentation_to_json(*bundle.per_sort[s].eA_x_g1));
    put("sorts/" + name + "/theta.json",
        hom_to_json(bundle.per_sort[s].theta));
  }
  for (std::size_t r = 0; r < bundle.rel_subs.size(); ++r) {
    const std::string& name = bundle.theory.sig.relations[r].name;
    Json jr;
    jr["product"] = presentation_to_json(*bundle.rel_products[r]);
    Json rels = Json::array();
    for (const auto& s : bundle.rel_subs[r]) {
      Json one;
      one["lhs"] = Json::array();
      for (GenId g : s.lhs.gens)
        one["lhs"].push_back(bundle.rel_products[r]->generators[g].id);
      one["rhs"] = Json::array();
      for (const auto& t : s.rhs.terms) {
        Json jt = Json::array();
        for (GenId g : t.gens)
          jt.push_back(bundle.rel_products[r]->generators[g].id);
        one["rhs"].push_back(std::move(jt));
      }
      rels.push_back(std::move(one));
    }
    jr["relations"] = std::move(rels);
    put("relsubs/" + name + ".json", jr);
  }
  put("summary.json", summary);
  return summary;
}

}  // namespace framecat
