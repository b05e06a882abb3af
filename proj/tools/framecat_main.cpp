// framecat: parse finitary relational theories, generate their classifying
// presentations, enumerate and decode points, and run the verification
// suites.
//
// Exit codes: 0 success, 1 failed verification check, 2 usage or parse
// error, 3 generation or I/O error.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "framecat/classifier.hpp"
#include "framecat/decode.hpp"
#include "framecat/forcing.hpp"
#include "framecat/json_io.hpp"
#include "framecat/randgen.hpp"
#include "framecat/verify.hpp"

using namespace framecat;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGeneration = 3;

struct Options {
  std::string theory_path;
  int np = 2;
  std::string orientation = "lh";
  std::string layer = "objects";
  std::string suite = "all";
  unsigned seed = 0;
  int count = 30;
  int point = -1;
  bool json = false;
  std::string out;
  std::string bundle_dir;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Theory load_theory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_theory(ss.str());
}

ParameterSet params_of(const Options& opt) {
  if (opt.orientation != "lh" && opt.orientation != "ps")
    throw UsageError("orientation must be lh or ps");
  return ParameterSet::numeric(opt.np, opt.orientation == "lh"
                                           ? TheoryOrientation::LH
                                           : TheoryOrientation::PS);
}

std::string plural(int n, const char* what) {
  return std::to_string(n) + " " + what + (n == 1 ? "" : "s");
}

// Resolves --layer objects|arrows|core|E:<sort> to a presentation.
std::shared_ptr<const Presentation> layer_presentation(
    const ClassifierBundle& bundle, const std::string& layer,
    int* sort_out = nullptr) {
  if (layer == "objects") return bundle.g0;
  if (layer == "arrows") return bundle.arrows.g1;
  if (layer == "core") return bundle.core.g1_core;
  if (layer.rfind("E:", 0) == 0) {
    std::string sort = layer.substr(2);
    int idx = bundle.theory.sig.sort_index(sort);
    if (idx < 0) throw UsageError("unknown sort in layer: " + sort);
    if (sort_out) *sort_out = idx;
    return bundle.per_sort[idx].eA;
  }
  throw UsageError("unknown layer: " + layer);
}

std::string describe_model(const Theory& theory, const PerModel& m) {
  bool empty = m.total_size() == 0;
  for (const auto& r : m.rel)
    if (!r.empty()) empty = false;
  if (empty) return "empty model";
  std::ostringstream os;
  for (std::size_t s = 0; s < theory.sig.sorts.size(); ++s) {
    if (s) os << "; ";
    os << theory.sig.sorts[s] << " = {";
    bool first = true;
    for (int c : m.classes(static_cast<int>(s))) {
      if (!first) os << ",";
      os << "[" << c << "]";
      first = false;
    }
    os << "}";
  }
  for (std::size_t r = 0; r < theory.sig.relations.size(); ++r) {
    os << "; " << theory.sig.relations[r].name << " = {";
    bool first = true;
    for (const auto& t : m.rel[r]) {
      if (!first) os << ",";
      os << "(";
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) os << ",";
        os << "[" << t[i] << "]";
      }
      os << ")";
      first = false;
    }
    os << "}";
  }
  return os.str();
}

Json model_to_json(const Theory& theory, const PerModel& m) {
  Json j;
  for (std::size_t s = 0; s < theory.sig.sorts.size(); ++s)
    j["sorts"][theory.sig.sorts[s]] = m.classes(static_cast<int>(s));
  for (std::size_t r = 0; r < theory.sig.relations.size(); ++r) {
    Json tuples = Json::array();
    for (const auto& t : m.rel[r]) tuples.push_back(t);
    j["relations"][theory.sig.relations[r].name] = std::move(tuples);
  }
  return j;
}

std::string describe_hom(const Theory& theory, const DecodedArrow& d) {
  std::ostringstream os;
  os << "hom: (" << describe_model(theory, d.dom) << ") -> ("
     << describe_model(theory, d.cod) << ")";
  for (std::size_t s = 0; s < theory.sig.sorts.size(); ++s) {
    os << "; " << theory.sig.sorts[s] << ":";
    auto classes = d.dom.classes(static_cast<int>(s));
    for (std::size_t i = 0; i < classes.size(); ++i)
      os << " [" << classes[i] << "]->[" << d.hom.map[s][i] << "]";
  }
  return os.str();
}

int cmd_classify(const Options& opt) {
  Theory theory = load_theory(opt.theory_path);
  ClassifierBundle bundle = gen_classifier(theory, params_of(opt));
  Json report;
  auto layer_line = [&](const std::string& name, const Presentation& pres) {
    int pts = static_cast<int>(enumerate_points(pres).size());
    report[name] = {{"generators", pres.size()}, {"points", pts}};
    std::cout << name << ": " << plural(pres.size(), "generator") << ", "
              << plural(pts, "point") << "\n";
  };
  layer_line("g0", *bundle.g0);
  layer_line("g1", *bundle.arrows.g1);
  layer_line("core", *bundle.core.g1_core);
  for (std::size_t s = 0; s < bundle.per_sort.size(); ++s)
    layer_line("E:" + theory.sig.sorts[s], *bundle.per_sort[s].eA);
  if (opt.json) std::cout << canon_dump(report);
  if (!opt.out.empty()) {
    write_classifier_tree(bundle, opt.out);
    std::cout << "wrote classifier tree to " << opt.out << "\n";
  }
  return 0;
}

int cmd_points(const Options& opt) {
  Theory theory = load_theory(opt.theory_path);
  ClassifierBundle bundle = gen_classifier(theory, params_of(opt));
  auto pres = layer_presentation(bundle, opt.layer);
  auto pts = enumerate_points(*pres);
  if (opt.json) {
    Json j = Json::array();
    for (const auto& pt : pts) j.push_back(point_to_json(*pres, pt));
    std::cout << canon_dump(j);
  } else {
    for (std::size_t i = 0; i < pts.size(); ++i)
      std::cout << i << ": " << pres->show(pts[i]) << "\n";
  }
  return 0;
}

int cmd_decode(const Options& opt) {
  Theory theory = load_theory(opt.theory_path);
  ParameterSet p = params_of(opt);
  ClassifierBundle bundle = gen_classifier(theory, p);
  int sort = -1;
  auto pres = layer_presentation(bundle, opt.layer, &sort);
  auto pts = enumerate_points(*pres);
  if (opt.point < 0 || opt.point >= static_cast<int>(pts.size()))
    throw UsageError("--point out of range (layer has " +
                     std::to_string(pts.size()) + " points)");
  const Point& pt = pts[opt.point];
  if (p.role == TheoryOrientation::PS)
    std::cout << "note: closed orientation; the reading below covers the "
                 "finite discrete truncation of the Cantor parameter space\n";
  Json j;
  if (opt.layer == "objects") {
    PerModel m = decode_object_point(theory, p, *pres, pt);
    std::cout << describe_model(theory, m) << "\n";
    j = model_to_json(theory, m);
  } else if (opt.layer == "arrows" || opt.layer == "core") {
    DecodedArrow d = decode_arrow_point(bundle, pt);
    std::cout << describe_hom(theory, d) << "\n";
    j["dom"] = model_to_json(theory, d.dom);
    j["cod"] = model_to_json(theory, d.cod);
    j["map"] = d.hom.map;
  } else {
    DecodedBundleElem d = decode_bundle_point(bundle, sort, pt);
    std::cout << "class [" << d.cls << "] of ("
              << describe_model(theory, d.model) << ")\n";
    j["model"] = model_to_json(theory, d.model);
    j["class"] = d.cls;
  }
  if (opt.json) std::cout << canon_dump(j);
  return 0;
}

struct CheckSink {
  Json entries = Json::array();
  bool all_pass = true;
  std::string instance;

  void add(const std::string& check, bool pass, const std::string& detail,
           Json witness = Json()) {
    Json e;
    e["instance"] = instance;
    e["check"] = check;
    e["pass"] = pass;
    if (!detail.empty()) e["detail"] = detail;
    if (!witness.is_null()) e["witness"] = witness;
    entries.push_back(std::move(e));
    all_pass = all_pass && pass;
    std::cout << (pass ? "ok   " : "FAIL ") << instance << " " << check;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
  }
};

void suite_presentations(const Options& opt, CheckSink& sink) {
  std::mt19937 rng(opt.seed);
  int agree = 0;
  for (int trial = 0; trial < opt.count; ++trial) {
    Presentation p = random_presentation(rng, 8, 6);
    Sequent s = random_sequent(rng, p.size());
    if (entails(p, s) == saturate_derives(p, s)) ++agree;
  }
  sink.add("saturation-vs-points", agree == opt.count,
           std::to_string(agree) + "/" + std::to_string(opt.count));
  int filtered = 0;
  for (int trial = 0; trial < opt.count; ++trial) {
    Presentation p = random_presentation(rng, 7, 4);
    std::vector<Sequent> extra{random_sequent(rng, p.size())};
    auto narrowed = enumerate_points(add_relations(p, extra));
    std::vector<Point> expected;
    for (const auto& pt : enumerate_points(p))
      if (pt.satisfies(extra[0])) expected.push_back(pt);
    if (narrowed == expected) ++filtered;
  }
  sink.add("add-relations-filter", filtered == opt.count,
           std::to_string(filtered) + "/" + std::to_string(opt.count));
}

void suite_bijections(const Theory& theory, const ParameterSet& p,
                      CheckSink& sink, const Options& opt) {
  BijectionReport rep = check_bijections(theory, p);
  Json witness;
  witness["models"] = rep.n_models;
  witness["homs"] = rep.n_homs;
  witness["isos"] = rep.n_isos;
  witness["carriers"] = rep.n_carriers;
  sink.add("bijections-I-IV", rep.ok, rep.detail, witness);
  if (opt.json) {
    // Certificate: point index -> model index table for the object layer.
    ClassifierBundle bundle = gen_classifier(theory, p);
    auto models = enumerate_models(theory, p.size());
    Json table = Json::array();
    for (const auto& pt : enumerate_points(*bundle.g0))
      table.push_back(
          model_index(models, decode_object_point(theory, p, *bundle.g0, pt)));
    Json model_list = Json::array();
    for (const auto& m : models) model_list.push_back(model_to_json(theory, m));
    Json cert;
    cert["models"] = std::move(model_list);
    cert["object_point_to_model"] = std::move(table);
    sink.add("bijection-certificate", true,
             "model list and object-layer point-to-model table", cert);
  }
}

void suite_structure(const Theory& theory, const ParameterSet& p,
                     CheckSink& sink) {
  try {
    ClassifierBundle bundle = gen_classifier(theory, p);
    sink.add("structure-maps", true, "s,t,e,m,i,rho,theta verified");
    std::string detail;
    bool laws = check_point_category_laws(bundle, &detail);
    sink.add("point-category-laws", laws, detail);
    bool sound = check_generic_model_soundness(bundle, &detail);
    sink.add("generic-model-soundness", sound, detail);
    bool coherent = check_interpretation_coherence(bundle, &detail);
    sink.add("interpretation-coherence", coherent, detail);
  } catch (const ClassifierError& e) {
    sink.add("structure-maps", false, e.what());
  }
}

void suite_descent(const Options& opt, CheckSink& sink) {
  std::mt19937 rng(opt.seed);
  int done = 0, passed = 0;
  for (int trial = 0; trial < opt.count * 4 && done < opt.count; ++trial) {
    FiniteCategory k = random_category(rng, 4);
    std::uniform_int_distribution<int> dom_d(k.n_obj, k.n_obj + 2);
    auto assignment = random_surjection(rng, dom_d(rng), k.n_obj);
    InducedCategory ind = induced_category(k, assignment);
    SheafAction x = random_action(rng, ind.cat, 2);
    DescentResult d = descend_action(ind.cat, k, ind.proj, x);
    PulledBackAction pb = pullback_action(ind.cat, k, ind.proj, d.descended);
    bool ok = find_action_iso(ind.cat, x, pb.action).has_value();
    SheafAction y = random_action(rng, k, 2);
    PulledBackAction pb2 = pullback_action(ind.cat, k, ind.proj, y);
    DescentResult d2 = descend_action(ind.cat, k, ind.proj, pb2.action);
    ok = ok && find_action_iso(k, y, d2.descended).has_value();
    if (ok) ++passed;
    ++done;
  }
  sink.add("descent-round-trips", passed == done,
           std::to_string(passed) + "/" + std::to_string(done));
}

void suite_zeta(const Theory& theory, const ParameterSet& p, CheckSink& sink) {
  ClassifierBundle bundle = gen_classifier(theory, p);
  struct KCase {
    std::string name;
    FiniteCategory cat;
    bool groupoid;
  };
  std::vector<KCase> cases = {
      {"terminal", terminal_category(), true},
      {"codiscrete2", codiscrete_groupoid(2), true},
      {"free-arrow", free_arrow_category(), false},
  };
  for (const auto& kc : cases) {
    ZetaReport rep = verify_zeta(bundle, kc.cat, false);
    for (const auto& e : rep.entries)
      sink.add("zeta[" + kc.name + "] " + e.check, e.pass, e.detail);
    if (kc.groupoid) {
      ZetaReport core_rep = verify_zeta(bundle, kc.cat, true);
      for (const auto& e : core_rep.entries)
        sink.add("zeta-core[" + kc.name + "] " + e.check, e.pass, e.detail);
    }
  }
}

// Cross-checks a previously written classifier tree against a fresh run.
void suite_bundle_dir(const Theory& theory, const ParameterSet& p,
                      const std::string& dir, CheckSink& sink) {
  auto read = [&](const std::string& rel) {
    std::ifstream in(std::filesystem::path(dir) / rel);
    if (!in) throw std::runtime_error("cannot open " + rel + " under " + dir);
    Json j;
    in >> j;  // throws on corrupt JSON
    return j;
  };
  ClassifierBundle bundle = gen_classifier(theory, p);
  auto same = [&](const std::string& rel, const Presentation& fresh) {
    Presentation loaded = presentation_from_json(read(rel));
    bool ok = same_generators(loaded, fresh) &&
              loaded.relations.size() == fresh.relations.size();
    for (std::size_t i = 0; ok && i < fresh.relations.size(); ++i)
      ok = loaded.relations[i] == fresh.relations[i];
    sink.add("bundle-matches:" + rel, ok, "");
  };
  same("g0.json", *bundle.g0);
  same("g1.json", *bundle.arrows.g1);
  same("g1_core.json", *bundle.core.g1_core);
}

int cmd_verify(const Options& opt, bool force_json) {
  Options o = opt;
  o.json = o.json || force_json;
  Theory theory = load_theory(o.theory_path);
  ParameterSet p = params_of(o);
  CheckSink sink;
  sink.instance = theory.name + "@" + std::to_string(o.np);

  if (p.role == TheoryOrientation::PS)
    sink.add("ps-mode-note", true,
             "closed orientation: decoding covers the finite discrete "
             "truncation of the Cantor parameter space only");
  bool all = o.suite == "all";
  if (!(all || o.suite == "bijections" || o.suite == "structure" ||
        o.suite == "descent" || o.suite == "zeta" ||
        o.suite == "presentations"))
    throw UsageError("unknown suite: " + o.suite);
  if (!o.bundle_dir.empty()) suite_bundle_dir(theory, p, o.bundle_dir, sink);
  if (all || o.suite == "presentations") suite_presentations(o, sink);
  if (all || o.suite == "bijections") suite_bijections(theory, p, sink, o);
  if (all || o.suite == "structure") suite_structure(theory, p, sink);
  if (all || o.suite == "descent") suite_descent(o, sink);
  if (all || o.suite == "zeta") suite_zeta(theory, p, sink);

  if (o.json) {
    std::string payload = canon_dump(sink.entries);
    if (!o.out.empty()) {
      std::ofstream out(o.out);
      out << payload;
      std::cout << "wrote report to " << o.out << "\n";
    } else {
      std::cout << payload;
    }
  }
  return sink.all_pass ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"classifying-category toolkit for finitary relational theories"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("theory", opt.theory_path, "theory file (.gth)")
        ->required();
    sub->add_option("--p", opt.np, "parameter set size")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--orientation", opt.orientation, "lh or ps");
    sub->add_flag("--json", opt.json, "emit JSON");
    sub->add_option("--out", opt.out, "output directory or file");
    sub->add_option("--seed", opt.seed, "seed for randomized suites");
    sub->add_option("--count", opt.count,
                    "instance count for randomized suites");
  };

  CLI::App* classify = app.add_subcommand("classify", "generate the classifier");
  add_common(classify);

  CLI::App* points = app.add_subcommand("points", "list the points of a layer");
  add_common(points);
  points->add_option("--layer", opt.layer, "objects|arrows|core|E:<sort>");

  CLI::App* decode = app.add_subcommand("decode", "decode a point of a layer");
  add_common(decode);
  decode->add_option("--layer", opt.layer, "objects|arrows|core|E:<sort>");
  decode->add_option("--point", opt.point, "point index")->required();

  CLI::App* verify = app.add_subcommand("verify", "run the verification suites");
  add_common(verify);
  verify->add_option("--suite", opt.suite,
                     "all|bijections|structure|descent|zeta|presentations");
  verify->add_option("--bundle", opt.bundle_dir,
                     "cross-check a written classifier tree");

  CLI::App* report =
      app.add_subcommand("report", "verify and emit a JSON report");
  add_common(report);
  report->add_option("--suite", opt.suite,
                     "all|bijections|structure|descent|zeta|presentations");
  report->add_option("--bundle", opt.bundle_dir,
                     "cross-check a written classifier tree");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (classify->parsed()) return cmd_classify(opt);
    if (points->parsed()) return cmd_points(opt);
    if (decode->parsed()) return cmd_decode(opt);
    if (verify->parsed()) return cmd_verify(opt, false);
    if (report->parsed()) return cmd_verify(opt, true);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGeneration;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGeneration;
  }
  return kExitUsage;
}
