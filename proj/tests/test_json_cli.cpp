#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "framecat/json_io.hpp"
#include "framecat/randgen.hpp"
#include "support.hpp"

using namespace framecat;
using namespace framecat::testsupport;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(FRAMECAT_BIN) + " " + args + " 2>&1";
  std::array<char, 4096> buf;
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) res.output += buf.data();
  int status = pclose(pipe);
  res.exit_code = WEXITSTATUS(status);
  return res;
}

std::string theory_path(const std::string& name) {
  return std::string(FRAMECAT_THEORY_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("presentation JSON is golden byte-for-byte") {
  std::string canonical =
      canon_dump(presentation_to_json(canonical_presentation({"a", "b"})));
  CHECK(canonical == slurp(std::string(FRAMECAT_GOLDEN_DIR) + "/canonical2.json"));

  Theory o = parse_theory(kTheoryO);
  std::string objects = canon_dump(
      presentation_to_json(gen_objects(o, ParameterSet::numeric(2))));
  CHECK(objects ==
        slurp(std::string(FRAMECAT_GOLDEN_DIR) + "/objects_O_p2.json"));
}

TEST_CASE("presentation JSON round-trips") {
  std::mt19937 rng(4711);
  for (int trial = 0; trial < 20; ++trial) {
    Presentation p = random_presentation(rng, 6, 5);
    Presentation q = presentation_from_json(presentation_to_json(p));
    CHECK(same_generators(p, q));
    REQUIRE(q.relations.size() == p.relations.size());
    for (std::size_t i = 0; i < p.relations.size(); ++i)
      CHECK(q.relations[i] == p.relations[i]);
    CHECK(canon_dump(presentation_to_json(q)) ==
          canon_dump(presentation_to_json(p)));
  }
}

TEST_CASE("category JSON round-trips") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    FiniteCategory c = random_category(rng, 3);
    FiniteCategory d = category_from_json(category_to_json(c));
    CHECK(d.n_obj == c.n_obj);
    CHECK(d.src == c.src);
    CHECK(d.tgt == c.tgt);
    CHECK(d.ident == c.ident);
    CHECK(d.comp == c.comp);
    CHECK(d.inv == c.inv);
  }
}

TEST_CASE("cli classify prints the object classifier counts") {
  RunResult r = run_cli("classify " + theory_path("O.gth") + " --p 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("g0: 4 generators, 5 points") != std::string::npos);
  CHECK(r.output.find("g1: 12 generators, 27 points") != std::string::npos);

  RunResult r0 = run_cli("classify " + theory_path("O.gth") + " --p 0");
  CHECK(r0.exit_code == 0);
  CHECK(r0.output.find("g0: 0 generators, 1 point\n") != std::string::npos);
}

TEST_CASE("cli rejects bad input with exit code 2") {
  RunResult bad = run_cli("classify " + theory_path("no_such_file.gth"));
  CHECK(bad.exit_code == 3);  // unreadable file is an I/O error
  std::ofstream out("/tmp/framecat_bad.gth");
  out << "theory Broken { sort ; }";
  out.close();
  RunResult parse = run_cli("classify /tmp/framecat_bad.gth");
  CHECK(parse.exit_code == 2);
  CHECK(parse.output.find("line 1") != std::string::npos);
  RunResult layer = run_cli("points " + theory_path("O.gth") +
                            " --p 2 --layer nowhere");
  CHECK(layer.exit_code == 2);
}

TEST_CASE("cli points and decode agree with the spec examples") {
  RunResult core = run_cli("points " + theory_path("O.gth") +
                           " --p 2 --layer core");
  CHECK(core.exit_code == 0);
  int rows = 0;
  for (char c : core.output)
    if (c == '\n') ++rows;
  CHECK(rows == 12);

  RunResult ex = run_cli("points " + theory_path("O.gth") +
                         " --p 2 --layer E:X");
  rows = 0;
  for (char c : ex.output)
    if (c == '\n') ++rows;
  CHECK(rows == 5);

  RunResult dec = run_cli("decode " + theory_path("O.gth") +
                          " --p 2 --layer objects --point 0");
  CHECK(dec.exit_code == 0);
  CHECK(dec.output.find("empty model") != std::string::npos);
}

TEST_CASE("cli verify is deterministic for a fixed seed") {
  std::string args = "report " + theory_path("O.gth") +
                     " --p 2 --suite descent --seed 7";
  RunResult a = run_cli(args);
  RunResult b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
}

TEST_CASE("cli verify cross-checks a written bundle") {
  RunResult w = run_cli("classify " + theory_path("O.gth") +
                        " --p 2 --out /tmp/framecat_bundle");
  CHECK(w.exit_code == 0);
  RunResult v = run_cli("verify " + theory_path("O.gth") +
                        " --p 2 --suite bijections --bundle /tmp/framecat_bundle");
  CHECK(v.exit_code == 0);
  CHECK(v.output.find("bundle-matches:g0.json") != std::string::npos);
  // Corrupt one file; the cross-check must fail with exit code 3.
  std::ofstream corrupt("/tmp/framecat_bundle/g1.json");
  corrupt << "{ not json";
  corrupt.close();
  RunResult bad = run_cli("verify " + theory_path("O.gth") +
                          " --p 2 --suite bijections --bundle /tmp/framecat_bundle");
  CHECK(bad.exit_code == 3);
}
