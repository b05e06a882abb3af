#include "support.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace framecat::testsupport {

const char* kTheoryO = "theory O { sort X }";
const char* kTheoryPointed =
    "theory Pointed { sort X; rel Pt(X);"
    " axiom []: |- exists x:X. Pt(x);"
    " axiom [x:X,y:X]: Pt(x) & Pt(y) |- x = y; }";
const char* kTheoryGraphSym =
    "theory SymGraph { sort V; rel E(V,V);"
    " axiom [x:V,y:V]: E(x,y) |- E(y,x); }";

std::vector<CorpusTheory> corpus() {
  return {
      {"objects", parse_theory(kTheoryO)},
      {"pointed", parse_theory(kTheoryPointed)},
      {"symgraph", parse_theory(kTheoryGraphSym)},
  };
}

}  // namespace framecat::testsupport
