// Shared theory corpus for the unit tests and the acceptance suite.
#ifndef FRAMECAT_TESTS_SUPPORT_HPP
#define FRAMECAT_TESTS_SUPPORT_HPP

#include <string>
#include <vector>

#include "framecat/verify.hpp"

namespace framecat::testsupport {

extern const char* kTheoryO;
extern const char* kTheoryPointed;
extern const char* kTheoryGraphSym;

struct CorpusTheory {
  std::string label;
  Theory theory;
};
std::vector<CorpusTheory> corpus();

}  // namespace framecat::testsupport

#endif  // FRAMECAT_TESTS_SUPPORT_HPP
