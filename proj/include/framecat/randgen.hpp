// Seeded generators for the randomized verification suites: presentations,
// sequents, small categories, sheaf actions and surjections.
#ifndef FRAMECAT_RANDGEN_HPP
#define FRAMECAT_RANDGEN_HPP

#include <random>

#include "framecat/fincat.hpp"
#include "framecat/presentation.hpp"

namespace framecat {

Presentation random_presentation(std::mt19937& rng, int max_gens,
                                 int max_rels);
Sequent random_sequent(std::mt19937& rng, int n_gens);

// Posets, discrete and codiscrete shapes, and the walking arrow.
FiniteCategory random_category(std::mt19937& rng, int max_obj = 4);

// Randomized completion of an action table; assignments propagate through
// the composition closure so dead ends surface immediately.
SheafAction random_action(std::mt19937& rng, const FiniteCategory& cat,
                          int max_fiber = 3);

std::vector<int> random_surjection(std::mt19937& rng, int dom, int cod);

}  // namespace framecat

#endif  // FRAMECAT_RANDGEN_HPP
