#pragma once

#include "topoprune/gf2.hpp"
#include "topoprune/persistence.hpp"

namespace topoprune {

// Rank of H_p(C_i) -> H_p(C_j) computed directly from explicit boundary
// matrices over the two-element field, with no use of the reduction
// algorithm: embedding cycles Z_p(C_i) and boundaries B_p(C_j) into the
// chain space of C_j,
//
//   rank = dim(B + Z) - dim B = rank [B | Z] - rank B.
//
// Exponential in the simplex count; intended as the verification oracle for
// reduce()/persistent_betti on small filtrations.
int persistent_betti_bruteforce(const filtration& f, int p, double i, double j);

// Sorted distinct appearance values of a filtration (the only scales at
// which its homology can change).
std::vector<double> appearance_values(const filtration& f);

} // namespace topoprune
