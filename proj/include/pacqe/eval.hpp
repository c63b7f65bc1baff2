#pragma once

#include "pacqe/formula.hpp"

namespace pacqe {

/// Standard truth value of a quantifier-free formula under nu.
/// Lt(t) is true iff nu(t) < 0; Mod(t,q,r) iff q divides nu(t) - r.
bool evaluate_qf(const Formula& f, const Assignment& nu);

/// phi[from/to]. `from` must be a scaled variable k*v (k = 1 gives plain
/// variable replacement). For k > 1 every occurrence of v must carry a
/// coefficient divisible by k, as guaranteed after Step-I rewriting.
Formula substitute(const Formula& f, const LinearTerm& from,
                   const LinearTerm& to);

}  // namespace pacqe
