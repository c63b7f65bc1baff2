#pragma once

#include <set>

#include "pacqe/formula.hpp"

namespace pacqe {

/// Cardinalities and norms of Lin(φ), Hom(φ), Mod(φ).
/// Invariants: 1 ∈ mods always; hom = constants-zeroed lin, deduplicated.
struct ParamsReport {
  std::set<LinearTerm> lin;
  std::set<LinearTerm> hom;
  std::set<Int> mods;

  Int norm_lin = 0;   // max |coefficient or constant| over lin
  Int norm_hom = 0;
  Int norm_mods = 1;  // max modulus

  Int lcm_mods() const {
    Int m = 1;
    for (const Int& q : mods) m = lcm_int(m, q);
    return m;
  }
};

ParamsReport params_report(const Formula& f);

}  // namespace pacqe
