#pragma once

#include <string>

#include "pacqe/formula.hpp"

namespace pacqe {

/// Parse the s-expression surface syntax into a core formula. Comparison
/// sugar (le/eq/ge/gt/cong, implies/iff) is expanded here; the core tree only
/// ever contains Lt/Mod atoms, Not/And/Or and the six quantifier nodes.
/// Syntax errors carry line:column positions.
Formula parse(const std::string& source);

/// Deterministic textual form; parse(render(f)) == f for every core formula.
std::string render(const Formula& f);

std::string render_term(const LinearTerm& t);

}  // namespace pacqe
