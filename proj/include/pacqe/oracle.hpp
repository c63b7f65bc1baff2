#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pacqe/eval.hpp"
#include "pacqe/formula.hpp"
#include "pacqe/qe.hpp"

namespace pacqe {

/// Three-valued truth: Unknown marks an inconclusive oracle verdict and is
/// propagated with Kleene semantics (never silently true/false).
enum class Tri { False, True, Unknown };

inline Tri tri_of(bool b) { return b ? Tri::True : Tri::False; }

struct OracleConfig {
  long window = 256;      // W: pattern evaluated over [-W, W]
  int period_probe = 2;   // tail stabilization checked over probe·P points
  long window_cap = 65536;
};

struct CountResult {
  enum class Kind { Finite, Infinite, Inconclusive };
  Kind kind;
  Int value;           // Finite only
  std::string reason;  // Inconclusive only

  static CountResult finite(Int n) {
    return {Kind::Finite, std::move(n), ""};
  }
  static CountResult infinite() { return {Kind::Infinite, 0, ""}; }
  static CountResult inconclusive(std::string why) {
    return {Kind::Inconclusive, 0, std::move(why)};
  }
  bool is_finite() const { return kind == Kind::Finite; }
  bool is_infinite() const { return kind == Kind::Infinite; }
};

/// |{n ∈ ℤ : ν[n/y] ⊨ φ}| by 1-D enumeration over a window with verified
/// period-P stabilization on both tails. Finite(n) only when both tails are
/// verified solution-free; Infinite only when a verified periodic tail
/// contains a solution. Nested quantifiers are evaluated recursively.
CountResult count_line(const Formula& f, const std::string& y,
                       const Assignment& nu, const OracleConfig& cfg = {});

/// Recursive brute-force satisfaction, counting quantifiers evaluated through
/// count_line per their definitional semantics.
Tri oracle_eval(const Formula& f, const Assignment& nu,
                const OracleConfig& cfg = {});

/// Reproducible pseudo-random formula generation.
struct GenConfig {
  int vars = 3;         // variable pool size (≥ 2)
  long coef_bound = 5;  // |coefficients|, |constants| ≤ B
  long mod_bound = 4;   // atom moduli and counting moduli ≤ Q
  int max_atoms = 4;
  long max_threshold_c = 6;
  bool quantified = true;  // false: plain quantifier-free bodies only
};

Formula gen_formula(const GenConfig& cfg, std::uint64_t seed);

/// Random assignment over the formula's free variables in [-box, box].
Assignment gen_assignment(const Formula& f, long box, std::uint64_t seed);

struct Counterexample {
  std::string formula;
  std::string assignment;
  bool oracle_value;
  bool qe_value;
};

struct CheckReport {
  long trials = 0;
  long samples_per_trial = 0;
  long mismatches = 0;
  long inconclusive = 0;
  long regenerated = 0;
  std::vector<Counterexample> counterexamples;  // capped at 10
  long wall_ms = 0;
};

struct CheckConfig {
  long trials = 100;
  long samples = 100;
  std::uint64_t seed = 42;
  GenConfig gen;
  long assign_box = 30;
  OracleConfig oracle;
  EliminationLimits limits{.max_cases = 4000, .max_threshold_e = 4000};
  long max_attempts = 64;          // per-trial regenerations on guard trips
  bool stop_on_first_mismatch = false;
};

/// The differential loop: generate, eliminate, compare against the oracle on
/// sampled assignments. Mismatches must be zero on a healthy build.
CheckReport differential_test(const CheckConfig& cfg);

std::string report_to_json(const CheckReport& report);

}  // namespace pacqe
