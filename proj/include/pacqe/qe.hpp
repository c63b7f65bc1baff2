#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pacqe/eval.hpp"
#include "pacqe/formula.hpp"
#include "pacqe/orderings.hpp"
#include "pacqe/params.hpp"

namespace pacqe {

enum class CountMode { Geq, Eq };

/// Test-only single-site fault injection for the mutation-sanity suite.
/// While a mutation is active the pipeline's internal invariant checks are
/// suspended, so the fault surfaces as a differential mismatch instead of an
/// internal error.
enum class Mutation {
  None,
  FlipStepVRelation,          // Step V emits m·x < S instead of m·x ≤ S
  DropModKConjunct,           // Step I omits the y ≡_k 0 conjunct
  OffByOneUHi,                // ū_j allows ū_j = u̲_j
  EqInfiniteAsTrue,           // EQ mode treats infinite segments like GEQ
  DropThresholdShortCircuit,  // threshold e ≤ 0 falls through to tuple path
};

void set_mutation(Mutation m);
Mutation current_mutation();

struct EliminationLimits {
  // Hard ceiling on |orderings| · m^|Z| (and on m itself, whose size drives
  // the O(m·|β|) segment counting).
  Int max_cases = 200000;
  // Ceiling on the threshold constant e = m·c - (Σ r_j + m·Σ c_j).
  Int max_threshold_e = 10000;
};

/// t ≡_q 0 rewritten as a disjunction over residue maps r : vars(t) → [q] of
/// conjunctions of simple constraints, keeping exactly the maps with
/// r(t) ≡ 0 (mod q). All maps surviving collapses to True, none to False.
Formula simplify_mod_constraint(const LinearTerm& t, const Int& q);

/// Rewrite every non-simple modulo atom via simplify_mod_constraint.
Formula make_mods_simple(const Formula& f);

/// Step I: normalize the coefficients of y to {-1, 0, 1}.
/// Requires all modulo atoms simple. Returns body1 = (y ≡_k 0 ∧ φ'[ky/y])
/// and k = lcm of the absolute y-coefficients (1 if y is absent).
struct NormalizedBody {
  Formula body1;
  Int k;
};
NormalizedBody normalize_coeffs(const Formula& body, const std::string& y);

/// Step III segment descriptors against the ordering's distinct ascending
/// terms t'_1 < … < t'_ℓ (0-based indices here).
struct SegmentDescriptor {
  enum class Kind { BelowFirst, AtTerm, Between, AboveLast };
  Kind kind;
  // AtTerm: index of t'; Between: index j with the segment (t'_{j-1}, t'_j).
  int index = 0;
};
std::vector<SegmentDescriptor> segments(const Ordering& o);  // 2ℓ+1 entries

/// Steps II–V for one counting quantifier (GEQ or EQ mode): the case table
/// over term orderings and residue classes, per-case residual formulae β,
/// segment counts, and the Step-V output. Cases are streamed lazily; the
/// (ordering, segment, z-residue-truth) → β caches make repeated residue maps
/// cheap. Instances are cheap to query from multiple callers but not
/// thread-safe (internal memo tables).
class CountingPipeline {
 public:
  CountingPipeline(CountMode mode, std::string x, std::string y, Formula body,
                   EliminationLimits limits = {});

  CountMode mode() const { return mode_; }
  const std::string& count_var() const { return x_; }
  const std::string& bound_var() const { return y_; }
  const Formula& body1() const { return body1_; }
  const Int& step1_k() const { return k_; }
  const Int& case_modulus() const { return m_; }  // m = k · lcm(Mod(φ))
  const std::vector<LinearTerm>& base_terms() const { return base_terms_; }
  const std::vector<Ordering>& orderings() const { return orderings_; }
  const std::vector<std::string>& case_vars() const { return case_vars_; }
  Int case_count() const;  // |orderings| · m^|Z|

  /// Residue map r : Z → [m], aligned with case_vars().
  using Residues = std::vector<Int>;

  struct CaseResult {
    bool infinite = false;  // some half-infinite segment has satisfiable β
    // Step V data (valid when !infinite):
    LinearTerm sum;   // Σ_j (p_j(t'_j − t'_{j−1}) + r_j) + m·Σ_j c_j
    Int tail_const;   // Σ_j r_j + m·Σ_j c_j
    // Step IV numbers, for introspection and invariant checks:
    std::vector<int> c;                     // per t'_j, j = 0..ℓ-1
    std::vector<Int> p, r, u_lo, u_hi, r_prime;  // per between-segment, j = 1..ℓ-1
  };

  CaseResult case_result(size_t ordering_index, const Residues& r);

  /// Residual formula β for one case and segment: a Boolean combination of
  /// simple modulo constraints over y (or True/False).
  Formula residual_mod_formula(size_t ordering_index, const Residues& r,
                               const SegmentDescriptor& seg);

  /// Γ_{i,r} as a flat atom list: ordering atoms, then z ≡_m r(z) over Z.
  std::vector<Formula> gamma_atoms(size_t ordering_index,
                                   const Residues& r) const;

  /// Step V formula for one case: True / False / single (in)equality on
  /// m·x vs the case sum.
  Formula step5_formula(const CaseResult& cr) const;

  /// Streams all cases (ordering index, residues) in deterministic order.
  void for_each_case(
      const std::function<void(size_t, const Residues&)>& fn) const;

  /// Value of a y-free term under a residue map.
  Int residue_value(const LinearTerm& t, const Residues& r) const;

  /// Assembled Ψ5 (GEQ) or Ψ5^= (EQ); False disjuncts dropped.
  Formula eliminate();

 private:
  struct SegmentEval {
    Formula beta;
    bool known_const = false;  // beta folded to True/False
    bool const_value = false;
    bool counted = false;
    std::vector<long> prefix;  // prefix[i] = #satisfying y in [0, i), i ≤ m
    bool any = false;          // some y in [0, m) satisfies beta
  };

  std::vector<bool> zmod_truth(const Residues& r) const;
  SegmentEval& segment_eval(size_t ordering_index,
                            const SegmentDescriptor& seg,
                            const std::vector<bool>& truth);
  Formula build_beta(size_t ordering_index, const SegmentDescriptor& seg,
                     const std::vector<bool>& truth) const;
  void ensure_counts(SegmentEval& se) const;
  long count_range(const SegmentEval& se, const Int& lo, const Int& hi) const;
  bool beta_at(const SegmentEval& se, const Int& y_value) const;

  CountMode mode_;
  std::string x_, y_;
  EliminationLimits limits_;
  Formula body1_;
  Int k_;
  Int m_;
  long m_long_ = 1;
  std::vector<LinearTerm> base_terms_;  // T ∪ {0}, canonical order
  std::vector<Ordering> orderings_;
  std::vector<std::string> case_vars_;  // Z sorted
  std::map<std::string, size_t> case_var_index_;

  // z-modulo atoms of body1 (var != y), deduplicated: (var, q, residue).
  std::vector<std::tuple<std::string, Int, Int>> zmod_atoms_;
  std::map<std::tuple<std::string, Int, Int>, size_t> zmod_index_;

  // Per ordering: representatives and the index of 0's class.
  struct OrderingInfo {
    std::vector<LinearTerm> reps;
    std::vector<SegmentDescriptor> segs;
    std::vector<int> lin_truth;  // class index per base term (for y-free atoms)
  };
  std::vector<OrderingInfo> info_;

  std::map<std::tuple<size_t, int, int, std::vector<bool>>, SegmentEval>
      seg_cache_;
};

Formula eliminate_count_var(CountMode mode, const std::string& x,
                            const std::string& y, const Formula& body,
                            const EliminationLimits& limits = {});

/// ∃≥c y body (threshold counting). Negative or zero c is trivially True.
Formula eliminate_threshold(const Int& c, const std::string& y,
                            const Formula& body,
                            const EliminationLimits& limits = {},
                            FreshVars* fresh = nullptr);

/// ∃(x,q) y body (modulo counting), Steps VI–VII on top of the EQ pipeline.
Formula eliminate_mod_count(const std::string& x, const Int& q,
                            const std::string& y, const Formula& body,
                            const EliminationLimits& limits = {},
                            FreshVars* fresh = nullptr);

/// Bottom-up driver: eliminates every quantifier, innermost first. ∃y runs as
/// ∃≥1 y, ∀y as ¬∃y¬. Quantifier-free input is returned unchanged up to
/// modulo-simplification.
Formula eliminate_all(const Formula& f, const EliminationLimits& limits = {});

/// Truth value of a sentence (errors on free variables).
bool decide(const Formula& sentence, const EliminationLimits& limits = {});

/// Tuple set I of the threshold construction: minimal tuples (i_2,…,i_ℓ) with
/// each i_j either pinned to a feasible constant in [0,e] or e (when the
/// difference exceeds e), satisfying e ≤ Σ i_j p_j. Exposed for testing.
std::vector<std::vector<long>> threshold_tuples(
    const std::vector<LinearTerm>& diffs, const std::vector<Int>& p,
    const Int& e);

}  // namespace pacqe
