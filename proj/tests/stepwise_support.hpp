#pragma once

// Test-only helpers: evaluate the pipeline's intermediate formulae Ψ1…Ψ5 at a
// fixed assignment through their defining semantics, independently of the
// Step IV/V arithmetic that produces the final output. Counting-quantified
// intermediates (Ψ0, Ψ1) go through the brute-force oracle.

#include "pacqe/oracle.hpp"
#include "pacqe/qe.hpp"

namespace pacqe::testsupport {

inline bool beta_holds(const Formula& beta, const std::string& y,
                       const Int& value) {
  Assignment nu;
  nu.set(y, value);
  return evaluate_qf(beta, nu);
}

inline bool beta_satisfiable(const Formula& beta, const std::string& y,
                             const Int& m) {
  for (Int v = 0; v < m; ++v)
    if (beta_holds(beta, y, v)) return true;
  return false;
}

/// Number of satisfying y in [lo, hi]; enumerates directly on narrow
/// intervals and falls back to one-period masks on wide ones.
inline Int beta_count_interval(const Formula& beta, const std::string& y,
                               const Int& m, const Int& lo, const Int& hi) {
  if (lo > hi) return 0;
  if (hi - lo <= 512) {
    Int count = 0;
    for (Int v = lo; v <= hi; ++v)
      if (beta_holds(beta, y, v)) ++count;
    return count;
  }
  long ml = m.get_si();
  std::vector<char> mask(ml);
  long per_period = 0;
  for (long v = 0; v < ml; ++v) {
    mask[v] = beta_holds(beta, y, Int(v)) ? 1 : 0;
    if (mask[v]) ++per_period;
  }
  auto upto = [&](const Int& x) {  // count of satisfying y in [0, x), x ≥ 0
    Int full = x / m;
    long rem = Int(x % m).get_si();
    long partial = 0;
    for (long v = 0; v < rem; ++v)
      if (mask[v]) ++partial;
    return Int(full * per_period + partial);
  };
  // Shift so the interval is nonnegative; counts are m-periodic.
  Int shift = 0;
  if (sign(lo) < 0) shift = ((-lo) / m + 1) * m;
  return upto(hi + shift + 1) - upto(lo + shift);
}

struct StepValues {
  Tri psi0 = Tri::Unknown;
  Tri psi1 = Tri::Unknown;
  bool gamma_unique = false;  // exactly one ordering matched the assignment
  bool gamma_holds = false;   // Γ_{i,r} of the matching case evaluates true
  bool psi2 = false, psi3 = false, psi4 = false, psi5 = false;
  bool divisibility_ok = true;  // p_j·(t'_j − t'_{j−1}) + r_j ≡ 0 (mod m)
  bool ranges_ok = true;        // c_j ∈ {0,1}, p_j ∈ [0,m], r_j ∈ [−m²,m²]
  bool mods_ok = true;          // moduli of Ψ5 all equal m
};

/// One Ψ0 → Ψ5 chain; the pipeline and the assembled Ψ5 are built once and
/// queried per assignment.
class StepwiseInstance {
 public:
  StepwiseInstance(CountMode mode, std::string x, std::string y, Formula body,
                   EliminationLimits limits = {})
      : mode_(mode),
        x_(std::move(x)),
        y_(std::move(y)),
        pipe_(mode, x_, y_, std::move(body), limits),
        psi5_(pipe_.eliminate()) {
    const Formula& b0 = pipe_.body1();
    psi1_ = mode_ == CountMode::Geq ? Formula::count_geq(x_, y_, b0)
                                    : Formula::count_eq(x_, y_, b0);
    mods_ok_ = true;
    for (const Int& q : params_report(psi5_).mods)
      if (q != 1 && q != pipe_.case_modulus()) mods_ok_ = false;
  }

  CountingPipeline& pipeline() { return pipe_; }
  const Formula& psi5() const { return psi5_; }

  StepValues evaluate(const Formula& psi0, const Assignment& nu,
                      const OracleConfig& ocfg = {}) {
    StepValues out;
    out.mods_ok = mods_ok_;
    out.psi0 = oracle_eval(psi0, nu, ocfg);
    out.psi1 = oracle_eval(psi1_, nu, ocfg);

    const Int& m = pipe_.case_modulus();

    // Locate the case matching ν: the orderings partition ℤ^d and the
    // residue map is forced by ν mod m.
    size_t match = pipe_.orderings().size();
    int hits = 0;
    for (size_t i = 0; i < pipe_.orderings().size(); ++i) {
      if (evaluate_qf(pipe_.orderings()[i].formula(), nu)) {
        ++hits;
        match = i;
      }
    }
    out.gamma_unique = hits == 1;
    if (!out.gamma_unique) return out;

    CountingPipeline::Residues r;
    for (const std::string& z : pipe_.case_vars())
      r.push_back(floor_mod(nu.get(z), m));
    out.gamma_holds =
        evaluate_qf(Formula::conjunction(pipe_.gamma_atoms(match, r)), nu);

    out.psi2 = out.gamma_holds && out.psi1 == Tri::True;  // Ψ2 = ⋁ Γ ∧ Ψ1

    // Ψ3: count solutions per segment against the residual formulae β.
    const Ordering& o = pipe_.orderings()[match];
    std::vector<LinearTerm> reps = o.representatives();
    bool infinite = false;
    Int finite_total = 0;
    for (const SegmentDescriptor& seg : segments(o)) {
      Formula beta = pipe_.residual_mod_formula(match, r, seg);
      switch (seg.kind) {
        case SegmentDescriptor::Kind::BelowFirst:
        case SegmentDescriptor::Kind::AboveLast:
          if (beta_satisfiable(beta, y_, m)) infinite = true;
          break;
        case SegmentDescriptor::Kind::AtTerm:
          if (beta_holds(beta, y_, reps[seg.index].evaluate(nu)))
            ++finite_total;
          break;
        case SegmentDescriptor::Kind::Between: {
          Int lo = reps[seg.index - 1].evaluate(nu) + 1;
          Int hi = reps[seg.index].evaluate(nu) - 1;
          finite_total += beta_count_interval(beta, y_, m, lo, hi);
          break;
        }
      }
    }
    const Int& xv = nu.get(x_);
    if (mode_ == CountMode::Geq)
      out.psi3 = infinite || xv <= finite_total;
    else
      out.psi3 = !infinite && xv == finite_total;

    // Ψ4: the Step-IV numbers replace the per-segment counting quantifiers.
    CountingPipeline::CaseResult cr = pipe_.case_result(match, r);
    if (cr.infinite) {
      out.psi4 = mode_ == CountMode::Geq;
    } else {
      Int total = 0;
      for (int cj : cr.c) {
        if (cj != 0 && cj != 1) out.ranges_ok = false;
        total += cj;
      }
      for (size_t j = 0; j + 1 < reps.size(); ++j) {
        const Int& p = cr.p[j];
        const Int& rj = cr.r[j];
        if (sign(p) < 0 || p > m || abs_int(rj) > m * m)
          out.ranges_ok = false;
        Int contrib =
            p * (reps[j + 1].evaluate(nu) - reps[j].evaluate(nu)) + rj;
        if (!divides(m, contrib) || sign(contrib) < 0)
          out.divisibility_ok = false;
        total += contrib / m;  // exact when divisibility holds
      }
      out.psi4 = mode_ == CountMode::Geq ? xv <= total : xv == total;
    }

    out.psi5 = evaluate_qf(psi5_, nu);
    return out;
  }

 private:
  CountMode mode_;
  std::string x_, y_;
  CountingPipeline pipe_;
  Formula psi5_;
  Formula psi1_;
  bool mods_ok_ = true;
};

}  // namespace pacqe::testsupport
