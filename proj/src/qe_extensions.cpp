#include <algorithm>
#include <set>

#include "pacqe/qe.hpp"

namespace pacqe {

namespace {

bool checks_enabled() { return current_mutation() == Mutation::None; }

// The threshold and modulo-counting outputs only ever contain inequalities
// over pairs of the input's y-free term parts, so |Hom(output)| stays within
// 4 · max(|Hom(input)|, 1)²; the modulus set is pinned likewise.
void check_output_bounds(const Formula& input, const Formula& output,
                         const Int& expected_modulus, const char* what) {
  if (!checks_enabled()) return;
  ParamsReport in = params_report(input);
  ParamsReport out = params_report(output);
  Int hom_in(static_cast<long>(std::max<size_t>(in.hom.size(), 1)));
  if (Int(static_cast<long>(out.hom.size())) > 4 * hom_in * hom_in)
    fail(ErrorCode::Internal,
         std::string(what) + ": |Hom| bound 4·max(|Hom(φ)|,1)² violated");
  for (const Int& q : out.mods)
    if (q != 1 && q != expected_modulus)
      fail(ErrorCode::Internal,
           std::string(what) + ": output modulus " + to_string(q) +
               " differs from " + to_string(expected_modulus));
}

}  // namespace

std::vector<std::vector<long>> threshold_tuples(
    const std::vector<LinearTerm>& diffs, const std::vector<Int>& p,
    const Int& e) {
  std::vector<std::vector<long>> result;
  if (diffs.empty()) {
    if (sign(e) <= 0) result.push_back({});
    return result;
  }

  long ec = sign(e) > 0 ? e.get_si() : -1;  // [0,e] is empty for e < 0

  // Max achievable Σ i_j·p_j over the suffix starting at level j.
  std::vector<Int> suffix_max(diffs.size() + 1, 0);
  for (size_t j = diffs.size(); j > 0; --j)
    suffix_max[j - 1] = suffix_max[j] + Int(std::max<long>(ec, 0)) * p[j - 1];

  std::set<std::vector<long>> tuples;
  std::vector<long> tuple;
  RationalConstraintSet cs;

  // Each difference is pinned to a constant in [0, e] or placed above e
  // (contributing i_j = e). Placements strictly between consecutive integers
  // are integer-unsatisfiable and never explored; D_j < 0 contradicts the
  // ordering Γ and is skipped likewise.
  std::function<void(size_t, Int)> dfs = [&](size_t level, Int acc) {
    if (level == diffs.size()) {
      if (acc >= e) tuples.insert(tuple);
      return;
    }
    if (acc + suffix_max[level] < e) return;  // cannot reach e anymore

    const LinearTerm& d = diffs[level];
    bool last = level + 1 == diffs.size();

    // At the last level only the smallest feasible pin matters: any larger
    // pin yields a pointwise-dominated tuple.
    long start = 0;
    if (last && sign(p[level]) > 0) {
      Int need = e - acc;  // need i·p ≥ need
      if (sign(need) > 0) {
        Int lo = (need + p[level] - 1) / p[level];
        if (lo > ec) start = ec + 1;  // no pin can work
        else start = lo.get_si();
      }
    } else if (last && sign(p[level]) == 0 && acc < e) {
      start = ec + 1;  // level contributes nothing; dead end for pins
    }

    bool pinned_any = false;
    for (long i = start; i <= ec; ++i) {
      if (d.is_constant() && d.constant_part() != i) continue;
      cs.equal.push_back(d - LinearTerm(Int(i)));
      bool ok = feasible_rational(cs);
      if (ok) {
        tuple.push_back(i);
        dfs(level + 1, acc + Int(i) * p[level]);
        tuple.pop_back();
        pinned_any = true;
      }
      cs.equal.pop_back();
      if (ok && last) break;  // smallest feasible pin dominates the rest
    }

    // "Above e": i_j = e (only meaningful while [0,e] is nonempty). At the
    // last level a feasible pin already dominates this branch.
    if (ec >= 0 && !(last && pinned_any)) {
      cs.strict.push_back(LinearTerm(e) - d);  // e - D < 0
      if (feasible_rational(cs)) {
        tuple.push_back(ec);
        dfs(level + 1, acc + Int(ec) * p[level]);
        tuple.pop_back();
      }
      cs.strict.pop_back();
    }
  };
  dfs(0, 0);

  // Dominance pruning: keep the pointwise-minimal tuples only.
  for (const auto& u : tuples) {
    bool dominated = false;
    for (const auto& v : tuples) {
      if (&u == &v || v == u) continue;
      bool le_all = true;
      for (size_t j = 0; j < u.size(); ++j)
        if (v[j] > u[j]) {
          le_all = false;
          break;
        }
      if (le_all) {
        dominated = true;
        break;
      }
    }
    if (!dominated) result.push_back(u);
  }
  return result;
}

Formula eliminate_threshold(const Int& c, const std::string& y,
                            const Formula& body,
                            const EliminationLimits& limits,
                            FreshVars* fresh) {
  // Count ≥ c is vacuous for c ≤ 0 (ℤ semantics for the threshold).
  if (sign(c) <= 0) return Formula::boolean(true);

  FreshVars local;
  if (fresh == nullptr) fresh = &local;
  std::string z = fresh->next();

  CountingPipeline pipeline(CountMode::Geq, z, y, body, limits);
  const Int& m = pipeline.case_modulus();

  std::vector<Formula> disjuncts;
  pipeline.for_each_case([&](size_t i, const CountingPipeline::Residues& r) {
    CountingPipeline::CaseResult cr = pipeline.case_result(i, r);
    if (cr.infinite) {
      disjuncts.push_back(Formula::conjunction(pipeline.gamma_atoms(i, r)));
      return;
    }
    // z is fresh, so it occurs only on the left of the Step-V inequality;
    // substituting z := c leaves Γ and the sum untouched.
    if (checks_enabled() && cr.sum.mentions(z))
      fail(ErrorCode::Internal, "threshold: case sum mentions the fresh z");

    Int e = m * c - cr.tail_const;
    if (e <= 0 && current_mutation() != Mutation::DropThresholdShortCircuit) {
      // Every t'_j − t'_{j−1} ≥ 1 under the ordering and every p_j ≥ 0, so
      // the Step-V inequality already holds throughout Γ.
      disjuncts.push_back(Formula::conjunction(pipeline.gamma_atoms(i, r)));
      return;
    }
    if (e > limits.max_threshold_e)
      fail(ErrorCode::ThresholdExplosion,
           "threshold constant e = " + to_string(e) +
               " exceeds --max-threshold-e bound " +
               to_string(limits.max_threshold_e));

    const auto& reps_src = pipeline.orderings()[i].representatives();
    std::vector<LinearTerm> diffs;
    for (size_t j = 1; j < reps_src.size(); ++j)
      diffs.push_back(reps_src[j] - reps_src[j - 1]);

    std::vector<std::vector<long>> tuples = threshold_tuples(diffs, cr.p, e);
    if (tuples.empty()) return;  // unreachable count: disjunct is False

    std::vector<Formula> chi;
    chi.reserve(tuples.size());
    for (const auto& tuple : tuples) {
      std::vector<Formula> conj;
      conj.reserve(diffs.size());
      for (size_t j = 0; j < diffs.size(); ++j)
        conj.push_back(Formula::ge(diffs[j], LinearTerm(Int(tuple[j]))));
      chi.push_back(Formula::conjunction(std::move(conj)));
    }
    std::vector<Formula> atoms = pipeline.gamma_atoms(i, r);
    atoms.push_back(Formula::disjunction(std::move(chi)));
    disjuncts.push_back(Formula::conjunction(std::move(atoms)));
  });

  Formula result = Formula::disjunction(std::move(disjuncts));
  check_output_bounds(body, result, m, "threshold");
  return result;
}

Formula eliminate_mod_count(const std::string& x, const Int& q,
                            const std::string& y, const Formula& body,
                            const EliminationLimits& limits,
                            FreshVars* fresh) {
  if (sign(q) <= 0)
    fail(ErrorCode::MalformedFormula, "counting modulus must be >= 1");
  FreshVars local;
  if (fresh == nullptr) fresh = &local;
  std::string z = fresh->next();

  CountingPipeline pipeline(CountMode::Eq, z, y, body, limits);
  const Int& m = pipeline.case_modulus();
  Int mq = m * q;

  // Step VI residue maps: s : (Z ∪ {x}) → [mq].
  std::set<std::string> svar_set(pipeline.case_vars().begin(),
                                 pipeline.case_vars().end());
  svar_set.insert(x);
  std::vector<std::string> svars(svar_set.begin(), svar_set.end());

  Int refined_cases(static_cast<long>(pipeline.orderings().size()));
  for (size_t i = 0; i < svars.size() && refined_cases <= limits.max_cases;
       ++i)
    refined_cases *= mq;
  if (mq > limits.max_cases || refined_cases > limits.max_cases)
    fail(ErrorCode::CaseExplosion,
         "refined case count |orderings|*(mq)^(|Z|+1) = " +
             to_string(refined_cases) + " exceeds --max-cases bound " +
             to_string(limits.max_cases));

  size_t x_pos = 0;
  std::vector<size_t> z_pos;  // position of each case var inside svars
  for (size_t i = 0; i < svars.size(); ++i)
    if (svars[i] == x) x_pos = i;
  for (const std::string& v : pipeline.case_vars())
    z_pos.push_back(std::lower_bound(svars.begin(), svars.end(), v) -
                    svars.begin());

  std::vector<Formula> disjuncts;
  std::vector<Int> s(svars.size(), 0);
  for (size_t i = 0; i < pipeline.orderings().size(); ++i) {
    std::fill(s.begin(), s.end(), Int(0));
    bool done = false;
    while (!done) {
      // The refined map determines the original residues: r(u) = s(u) mod m.
      CountingPipeline::Residues r;
      r.reserve(z_pos.size());
      for (size_t zp : z_pos) r.push_back(floor_mod(s[zp], m));

      CountingPipeline::CaseResult cr = pipeline.case_result(i, r);
      if (!cr.infinite) {
        // Step VII: z ≡_q x is m·z ≡_mq m·x; with m·z pinned to the case sum
        // the congruence is decided by evaluating everything on s.
        Assignment nu;
        for (size_t j = 0; j < svars.size(); ++j) nu.set(svars[j], s[j]);
        Int sum_value = cr.sum.evaluate(nu);
        if (sign(floor_mod(m * s[x_pos] - sum_value, mq)) == 0) {
          std::vector<Formula> atoms = pipeline.orderings()[i].atoms();
          for (size_t j = 0; j < svars.size(); ++j)
            atoms.push_back(
                Formula::mod(LinearTerm::variable(svars[j]), mq, s[j]));
          disjuncts.push_back(Formula::conjunction(std::move(atoms)));
        }
      }
      size_t pos = svars.size();
      while (true) {
        if (pos == 0) {
          done = true;
          break;
        }
        --pos;
        s[pos] += 1;
        if (s[pos] < mq) break;
        s[pos] = 0;
      }
    }
  }

  Formula result = Formula::disjunction(std::move(disjuncts));
  check_output_bounds(body, result, mq, "mod-count");
  return result;
}

namespace {

Formula eliminate_rec(const Formula& f, const EliminationLimits& limits,
                      FreshVars& fresh) {
  switch (f.kind()) {
    case Kind::True:
    case Kind::False:
    case Kind::Lt:
      return f;
    case Kind::Mod:
      if (f.is_simple_mod()) return f;
      return simplify_mod_constraint(f.term() - LinearTerm(f.residue()),
                                     f.modulus());
    case Kind::Not:
      return Formula::negation(eliminate_rec(f.child(), limits, fresh));
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> out;
      out.reserve(f.children().size());
      for (const Formula& c : f.children())
        out.push_back(eliminate_rec(c, limits, fresh));
      return f.kind() == Kind::And ? Formula::conjunction(std::move(out))
                                   : Formula::disjunction(std::move(out));
    }
    case Kind::Exists:
      return eliminate_threshold(1, f.var_y(),
                                 eliminate_rec(f.child(), limits, fresh),
                                 limits, &fresh);
    case Kind::ForAll:
      // ∀y φ ≡ ¬∃y ¬φ
      return Formula::negation(eliminate_threshold(
          1, f.var_y(),
          Formula::negation(eliminate_rec(f.child(), limits, fresh)), limits,
          &fresh));
    case Kind::CountGeqVar:
      return eliminate_count_var(CountMode::Geq, f.var_x(), f.var_y(),
                                 eliminate_rec(f.child(), limits, fresh),
                                 limits);
    case Kind::CountEqVar:
      return eliminate_count_var(CountMode::Eq, f.var_x(), f.var_y(),
                                 eliminate_rec(f.child(), limits, fresh),
                                 limits);
    case Kind::CountGeqConst:
      return eliminate_threshold(f.threshold(), f.var_y(),
                                 eliminate_rec(f.child(), limits, fresh),
                                 limits, &fresh);
    case Kind::CountMod:
      return eliminate_mod_count(f.var_x(), f.count_modulus(), f.var_y(),
                                 eliminate_rec(f.child(), limits, fresh),
                                 limits, &fresh);
  }
  fail(ErrorCode::Internal, "eliminate_all: unreachable");
}

}  // namespace

Formula eliminate_all(const Formula& f, const EliminationLimits& limits) {
  FreshVars fresh;
  return eliminate_rec(f, limits, fresh);
}

bool decide(const Formula& sentence, const EliminationLimits& limits) {
  std::set<std::string> free = sentence.free_vars();
  if (!free.empty()) {
    std::string names;
    for (const std::string& v : free)
      names += (names.empty() ? "" : ", ") + v;
    fail(ErrorCode::OpenFormula,
         "decide requires a sentence; free variables: " + names);
  }
  Formula qf = eliminate_all(sentence, limits);
  return evaluate_qf(qf, Assignment{});
}

}  // namespace pacqe
