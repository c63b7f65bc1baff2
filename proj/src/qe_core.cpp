#include <algorithm>
#include <cassert>

#include "pacqe/qe.hpp"

namespace pacqe {

namespace {

Mutation g_mutation = Mutation::None;

bool checks_enabled() { return g_mutation == Mutation::None; }

Formula fold_not(Formula f) {
  if (f.kind() == Kind::True) return Formula::boolean(false);
  if (f.kind() == Kind::False) return Formula::boolean(true);
  return Formula::negation(std::move(f));
}

Formula fold_and(std::vector<Formula> children) {
  std::vector<Formula> kept;
  for (Formula& c : children) {
    if (c.kind() == Kind::False) return Formula::boolean(false);
    if (c.kind() == Kind::True) continue;
    kept.push_back(std::move(c));
  }
  return Formula::conjunction(std::move(kept));
}

Formula fold_or(std::vector<Formula> children) {
  std::vector<Formula> kept;
  for (Formula& c : children) {
    if (c.kind() == Kind::True) return Formula::boolean(true);
    if (c.kind() == Kind::False) continue;
    kept.push_back(std::move(c));
  }
  return Formula::disjunction(std::move(kept));
}

}  // namespace

void set_mutation(Mutation m) { g_mutation = m; }
Mutation current_mutation() { return g_mutation; }

Formula simplify_mod_constraint(const LinearTerm& t, const Int& q) {
  if (sign(q) <= 0) fail(ErrorCode::MalformedFormula, "modulus must be >= 1");
  std::set<std::string> var_set = t.vars();
  std::vector<std::string> vars(var_set.begin(), var_set.end());
  if (vars.empty())
    return Formula::boolean(divides(q, t.constant_part()));

  Int combos = 1;
  for (size_t i = 0; i < vars.size(); ++i) {
    combos *= q;
    if (combos > 1000000)
      fail(ErrorCode::Resource,
           "simplify_mod_constraint: residue map count q^|vars| exceeds 10^6");
  }

  // Odometer over residue maps, last variable fastest.
  std::vector<Int> residues(vars.size(), 0);
  std::vector<Formula> disjuncts;
  bool done = false;
  while (!done) {
    Int value = t.constant_part();
    for (size_t i = 0; i < vars.size(); ++i)
      value += t.coeff(vars[i]) * residues[i];
    if (divides(q, value)) {
      std::vector<Formula> conj;
      conj.reserve(vars.size());
      for (size_t i = 0; i < vars.size(); ++i)
        conj.push_back(Formula::mod(LinearTerm::variable(vars[i]), q,
                                    residues[i]));
      disjuncts.push_back(Formula::conjunction(std::move(conj)));
    }
    size_t pos = vars.size();
    while (true) {
      if (pos == 0) {
        done = true;
        break;
      }
      --pos;
      residues[pos] += 1;
      if (residues[pos] < q) break;
      residues[pos] = 0;
    }
  }

  if (disjuncts.empty()) return Formula::boolean(false);
  if (Int(static_cast<long>(disjuncts.size())) == combos)
    return Formula::boolean(true);  // every residue map survives
  return Formula::disjunction(std::move(disjuncts));
}

Formula make_mods_simple(const Formula& f) {
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
      return Formula::negation(make_mods_simple(f.child()));
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> out;
      out.reserve(f.children().size());
      for (const Formula& c : f.children()) out.push_back(make_mods_simple(c));
      return f.kind() == Kind::And ? Formula::conjunction(std::move(out))
                                   : Formula::disjunction(std::move(out));
    }
    case Kind::Exists:
      return Formula::exists(f.var_y(), make_mods_simple(f.child()));
    case Kind::ForAll:
      return Formula::forall(f.var_y(), make_mods_simple(f.child()));
    case Kind::CountGeqVar:
      return Formula::count_geq(f.var_x(), f.var_y(),
                                make_mods_simple(f.child()));
    case Kind::CountEqVar:
      return Formula::count_eq(f.var_x(), f.var_y(),
                               make_mods_simple(f.child()));
    case Kind::CountGeqConst:
      return Formula::count_geq_const(f.threshold(), f.var_y(),
                                      make_mods_simple(f.child()));
    case Kind::CountMod:
      return Formula::count_mod(f.var_x(), f.count_modulus(), f.var_y(),
                                make_mods_simple(f.child()));
  }
  fail(ErrorCode::Internal, "make_mods_simple: unreachable");
}

namespace {

void collect_y_coeffs(const Formula& f, const std::string& y, Int& k) {
  if (f.kind() == Kind::Lt) {
    Int a = abs_int(f.term().coeff(y));
    if (sign(a) != 0) k = lcm_int(k, a);
  }
  for (const Formula& c : f.children()) collect_y_coeffs(c, y, k);
}

// The three Step-I rewrite rules. Inequalities with y-coefficient a are
// scaled by k/|a| (which is exactly both sign rules at once); simple modulo
// constraints on y become ky ≡_{kq} kr.
Formula step1_rewrite(const Formula& f, const std::string& y, const Int& k) {
  switch (f.kind()) {
    case Kind::True:
    case Kind::False:
      return f;
    case Kind::Lt: {
      Int a = f.term().coeff(y);
      if (sign(a) == 0) return f;
      return Formula::lt0(f.term().scaled(k / abs_int(a)));
    }
    case Kind::Mod: {
      if (!f.is_simple_mod())
        fail(ErrorCode::Internal,
             "normalize_coeffs: non-simple modulo constraint in body");
      const std::string& v = f.term().coeffs().begin()->first;
      if (v != y) return f;
      return Formula::mod(LinearTerm::variable(y, k), f.modulus() * k,
                          f.residue() * k);
    }
    case Kind::Not:
      return Formula::negation(step1_rewrite(f.child(), y, k));
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> out;
      out.reserve(f.children().size());
      for (const Formula& c : f.children())
        out.push_back(step1_rewrite(c, y, k));
      return f.kind() == Kind::And ? Formula::conjunction(std::move(out))
                                   : Formula::disjunction(std::move(out));
    }
    default:
      fail(ErrorCode::UnsupportedQuantified,
           "normalize_coeffs: body must be quantifier-free");
  }
}

void assert_y_coeffs_normalized(const Formula& f, const std::string& y) {
  if (f.kind() == Kind::Lt || f.kind() == Kind::Mod) {
    Int a = abs_int(f.term().coeff(y));
    if (a > 1)
      fail(ErrorCode::Internal,
           "Step I postcondition violated: |coefficient of y| > 1");
  }
  for (const Formula& c : f.children()) assert_y_coeffs_normalized(c, y);
}

}  // namespace

NormalizedBody normalize_coeffs(const Formula& body, const std::string& y) {
  Int k = 1;
  collect_y_coeffs(body, y, k);
  Formula scaled = step1_rewrite(body, y, k);
  Formula renamed =
      substitute(scaled, LinearTerm::variable(y, k), LinearTerm::variable(y));
  Formula body1;
  if (g_mutation == Mutation::DropModKConjunct) {
    body1 = renamed;
  } else {
    body1 = Formula::conjunction(
        {Formula::mod(LinearTerm::variable(y), k, 0), std::move(renamed)});
  }
  assert_y_coeffs_normalized(body1, y);
  return {std::move(body1), std::move(k)};
}

std::vector<SegmentDescriptor> segments(const Ordering& o) {
  int ell = static_cast<int>(o.classes().size());
  std::vector<SegmentDescriptor> out;
  out.reserve(2 * ell + 1);
  out.push_back({SegmentDescriptor::Kind::BelowFirst, 0});
  for (int j = 0; j < ell; ++j) {
    if (j > 0) out.push_back({SegmentDescriptor::Kind::Between, j});
    out.push_back({SegmentDescriptor::Kind::AtTerm, j});
  }
  out.push_back({SegmentDescriptor::Kind::AboveLast, 0});
  return out;
}

CountingPipeline::CountingPipeline(CountMode mode, std::string x,
                                   std::string y, Formula body,
                                   EliminationLimits limits)
    : mode_(mode), x_(std::move(x)), y_(std::move(y)), limits_(limits) {
  if (x_ == y_)
    fail(ErrorCode::MalformedFormula,
         "counting variables must be syntactically different");
  if (!body.is_quantifier_free())
    fail(ErrorCode::UnsupportedQuantified,
         "counting pipeline requires a quantifier-free body");

  // m = k · lcm of the input body's moduli: a common multiple of every
  // modulus in body1, and the single modulus the output will carry.
  Int input_mod_lcm = params_report(body).lcm_mods();

  Formula simple = make_mods_simple(body);
  NormalizedBody nb = normalize_coeffs(simple, y_);
  body1_ = nb.body1;
  k_ = nb.k;
  m_ = k_ * input_mod_lcm;

  if (m_ > limits_.max_cases)
    fail(ErrorCode::CaseExplosion,
         "case modulus m = " + to_string(m_) + " exceeds --max-cases bound " +
             to_string(limits_.max_cases));
  m_long_ = m_.get_si();

  // T: y-free terms t with t, y - t, or -y + t in Lin(body1).
  std::set<LinearTerm> tset;
  std::function<void(const Formula&)> scan = [&](const Formula& f) {
    if (f.kind() == Kind::Lt) {
      Int a = f.term().coeff(y_);
      if (sign(a) == 0)
        tset.insert(f.term());
      else if (a == 1)
        tset.insert(-(f.term().without(y_)));  // y + s < 0: t = -s
      else
        tset.insert(f.term().without(y_));     // -y + s < 0: t = s
    }
    for (const Formula& c : f.children()) scan(c);
  };
  scan(body1_);
  tset.insert(LinearTerm());  // 0 joins the ordered set
  base_terms_.assign(tset.begin(), tset.end());

  // Z = freevars(body1) \ {y}
  std::set<std::string> z = body1_.free_vars();
  z.erase(y_);
  case_vars_.assign(z.begin(), z.end());
  for (size_t i = 0; i < case_vars_.size(); ++i)
    case_var_index_[case_vars_[i]] = i;

  orderings_ = enumerate_orderings(base_terms_);

  if (case_count() > limits_.max_cases)
    fail(ErrorCode::CaseExplosion,
         "case count |orderings|*m^|Z| = " + to_string(case_count()) +
             " exceeds --max-cases bound " + to_string(limits_.max_cases));

  // z-modulo atoms, deduplicated in traversal order.
  std::function<void(const Formula&)> collect = [&](const Formula& f) {
    if (f.kind() == Kind::Mod) {
      if (!f.is_simple_mod())
        fail(ErrorCode::Internal, "body1 contains a non-simple modulo atom");
      const std::string& v = f.term().coeffs().begin()->first;
      if (v != y_) {
        auto key = std::make_tuple(v, f.modulus(), f.residue());
        if (zmod_index_.emplace(key, zmod_atoms_.size()).second)
          zmod_atoms_.push_back(key);
      }
    }
    for (const Formula& c : f.children()) collect(c);
  };
  collect(body1_);

  info_.reserve(orderings_.size());
  for (const Ordering& o : orderings_) {
    OrderingInfo oi;
    oi.reps = o.representatives();
    oi.segs = segments(o);
    oi.lin_truth.resize(base_terms_.size());
    for (size_t t = 0; t < base_terms_.size(); ++t)
      oi.lin_truth[t] = o.class_index_of(base_terms_[t]);
    info_.push_back(std::move(oi));
  }
}

Int CountingPipeline::case_count() const {
  Int count = static_cast<long>(orderings_.size());
  for (size_t i = 0; i < case_vars_.size(); ++i) {
    count *= m_;
    if (count > limits_.max_cases) return count;  // enough to trip the guard
  }
  return count;
}

Int CountingPipeline::residue_value(const LinearTerm& t,
                                    const Residues& r) const {
  Int value = t.constant_part();
  for (const auto& [v, c] : t.coeffs()) {
    auto it = case_var_index_.find(v);
    if (it == case_var_index_.end())
      fail(ErrorCode::Internal,
           "residue_value: term mentions a non-case variable '" + v + "'");
    value += c * r[it->second];
  }
  return value;
}

std::vector<bool> CountingPipeline::zmod_truth(const Residues& r) const {
  std::vector<bool> truth(zmod_atoms_.size());
  for (size_t i = 0; i < zmod_atoms_.size(); ++i) {
    const auto& [v, q, r0] = zmod_atoms_[i];
    auto it = case_var_index_.find(v);
    if (it == case_var_index_.end())
      fail(ErrorCode::Internal, "zmod_truth: unknown case variable");
    truth[i] = sign(floor_mod(r[it->second] - r0, q)) == 0;
  }
  return truth;
}

// Replace every atom of body1 by its truth value under Γ_{i,r} ∧ γ, keeping
// y-modulo atoms verbatim. The ordering decides y-free inequalities (0 is
// among the ordered terms), the segment decides y-inequalities, the residue
// map decides z-modulo atoms.
Formula CountingPipeline::build_beta(size_t ordering_index,
                                     const SegmentDescriptor& seg,
                                     const std::vector<bool>& truth) const {
  const OrderingInfo& oi = info_[ordering_index];

  auto class_of = [&](const LinearTerm& t) {
    auto it = std::lower_bound(base_terms_.begin(), base_terms_.end(), t);
    if (it == base_terms_.end() || *it != t)
      fail(ErrorCode::Internal, "residual: inequality term not in T ∪ {0}");
    return oi.lin_truth[it - base_terms_.begin()];
  };
  int zero_class = class_of(LinearTerm());

  std::function<Formula(const Formula&)> rec =
      [&](const Formula& f) -> Formula {
    switch (f.kind()) {
      case Kind::True:
      case Kind::False:
        return f;
      case Kind::Lt: {
        Int a = f.term().coeff(y_);
        if (sign(a) == 0) {
          // t < 0 iff t's class precedes 0's class.
          return Formula::boolean(class_of(f.term()) < zero_class);
        }
        bool value = false;
        if (a == 1) {
          // y + s < 0 ⟺ y < t with t = -s
          int tc = class_of(-(f.term().without(y_)));
          switch (seg.kind) {
            case SegmentDescriptor::Kind::BelowFirst: value = true; break;
            case SegmentDescriptor::Kind::AtTerm:  value = tc > seg.index; break;
            case SegmentDescriptor::Kind::Between: value = tc >= seg.index; break;
            case SegmentDescriptor::Kind::AboveLast: value = false; break;
          }
        } else {
          // -y + s < 0 ⟺ t < y with t = s
          int tc = class_of(f.term().without(y_));
          switch (seg.kind) {
            case SegmentDescriptor::Kind::BelowFirst: value = false; break;
            case SegmentDescriptor::Kind::AtTerm:  value = tc < seg.index; break;
            case SegmentDescriptor::Kind::Between: value = tc < seg.index; break;
            case SegmentDescriptor::Kind::AboveLast: value = true; break;
          }
        }
        return Formula::boolean(value);
      }
      case Kind::Mod: {
        const std::string& v = f.term().coeffs().begin()->first;
        if (v == y_) return f;  // stays in β
        auto it = zmod_index_.find(
            std::make_tuple(v, f.modulus(), f.residue()));
        if (it == zmod_index_.end())
          fail(ErrorCode::Internal, "residual: unregistered z-modulo atom");
        return Formula::boolean(truth[it->second]);
      }
      case Kind::Not:
        return fold_not(rec(f.child()));
      case Kind::And:
      case Kind::Or: {
        std::vector<Formula> out;
        out.reserve(f.children().size());
        for (const Formula& c : f.children()) out.push_back(rec(c));
        return f.kind() == Kind::And ? fold_and(std::move(out))
                                     : fold_or(std::move(out));
      }
      default:
        fail(ErrorCode::Internal, "residual: quantifier in body1");
    }
  };
  return rec(body1_);
}

CountingPipeline::SegmentEval& CountingPipeline::segment_eval(
    size_t ordering_index, const SegmentDescriptor& seg,
    const std::vector<bool>& truth) {
  auto key = std::make_tuple(ordering_index, static_cast<int>(seg.kind),
                             seg.index, truth);
  auto it = seg_cache_.find(key);
  if (it != seg_cache_.end()) return it->second;

  SegmentEval se;
  se.beta = build_beta(ordering_index, seg, truth);
  if (se.beta.kind() == Kind::True || se.beta.kind() == Kind::False) {
    se.known_const = true;
    se.const_value = se.beta.kind() == Kind::True;
    se.any = se.const_value;
  }
  return seg_cache_.emplace(std::move(key), std::move(se)).first->second;
}

bool CountingPipeline::beta_at(const SegmentEval& se,
                               const Int& y_value) const {
  if (se.known_const) return se.const_value;
  Assignment nu;
  nu.set(y_, y_value);
  return evaluate_qf(se.beta, nu);
}

// The counting numbers come from enumerating y over one period [0, m).
void CountingPipeline::ensure_counts(SegmentEval& se) const {
  if (se.counted) return;
  se.prefix.assign(static_cast<size_t>(m_long_) + 1, 0);
  long running = 0;
  for (long v = 0; v < m_long_; ++v) {
    se.prefix[v] = running;
    if (se.known_const ? se.const_value : beta_at(se, Int(v))) ++running;
  }
  se.prefix[m_long_] = running;
  se.any = running > 0;
  se.counted = true;
}

// Satisfying count over the integer interval [lo, hi] (empty if lo > hi),
// using m-periodicity of β.
long CountingPipeline::count_range(const SegmentEval& se, const Int& lo,
                                   const Int& hi) const {
  if (lo > hi) return 0;
  auto upto = [&](const Int& x) {  // count over [0, x)
    Int full = x / m_;
    Int rem = x % m_;
    // callers keep x ≥ 0 here
    Int total = full * se.prefix[m_long_] + se.prefix[rem.get_si()];
    return total.get_si();
  };
  return upto(hi + 1) - upto(lo);
}

CountingPipeline::CaseResult CountingPipeline::case_result(
    size_t ordering_index, const Residues& r) {
  const OrderingInfo& oi = info_[ordering_index];
  size_t ell = oi.reps.size();
  std::vector<bool> truth = zmod_truth(r);

  CaseResult out;

  // A satisfiable β on a half-infinite segment yields infinitely many
  // solutions. β is m-periodic, so satisfiability is decided by enumerating
  // y ∈ [0, m).
  for (auto kind : {SegmentDescriptor::Kind::BelowFirst,
                    SegmentDescriptor::Kind::AboveLast}) {
    SegmentEval& se = segment_eval(ordering_index, {kind, 0}, truth);
    if (!se.known_const) ensure_counts(se);
    if (se.any) {
      out.infinite = true;
      return out;
    }
  }

  out.c.resize(ell, 0);
  Int c_sum = 0;
  for (size_t j = 0; j < ell; ++j) {
    SegmentEval& se = segment_eval(
        ordering_index, {SegmentDescriptor::Kind::AtTerm, (int)j}, truth);
    // c_j = 1 iff y ↦ r(t'_j) satisfies β (any representative mod m works:
    // β's moduli divide m).
    out.c[j] = beta_at(se, residue_value(oi.reps[j], r)) ? 1 : 0;
    c_sum += out.c[j];
  }

  LinearTerm sum;
  Int tail = 0;
  for (size_t j = 1; j < ell; ++j) {
    SegmentEval& se = segment_eval(
        ordering_index, {SegmentDescriptor::Kind::Between, (int)j}, truth);
    ensure_counts(se);
    Int p(se.prefix[m_long_]);
    Int u_lo = floor_mod(residue_value(oi.reps[j - 1], r), m_);
    Int base = floor_mod(residue_value(oi.reps[j], r), m_);
    Int u_hi;
    if (g_mutation == Mutation::OffByOneUHi)
      u_hi = base >= u_lo ? base : base + m_;  // faulty: allows ū = u̲
    else
      u_hi = base > u_lo ? base : base + m_;
    Int r_prime(count_range(se, u_lo + 1, u_hi - 1));
    Int rj = -p * (u_hi - u_lo) + m_ * r_prime;

    if (checks_enabled()) {
      if (sign(p) < 0 || p > m_ || sign(r_prime) < 0 || r_prime > m_ ||
          abs_int(rj) > m_ * m_ || !(u_lo < u_hi) || u_hi > u_lo + m_)
        fail(ErrorCode::Internal, "Step IV range invariant violated");
    }

    sum = sum + (oi.reps[j] - oi.reps[j - 1]).scaled(p);
    sum = sum + LinearTerm(rj);
    tail += rj;

    out.p.push_back(p);
    out.r.push_back(rj);
    out.u_lo.push_back(u_lo);
    out.u_hi.push_back(u_hi);
    out.r_prime.push_back(r_prime);
  }
  sum = sum + LinearTerm(m_ * c_sum);
  tail += m_ * c_sum;

  // Unless x is itself a case variable, it may only appear on the left of
  // the Step-V comparison (the threshold substitution x := c relies on it).
  if (checks_enabled() && case_var_index_.count(x_) == 0 && sum.mentions(x_))
    fail(ErrorCode::Internal, "case sum mentions the count variable");

  out.sum = std::move(sum);
  out.tail_const = std::move(tail);
  return out;
}

Formula CountingPipeline::residual_mod_formula(size_t ordering_index,
                                               const Residues& r,
                                               const SegmentDescriptor& seg) {
  return segment_eval(ordering_index, seg, zmod_truth(r)).beta;
}

std::vector<Formula> CountingPipeline::gamma_atoms(size_t ordering_index,
                                                   const Residues& r) const {
  std::vector<Formula> atoms = orderings_[ordering_index].atoms();
  for (size_t i = 0; i < case_vars_.size(); ++i)
    atoms.push_back(
        Formula::mod(LinearTerm::variable(case_vars_[i]), m_, r[i]));
  return atoms;
}

Formula CountingPipeline::step5_formula(const CaseResult& cr) const {
  LinearTerm mx = LinearTerm::variable(x_, m_);
  if (mode_ == CountMode::Geq) {
    if (cr.infinite) return Formula::boolean(true);
    if (g_mutation == Mutation::FlipStepVRelation)
      return Formula::lt(mx, cr.sum);  // faulty strict comparison
    return Formula::le(mx, cr.sum);
  }
  if (cr.infinite)
    return Formula::boolean(g_mutation == Mutation::EqInfiniteAsTrue);
  return Formula::eq(mx, cr.sum);
}

void CountingPipeline::for_each_case(
    const std::function<void(size_t, const Residues&)>& fn) const {
  for (size_t i = 0; i < orderings_.size(); ++i) {
    Residues r(case_vars_.size(), 0);
    while (true) {
      fn(i, r);
      size_t pos = case_vars_.size();
      bool done = case_vars_.empty();
      while (pos > 0) {
        --pos;
        r[pos] += 1;
        if (r[pos] < m_) break;
        r[pos] = 0;
        if (pos == 0) done = true;
      }
      if (done) break;
    }
  }
}

Formula CountingPipeline::eliminate() {
  std::vector<Formula> disjuncts;
  for_each_case([&](size_t i, const Residues& r) {
    CaseResult cr = case_result(i, r);
    Formula f5 = step5_formula(cr);
    if (f5.kind() == Kind::False) return;  // EQ-mode infinite segments
    std::vector<Formula> atoms = gamma_atoms(i, r);
    if (f5.kind() != Kind::True) atoms.push_back(std::move(f5));
    disjuncts.push_back(Formula::conjunction(std::move(atoms)));
  });
  Formula result = Formula::disjunction(std::move(disjuncts));

  if (checks_enabled()) {
    // m is the only modulus the pipeline ever emits.
    ParamsReport rep = params_report(result);
    for (const Int& q : rep.mods)
      if (q != 1 && q != m_)
        fail(ErrorCode::Internal,
             "output modulus " + to_string(q) + " differs from m = " +
                 to_string(m_));
  }
  return result;
}

Formula eliminate_count_var(CountMode mode, const std::string& x,
                            const std::string& y, const Formula& body,
                            const EliminationLimits& limits) {
  CountingPipeline pipeline(mode, x, y, body, limits);
  return pipeline.eliminate();
}

}  // namespace pacqe
