#include "pacqe/oracle.hpp"

#include <functional>
#include <memory>

namespace pacqe {

namespace {

Tri tri_not(Tri a) {
  if (a == Tri::Unknown) return Tri::Unknown;
  return a == Tri::True ? Tri::False : Tri::True;
}

// Kleene conjunction/disjunction: False (resp. True) dominates Unknown.
Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}

Tri tri_or(Tri a, Tri b) {
  if (a == Tri::True || b == Tri::True) return Tri::True;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::False;
}

bool covered(const std::set<std::string>& vars, const Assignment& nu,
             const std::string& except) {
  for (const std::string& v : vars)
    if (v != except && !nu.has(v)) return false;
  return true;
}

// Period/flip-bound scan for the 1-D pattern of `scanned` under nu.
//
// P collects every modulo-atom modulus plus the modulus of any CountMod node
// whose count variable is the scanned one, times the lcm of |coefficients| of
// the scanned variable. R bounds the positions where any atom (or hoistable
// counting comparison) can flip. `exact` is false when the scanned variable
// occurs freely under an inner binder, where no sound root bound is computed.
struct ScanParams {
  Int period = 1;
  Int coeff_lcm = 1;
  Int root = 0;
  bool exact = true;
  bool nested_inconclusive = false;
};

void scan_params(const Formula& f, const std::string& scanned,
                 const Assignment& nu, const OracleConfig& cfg,
                 bool scanned_live, ScanParams& out) {
  switch (f.kind()) {
    case Kind::True:
    case Kind::False:
      return;
    case Kind::Lt: {
      if (!scanned_live) return;
      Int a = f.term().coeff(scanned);
      if (sign(a) == 0) return;
      out.coeff_lcm = lcm_int(out.coeff_lcm, abs_int(a));
      Int num = abs_int(f.term().constant_part());
      for (const auto& [v, c] : f.term().coeffs()) {
        if (v == scanned) continue;
        if (!nu.has(v)) {
          out.exact = false;
          return;
        }
        num += abs_int(c) * abs_int(nu.get(v));
      }
      Int bound = num / abs_int(a) + 1;
      if (bound > out.root) out.root = bound;
      return;
    }
    case Kind::Mod: {
      out.period = lcm_int(out.period, f.modulus());
      if (scanned_live && sign(f.term().coeff(scanned)) != 0)
        out.coeff_lcm = lcm_int(out.coeff_lcm, abs_int(f.term().coeff(scanned)));
      return;
    }
    case Kind::Not:
    case Kind::And:
    case Kind::Or:
      for (const Formula& c : f.children())
        scan_params(c, scanned, nu, cfg, scanned_live, out);
      return;
    default:
      break;
  }

  // Binder node. If it rebinds the scanned variable, the subtree no longer
  // depends on it (count variables never shadow: they are free occurrences).
  bool live_inside = scanned_live && f.var_y() != scanned;
  bool scanned_free_inside =
      live_inside && f.child().free_vars().count(scanned) != 0;

  if (scanned_live && f.has_count_var() && f.var_x() == scanned &&
      !scanned_free_inside) {
    // Truth depends on the scanned variable only through the count
    // comparison; the count itself is scan-independent.
    if (covered(f.child().free_vars(), nu, f.var_y())) {
      CountResult n = count_line(f.child(), f.var_y(), nu, cfg);
      if (n.is_finite()) {
        if (f.kind() == Kind::CountMod) {
          out.period = lcm_int(out.period, f.count_modulus());
        } else {
          Int bound = abs_int(n.value) + 1;
          if (bound > out.root) out.root = bound;
        }
      } else if (n.kind == CountResult::Kind::Inconclusive) {
        out.nested_inconclusive = true;
      }
      // Infinite: the comparison is constant in the scanned variable.
    } else {
      out.exact = false;
    }
  } else if (scanned_free_inside) {
    // Scanned variable under an inner binder: no sound root bound here.
    out.exact = false;
  }
  // Collect the subtree's moduli regardless (they only grow P); coefficient
  // contributions of the scanned variable matter only where it is still the
  // same free variable.
  scan_params(f.child(), scanned, nu, cfg, scanned_free_inside, out);
}

// One node of the compiled 1-D evaluator.
struct LineEval {
  enum class Tag { Const, Atom, CountCmp, Not, AndOr, Fallback } tag;
  Tri const_value = Tri::Unknown;

  // Atom: value(v) = rest + coeff·v, then either "< 0" or "≡ residue mod q"
  Int coeff, rest, modulus, residue;
  bool is_mod = false;

  // CountCmp: compare v against a precomputed count
  Kind cmp_kind = Kind::CountGeqVar;
  CountResult count{CountResult::Kind::Finite, 0, ""};
  Int cmp_modulus = 1;

  std::vector<std::unique_ptr<LineEval>> children;
  bool is_and = false;

  // Fallback: full recursive evaluation per point
  const Formula* formula = nullptr;
};

std::unique_ptr<LineEval> compile_line(const Formula& f,
                                       const std::string& scanned,
                                       const Assignment& nu,
                                       const OracleConfig& cfg) {
  auto node = std::make_unique<LineEval>();

  if (f.free_vars().count(scanned) == 0) {
    node->tag = LineEval::Tag::Const;
    node->const_value = oracle_eval(f, nu, cfg);
    return node;
  }

  switch (f.kind()) {
    case Kind::Lt:
    case Kind::Mod: {
      node->tag = LineEval::Tag::Atom;
      node->coeff = f.term().coeff(scanned);
      LinearTerm rest = f.term().without(scanned);
      node->rest = rest.evaluate(nu);
      node->is_mod = f.kind() == Kind::Mod;
      if (node->is_mod) {
        node->modulus = f.modulus();
        node->residue = f.residue();
      }
      return node;
    }
    case Kind::Not:
    case Kind::And:
    case Kind::Or: {
      node->tag = f.kind() == Kind::Not ? LineEval::Tag::Not
                                        : LineEval::Tag::AndOr;
      node->is_and = f.kind() == Kind::And;
      for (const Formula& c : f.children())
        node->children.push_back(compile_line(c, scanned, nu, cfg));
      return node;
    }
    default:
      break;
  }

  bool scanned_free_inside = f.var_y() != scanned &&
                             f.child().free_vars().count(scanned) != 0;
  if (f.has_count_var() && f.var_x() == scanned && !scanned_free_inside &&
      covered(f.child().free_vars(), nu, f.var_y())) {
    node->tag = LineEval::Tag::CountCmp;
    node->cmp_kind = f.kind();
    node->count = count_line(f.child(), f.var_y(), nu, cfg);
    if (f.kind() == Kind::CountMod) node->cmp_modulus = f.count_modulus();
    return node;
  }

  node->tag = LineEval::Tag::Fallback;
  node->formula = &f;
  return node;
}

Tri eval_line(const LineEval& node, const std::string& scanned,
              const Assignment& nu, const Int& v, const OracleConfig& cfg) {
  switch (node.tag) {
    case LineEval::Tag::Const:
      return node.const_value;
    case LineEval::Tag::Atom: {
      Int value = node.rest + node.coeff * v;
      if (node.is_mod)
        return tri_of(divides(node.modulus, value - node.residue));
      return tri_of(sign(value) < 0);
    }
    case LineEval::Tag::CountCmp: {
      if (node.count.kind == CountResult::Kind::Inconclusive)
        return Tri::Unknown;
      bool infinite = node.count.is_infinite();
      switch (node.cmp_kind) {
        case Kind::CountGeqVar:
          return tri_of(infinite || node.count.value >= v);
        case Kind::CountEqVar:
          return tri_of(!infinite && node.count.value == v);
        case Kind::CountMod:
          return tri_of(!infinite &&
                        divides(node.cmp_modulus, node.count.value - v));
        default:
          return Tri::Unknown;
      }
    }
    case LineEval::Tag::Not:
      return tri_not(eval_line(*node.children[0], scanned, nu, v, cfg));
    case LineEval::Tag::AndOr: {
      Tri acc = node.is_and ? Tri::True : Tri::False;
      for (const auto& c : node.children) {
        Tri t = eval_line(*c, scanned, nu, v, cfg);
        acc = node.is_and ? tri_and(acc, t) : tri_or(acc, t);
        if (node.is_and && acc == Tri::False) return acc;
        if (!node.is_and && acc == Tri::True) return acc;
      }
      return acc;
    }
    case LineEval::Tag::Fallback:
      return oracle_eval(*node.formula, nu.with(scanned, v), cfg);
  }
  return Tri::Unknown;
}

}  // namespace

CountResult count_line(const Formula& f, const std::string& y,
                       const Assignment& nu, const OracleConfig& cfg) {
  ScanParams sp;
  scan_params(f, y, nu, cfg, true, sp);
  if (sp.nested_inconclusive)
    return CountResult::inconclusive("nested count was inconclusive");

  Int period = sp.period * sp.coeff_lcm;
  if (sign(period) <= 0) period = 1;

  // Window must cover all flip points plus probe·P stabilized points per
  // tail. Without an exact root bound, fall back to a generous heuristic
  // horizon; the stabilization probe below remains the safety net.
  Int want;
  if (sp.exact)
    want = sp.root + period * (cfg.period_probe + 1);
  else
    want = 4 * sp.root + 8 * period + 64;
  if (want < cfg.window) want = cfg.window;
  if (want > cfg.window_cap)
    fail(ErrorCode::Resource,
         "count_line: required window " + to_string(want) +
             " exceeds the cap " + to_string(cfg.window_cap));

  long W = want.get_si();
  long P = period.get_si();
  if (3 * P > W) W = 3 * P;  // probe needs W ≥ 3P
  if (W > cfg.window_cap)
    fail(ErrorCode::Resource, "count_line: window cap exceeded");

  std::unique_ptr<LineEval> compiled = compile_line(f, y, nu, cfg);
  std::vector<Tri> pattern(2 * W + 1);
  for (long v = -W; v <= W; ++v) {
    Tri t = eval_line(*compiled, y, nu, Int(v), cfg);
    if (t == Tri::Unknown)
      return CountResult::inconclusive("unknown point in window");
    pattern[v + W] = t;
  }
  auto at = [&](long v) { return pattern[v + W] == Tri::True; };

  // Verify period-P stabilization over the outermost probe·P points.
  long probe = cfg.period_probe;
  for (long v = W - probe * P; v <= W - P; ++v)
    if (at(v) != at(v + P))
      return CountResult::inconclusive("right tail not stabilized");
  for (long v = -W; v <= -W + (probe - 1) * P; ++v)
    if (at(v) != at(v + P))
      return CountResult::inconclusive("left tail not stabilized");

  // A solution inside a verified periodic tail recurs forever.
  for (long v = W - P + 1; v <= W; ++v)
    if (at(v)) return CountResult::infinite();
  for (long v = -W; v <= -W + P - 1; ++v)
    if (at(v)) return CountResult::infinite();

  Int count = 0;
  for (long v = -W; v <= W; ++v)
    if (at(v)) ++count;
  return CountResult::finite(count);
}

Tri oracle_eval(const Formula& f, const Assignment& nu,
                const OracleConfig& cfg) {
  switch (f.kind()) {
    case Kind::True:
      return Tri::True;
    case Kind::False:
      return Tri::False;
    case Kind::Lt:
      return tri_of(sign(f.term().evaluate(nu)) < 0);
    case Kind::Mod:
      return tri_of(divides(f.modulus(), f.term().evaluate(nu) - f.residue()));
    case Kind::Not:
      return tri_not(oracle_eval(f.child(), nu, cfg));
    case Kind::And: {
      Tri acc = Tri::True;
      for (const Formula& c : f.children()) {
        acc = tri_and(acc, oracle_eval(c, nu, cfg));
        if (acc == Tri::False) return acc;
      }
      return acc;
    }
    case Kind::Or: {
      Tri acc = Tri::False;
      for (const Formula& c : f.children()) {
        acc = tri_or(acc, oracle_eval(c, nu, cfg));
        if (acc == Tri::True) return acc;
      }
      return acc;
    }
    case Kind::Exists: {
      CountResult n = count_line(f.child(), f.var_y(), nu, cfg);
      if (n.is_infinite()) return Tri::True;
      if (n.is_finite()) return tri_of(sign(n.value) > 0);
      return Tri::Unknown;
    }
    case Kind::ForAll: {
      CountResult n =
          count_line(Formula::negation(f.child()), f.var_y(), nu, cfg);
      if (n.is_infinite()) return Tri::False;
      if (n.is_finite()) return tri_of(sign(n.value) == 0);
      return Tri::Unknown;
    }
    case Kind::CountGeqVar: {
      CountResult n = count_line(f.child(), f.var_y(), nu, cfg);
      if (n.is_infinite()) return Tri::True;  // ∞ satisfies every threshold
      if (n.is_finite()) return tri_of(n.value >= nu.get(f.var_x()));
      return Tri::Unknown;
    }
    case Kind::CountEqVar: {
      CountResult n = count_line(f.child(), f.var_y(), nu, cfg);
      if (n.is_infinite()) return Tri::False;
      if (n.is_finite()) return tri_of(n.value == nu.get(f.var_x()));
      return Tri::Unknown;
    }
    case Kind::CountGeqConst: {
      CountResult n = count_line(f.child(), f.var_y(), nu, cfg);
      if (n.is_infinite()) return Tri::True;
      if (n.is_finite()) return tri_of(n.value >= f.threshold());
      return Tri::Unknown;
    }
    case Kind::CountMod: {
      CountResult n = count_line(f.child(), f.var_y(), nu, cfg);
      if (n.is_infinite()) return Tri::False;
      if (n.is_finite())
        return tri_of(
            divides(f.count_modulus(), n.value - nu.get(f.var_x())));
      return Tri::Unknown;
    }
  }
  return Tri::Unknown;
}

}  // namespace pacqe
