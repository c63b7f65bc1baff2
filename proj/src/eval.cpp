#include "pacqe/eval.hpp"

namespace pacqe {

bool evaluate_qf(const Formula& f, const Assignment& nu) {
  switch (f.kind()) {
    case Kind::True:
      return true;
    case Kind::False:
      return false;
    case Kind::Lt:
      return sign(f.term().evaluate(nu)) < 0;
    case Kind::Mod:
      return divides(f.modulus(), f.term().evaluate(nu) - f.residue());
    case Kind::Not:
      return !evaluate_qf(f.child(), nu);
    case Kind::And:
      for (const Formula& c : f.children())
        if (!evaluate_qf(c, nu)) return false;
      return true;
    case Kind::Or:
      for (const Formula& c : f.children())
        if (evaluate_qf(c, nu)) return true;
      return false;
    default:
      fail(ErrorCode::UnsupportedQuantified,
           "evaluate_qf: formula contains a quantifier");
  }
}

namespace {

// Replace the k*v monomial occurrence-wise: a*v becomes (a/k)*to.
LinearTerm substitute_term(const LinearTerm& t, const std::string& v,
                           const Int& k, const LinearTerm& to) {
  Int a = t.coeff(v);
  if (sign(a) == 0) return t;
  if (!divides(k, a))
    fail(ErrorCode::SubstitutionShape,
         "substitute: coefficient of '" + v + "' not divisible by " +
             to_string(k));
  return t.without(v) + to.scaled(a / k);
}

Formula substitute_rec(const Formula& f, const std::string& v, const Int& k,
                       const LinearTerm& to) {
  switch (f.kind()) {
    case Kind::True:
    case Kind::False:
      return f;
    case Kind::Lt:
      return Formula::lt0(substitute_term(f.term(), v, k, to));
    case Kind::Mod:
      return Formula::mod(substitute_term(f.term(), v, k, to), f.modulus(),
                          f.residue());
    case Kind::Not:
      return Formula::negation(substitute_rec(f.child(), v, k, to));
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> out;
      out.reserve(f.children().size());
      for (const Formula& c : f.children())
        out.push_back(substitute_rec(c, v, k, to));
      return f.kind() == Kind::And ? Formula::conjunction(std::move(out))
                                   : Formula::disjunction(std::move(out));
    }
    default:
      break;
  }

  // Binder cases. Occurrences of v under a binder for v are bound: leave the
  // subtree untouched. Capture of the binder variable by `to` is a pipeline
  // bug (all pipeline substitutions happen on quantifier-free formulae).
  if (f.var_y() == v) return f;
  if (to.mentions(f.var_y()))
    fail(ErrorCode::Internal,
         "substitute: replacement would capture bound variable '" +
             f.var_y() + "'");

  std::string x = f.var_x();
  if (f.has_count_var() && x == v) {
    // The count variable is a free occurrence but must remain a variable.
    if (k != 1 || !to.is_single_variable())
      fail(ErrorCode::SubstitutionShape,
           "substitute: count variable '" + v +
               "' can only be replaced by a variable");
    x = to.coeffs().begin()->first;
  }

  Formula body = substitute_rec(f.child(), v, k, to);
  switch (f.kind()) {
    case Kind::Exists:
      return Formula::exists(f.var_y(), std::move(body));
    case Kind::ForAll:
      return Formula::forall(f.var_y(), std::move(body));
    case Kind::CountGeqVar:
      return Formula::count_geq(x, f.var_y(), std::move(body));
    case Kind::CountEqVar:
      return Formula::count_eq(x, f.var_y(), std::move(body));
    case Kind::CountGeqConst:
      return Formula::count_geq_const(f.threshold(), f.var_y(),
                                      std::move(body));
    case Kind::CountMod:
      return Formula::count_mod(x, f.count_modulus(), f.var_y(),
                                std::move(body));
    default:
      fail(ErrorCode::Internal, "substitute: unreachable node kind");
  }
}

}  // namespace

Formula substitute(const Formula& f, const LinearTerm& from,
                   const LinearTerm& to) {
  if (from.coeffs().size() != 1 || !from.is_homogeneous())
    fail(ErrorCode::SubstitutionShape,
         "substitute: 'from' must be a scaled variable k*v");
  const auto& [v, k] = *from.coeffs().begin();
  if (sign(k) <= 0)
    fail(ErrorCode::SubstitutionShape,
         "substitute: scale factor must be positive");
  return substitute_rec(f, v, k, to);
}

}  // namespace pacqe
