#pragma once

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pacqe/errors.hpp"
#include "pacqe/term.hpp"

namespace pacqe {

enum class Kind {
  True,
  False,
  Lt,            // term < 0
  Mod,           // term ≡ residue (mod modulus)
  Not,
  And,
  Or,
  Exists,        // ∃y φ
  ForAll,        // ∀y φ
  CountGeqVar,   // ∃≥x y φ : at least x-many y satisfy φ
  CountEqVar,    // ∃=x y φ : exactly x-many (false on infinitely many)
  CountGeqConst, // ∃≥c y φ : constant threshold
  CountMod,      // ∃(x,q) y φ : count finite and ≡ x (mod q)
};

/// Immutable formula tree. Copies share structure; nothing mutates after
/// construction, so values are safe to share across workers.
class Formula {
 public:
  Formula() : Formula(boolean(true)) {}

  static Formula boolean(bool value) {
    auto n = std::make_shared<Node>();
    n->kind = value ? Kind::True : Kind::False;
    return Formula(std::move(n));
  }

  /// Atom: term < 0.
  static Formula lt0(LinearTerm term) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Lt;
    n->term = std::move(term);
    return Formula(std::move(n));
  }

  /// Atom: term ≡ residue (mod modulus); modulus ≥ 1, residue in [0, modulus).
  static Formula mod(LinearTerm term, Int modulus, Int residue) {
    if (sign(modulus) <= 0)
      fail(ErrorCode::MalformedFormula, "modulus must be >= 1");
    if (sign(residue) < 0 || residue >= modulus)
      fail(ErrorCode::MalformedFormula, "residue must lie in [0, modulus)");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Mod;
    n->term = std::move(term);
    n->a = std::move(modulus);
    n->b = std::move(residue);
    return Formula(std::move(n));
  }

  static Formula negation(Formula f) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Not;
    n->children.push_back(std::move(f));
    return Formula(std::move(n));
  }

  /// Empty conjunction is True, singleton is the child itself.
  static Formula conjunction(std::vector<Formula> children) {
    if (children.empty()) return boolean(true);
    if (children.size() == 1) return std::move(children.front());
    auto n = std::make_shared<Node>();
    n->kind = Kind::And;
    n->children = std::move(children);
    return Formula(std::move(n));
  }

  /// Empty disjunction is False, singleton is the child itself.
  static Formula disjunction(std::vector<Formula> children) {
    if (children.empty()) return boolean(false);
    if (children.size() == 1) return std::move(children.front());
    auto n = std::make_shared<Node>();
    n->kind = Kind::Or;
    n->children = std::move(children);
    return Formula(std::move(n));
  }

  static Formula exists(std::string y, Formula body) {
    return binder(Kind::Exists, "", std::move(y), std::move(body));
  }

  static Formula forall(std::string y, Formula body) {
    return binder(Kind::ForAll, "", std::move(y), std::move(body));
  }

  static Formula count_geq(std::string x, std::string y, Formula body) {
    require_distinct(x, y);
    return binder(Kind::CountGeqVar, std::move(x), std::move(y),
                  std::move(body));
  }

  static Formula count_eq(std::string x, std::string y, Formula body) {
    require_distinct(x, y);
    return binder(Kind::CountEqVar, std::move(x), std::move(y),
                  std::move(body));
  }

  static Formula count_geq_const(Int c, std::string y, Formula body) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::CountGeqConst;
    n->a = std::move(c);
    n->var_y = std::move(y);
    n->children.push_back(std::move(body));
    return Formula(std::move(n));
  }

  static Formula count_mod(std::string x, Int q, std::string y, Formula body) {
    require_distinct(x, y);
    if (sign(q) <= 0)
      fail(ErrorCode::MalformedFormula, "counting modulus must be >= 1");
    auto n = std::make_shared<Node>();
    n->kind = Kind::CountMod;
    n->a = std::move(q);
    n->var_x = std::move(x);
    n->var_y = std::move(y);
    n->children.push_back(std::move(body));
    return Formula(std::move(n));
  }

  // Comparison sugar, expanded per the ¬(·<0) encoding.
  static Formula lt(const LinearTerm& t1, const LinearTerm& t2) {
    return lt0(t1 - t2);
  }
  static Formula le(const LinearTerm& t1, const LinearTerm& t2) {
    return negation(lt0(t2 - t1));
  }
  static Formula gt(const LinearTerm& t1, const LinearTerm& t2) {
    return lt0(t2 - t1);
  }
  static Formula ge(const LinearTerm& t1, const LinearTerm& t2) {
    return negation(lt0(t1 - t2));
  }
  static Formula eq(const LinearTerm& t1, const LinearTerm& t2) {
    return conjunction({negation(lt0(t1 - t2)), negation(lt0(t2 - t1))});
  }
  /// t1 ≡_q t2  desugars to  (t1 − t2) ≡ 0 (mod q).
  static Formula cong(const LinearTerm& t1, const LinearTerm& t2, Int q) {
    return mod(t1 - t2, std::move(q), 0);
  }
  static Formula implies(Formula a, Formula b) {
    return disjunction({negation(std::move(a)), std::move(b)});
  }
  static Formula iff(Formula a, Formula b) {
    return disjunction({conjunction({a, b}),
                        conjunction({negation(a), negation(b)})});
  }

  Kind kind() const { return node_->kind; }
  const LinearTerm& term() const { return node_->term; }
  const Int& modulus() const { return node_->a; }
  const Int& residue() const { return node_->b; }
  const Int& threshold() const { return node_->a; }      // CountGeqConst
  const Int& count_modulus() const { return node_->a; }  // CountMod
  const std::string& var_x() const { return node_->var_x; }
  const std::string& var_y() const { return node_->var_y; }
  const std::vector<Formula>& children() const { return node_->children; }
  const Formula& child(size_t i = 0) const { return node_->children[i]; }

  bool is_atom() const {
    return kind() == Kind::Lt || kind() == Kind::Mod || kind() == Kind::True ||
           kind() == Kind::False;
  }

  bool is_quantifier() const {
    switch (kind()) {
      case Kind::Exists:
      case Kind::ForAll:
      case Kind::CountGeqVar:
      case Kind::CountEqVar:
      case Kind::CountGeqConst:
      case Kind::CountMod:
        return true;
      default:
        return false;
    }
  }

  bool has_count_var() const {
    return kind() == Kind::CountGeqVar || kind() == Kind::CountEqVar ||
           kind() == Kind::CountMod;
  }

  /// A modulo constraint is simple iff its term is a bare variable.
  bool is_simple_mod() const {
    return kind() == Kind::Mod && term().is_single_variable();
  }

  bool is_quantifier_free() const {
    if (is_quantifier()) return false;
    for (const Formula& c : children())
      if (!c.is_quantifier_free()) return false;
    return true;
  }

  std::set<std::string> free_vars() const {
    std::set<std::string> out;
    collect_free_vars(out);
    return out;
  }

  /// All variables, free or bound (binders included).
  std::set<std::string> all_vars() const {
    std::set<std::string> out;
    collect_all_vars(out);
    return out;
  }

  bool operator==(const Formula& other) const {
    return structurally_equal(*this, other);
  }
  bool operator!=(const Formula& other) const { return !(*this == other); }

 private:
  struct Node {
    Kind kind = Kind::True;
    LinearTerm term;           // Lt, Mod
    Int a = 0;                 // Mod modulus / CountGeqConst c / CountMod q
    Int b = 0;                 // Mod residue
    std::string var_x;         // CountGeqVar, CountEqVar, CountMod
    std::string var_y;         // all binders
    std::vector<Formula> children;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static void require_distinct(const std::string& x, const std::string& y) {
    if (x == y)
      fail(ErrorCode::MalformedFormula,
           "counting binder variables must be syntactically different: '" + x +
               "'");
  }

  static Formula binder(Kind kind, std::string x, std::string y,
                        Formula body) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->var_x = std::move(x);
    n->var_y = std::move(y);
    n->children.push_back(std::move(body));
    return Formula(std::move(n));
  }

  void collect_free_vars(std::set<std::string>& out) const {
    switch (kind()) {
      case Kind::True:
      case Kind::False:
        return;
      case Kind::Lt:
      case Kind::Mod:
        for (const auto& [v, c] : term().coeffs()) out.insert(v);
        return;
      case Kind::Not:
      case Kind::And:
      case Kind::Or:
        for (const Formula& c : children()) c.collect_free_vars(out);
        return;
      case Kind::Exists:
      case Kind::ForAll:
      case Kind::CountGeqConst: {
        std::set<std::string> inner = child().free_vars();
        inner.erase(var_y());
        out.insert(inner.begin(), inner.end());
        return;
      }
      case Kind::CountGeqVar:
      case Kind::CountEqVar:
      case Kind::CountMod: {
        // freevars(∃≥x y φ) = {x} ∪ (freevars(φ) \ {y})
        std::set<std::string> inner = child().free_vars();
        inner.erase(var_y());
        out.insert(inner.begin(), inner.end());
        out.insert(var_x());
        return;
      }
    }
  }

  void collect_all_vars(std::set<std::string>& out) const {
    switch (kind()) {
      case Kind::Lt:
      case Kind::Mod:
        for (const auto& [v, c] : term().coeffs()) out.insert(v);
        return;
      default:
        break;
    }
    if (is_quantifier()) {
      out.insert(var_y());
      if (has_count_var()) out.insert(var_x());
    }
    for (const Formula& c : children()) c.collect_all_vars(out);
  }

  static bool structurally_equal(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::True:
      case Kind::False:
        return true;
      case Kind::Lt:
        return a.term() == b.term();
      case Kind::Mod:
        return a.term() == b.term() && a.modulus() == b.modulus() &&
               a.residue() == b.residue();
      default:
        break;
    }
    if (a.var_x() != b.var_x() || a.var_y() != b.var_y()) return false;
    if (a.node_->a != b.node_->a || a.node_->b != b.node_->b) return false;
    if (a.children().size() != b.children().size()) return false;
    for (size_t i = 0; i < a.children().size(); ++i)
      if (!structurally_equal(a.children()[i], b.children()[i])) return false;
    return true;
  }

  std::shared_ptr<const Node> node_;
};

/// Fresh-variable source. Generated names use the reserved "$" prefix that the
/// parser rejects, so freshness against any parsed input is guaranteed.
class FreshVars {
 public:
  std::string next() { return "$" + std::to_string(counter_++); }

 private:
  unsigned long counter_ = 0;
};

}  // namespace pacqe
