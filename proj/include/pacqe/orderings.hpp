#pragma once

#include <utility>
#include <vector>

#include "pacqe/formula.hpp"

namespace pacqe {

enum class Rel { Lt, Eq };

/// An ordering t1 ◁ t2 ◁ … ◁ tn over a set of linear terms, ◁ in {<, =}.
/// Stored as ascending equality classes; members of a class are kept in
/// canonical term order, so equal orderings compare equal structurally.
class Ordering {
 public:
  explicit Ordering(std::vector<std::vector<LinearTerm>> classes)
      : classes_(std::move(classes)) {}

  static Ordering single(LinearTerm t) { return Ordering({{std::move(t)}}); }

  const std::vector<std::vector<LinearTerm>>& classes() const {
    return classes_;
  }

  /// Chain view: (t1, rel1), (t2, rel2), …, (tn, nullopt-as-Lt ignored).
  /// rels.size() == terms.size() - 1.
  std::pair<std::vector<LinearTerm>, std::vector<Rel>> chain() const;

  /// One canonical member per class, ascending. These are the t'_1 < … < t'_ℓ
  /// of Step III.
  std::vector<LinearTerm> representatives() const;

  /// Index of the class containing `t`, or -1.
  int class_index_of(const LinearTerm& t) const;

  size_t term_count() const;

  /// Conjunction of t_j ◁ t_{j+1} atoms in core form (True for single term).
  Formula formula() const { return Formula::conjunction(atoms()); }

  /// The same conjunction as a flat atom list, for embedding into Γ.
  std::vector<Formula> atoms() const;

  bool operator==(const Ordering& other) const;
  bool operator<(const Ordering& other) const;

 private:
  std::vector<std::vector<LinearTerm>> classes_;
};

/// Constraints interpreted over the rationals: every `strict` term < 0 and
/// every `equal` term = 0.
struct RationalConstraintSet {
  std::vector<LinearTerm> strict;
  std::vector<LinearTerm> equal;
};

/// True iff some rational point satisfies all constraints. Exact
/// Fourier–Motzkin elimination (equalities substituted away first); sound and
/// complete for this fragment.
bool feasible_rational(const RationalConstraintSet& cs);

/// Rational feasibility of the ordering's own constraint chain.
bool feasible_rational(const Ordering& o);

/// All rationally-satisfiable orderings of the given terms, by incremental
/// insertion. Input is deduplicated and sorted canonically first, so any
/// iteration order of the same term set yields the same sequence. The result
/// is a tautological, pairwise integer-disjoint case split.
std::vector<Ordering> enumerate_orderings(std::vector<LinearTerm> terms);

}  // namespace pacqe
