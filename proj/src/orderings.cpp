#include "pacqe/orderings.hpp"

#include <algorithm>
#include <set>

namespace pacqe {

std::pair<std::vector<LinearTerm>, std::vector<Rel>> Ordering::chain() const {
  std::vector<LinearTerm> terms;
  std::vector<Rel> rels;
  for (size_t i = 0; i < classes_.size(); ++i) {
    for (size_t j = 0; j < classes_[i].size(); ++j) {
      if (!terms.empty()) rels.push_back(j == 0 ? Rel::Lt : Rel::Eq);
      terms.push_back(classes_[i][j]);
    }
  }
  return {std::move(terms), std::move(rels)};
}

std::vector<LinearTerm> Ordering::representatives() const {
  std::vector<LinearTerm> reps;
  reps.reserve(classes_.size());
  for (const auto& cls : classes_) reps.push_back(cls.front());
  return reps;
}

int Ordering::class_index_of(const LinearTerm& t) const {
  for (size_t i = 0; i < classes_.size(); ++i)
    for (const LinearTerm& u : classes_[i])
      if (u == t) return static_cast<int>(i);
  return -1;
}

size_t Ordering::term_count() const {
  size_t n = 0;
  for (const auto& cls : classes_) n += cls.size();
  return n;
}

std::vector<Formula> Ordering::atoms() const {
  auto [terms, rels] = chain();
  std::vector<Formula> out;
  for (size_t i = 0; i < rels.size(); ++i) {
    if (rels[i] == Rel::Lt) {
      out.push_back(Formula::lt(terms[i], terms[i + 1]));
    } else {
      // t = t' expands to two negated strict atoms
      out.push_back(Formula::ge(terms[i], terms[i + 1]));
      out.push_back(Formula::le(terms[i], terms[i + 1]));
    }
  }
  return out;
}

bool Ordering::operator==(const Ordering& other) const {
  return classes_ == other.classes_;
}

bool Ordering::operator<(const Ordering& other) const {
  return classes_ < other.classes_;
}

namespace {

// Fourier–Motzkin over exact integers (cross-multiplication keeps everything
// integral; positivity of the multipliers preserves strictness).
//
// Returns false as soon as a variable-free constraint is violated.
bool fm_feasible(std::vector<LinearTerm> equal, std::vector<LinearTerm> strict) {
  // Substitute equalities away. Pick the first equality with a variable,
  // eliminate that variable everywhere, repeat.
  while (true) {
    size_t pick = equal.size();
    for (size_t i = 0; i < equal.size(); ++i) {
      if (!equal[i].is_constant()) {
        pick = i;
        break;
      }
      if (sign(equal[i].constant_part()) != 0) return false;  // c = 0, c != 0
    }
    if (pick == equal.size()) break;

    LinearTerm pivot = equal[pick];
    equal.erase(equal.begin() + pick);
    const auto& [v, a] = *pivot.coeffs().begin();
    Int absa = abs_int(a);
    int sa = sign(a);

    auto eliminate = [&](const LinearTerm& t) {
      Int c = t.coeff(v);
      if (sign(c) == 0) return t.scaled(absa);
      // |a|*t - sign(a)*c*pivot has no v; scaling by |a| > 0 is sound.
      return t.scaled(absa) - pivot.scaled(c * sa);
    };
    for (LinearTerm& t : equal) t = eliminate(t);
    for (LinearTerm& t : strict) t = eliminate(t);
  }
  for (const LinearTerm& t : equal)
    if (sign(t.constant_part()) != 0) return false;

  // Eliminate variables from the strict system one at a time.
  while (true) {
    // Constant constraints must already hold; drop them.
    std::vector<LinearTerm> pending;
    std::set<LinearTerm> seen;
    for (const LinearTerm& t : strict) {
      if (t.is_constant()) {
        if (sign(t.constant_part()) >= 0) return false;
        continue;
      }
      if (seen.insert(t).second) pending.push_back(t);
    }
    strict = std::move(pending);
    if (strict.empty()) return true;

    const std::string v = strict.front().coeffs().begin()->first;
    std::vector<LinearTerm> lower, upper, rest;
    for (const LinearTerm& t : strict) {
      int s = sign(t.coeff(v));
      if (s > 0)
        upper.push_back(t);  // a*v + s < 0 with a > 0: v bounded above
      else if (s < 0)
        lower.push_back(t);
      else
        rest.push_back(t);
    }
    // v is unbounded on one side: every (lower, upper) combination vanishes.
    for (const LinearTerm& lo : lower) {
      Int a = -lo.coeff(v);  // a > 0
      for (const LinearTerm& up : upper) {
        Int b = up.coeff(v);  // b > 0
        rest.push_back(lo.scaled(b) + up.scaled(a));
      }
    }
    strict = std::move(rest);
  }
}

}  // namespace

bool feasible_rational(const RationalConstraintSet& cs) {
  return fm_feasible(cs.equal, cs.strict);
}

bool feasible_rational(const Ordering& o) {
  RationalConstraintSet cs;
  auto [terms, rels] = o.chain();
  for (size_t i = 0; i < rels.size(); ++i) {
    if (rels[i] == Rel::Lt)
      cs.strict.push_back(terms[i] - terms[i + 1]);
    else
      cs.equal.push_back(terms[i] - terms[i + 1]);
  }
  return feasible_rational(cs);
}

std::vector<Ordering> enumerate_orderings(std::vector<LinearTerm> terms) {
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  if (terms.empty()) return {};

  std::vector<Ordering> family = {Ordering::single(terms.front())};
  for (size_t j = 1; j < terms.size(); ++j) {
    const LinearTerm& t = terms[j];
    std::vector<Ordering> next;
    for (const Ordering& o : family) {
      const auto& classes = o.classes();
      // Slots left to right, EQ before LT at each anchor:
      // LT-before-class-0, then per class i: EQ(i), LT-after-i.
      for (size_t slot = 0; slot <= 2 * classes.size(); ++slot) {
        std::vector<std::vector<LinearTerm>> candidate;
        if (slot % 2 == 0) {
          // Strictly between class (slot/2 - 1) and class slot/2.
          size_t at = slot / 2;
          candidate.reserve(classes.size() + 1);
          candidate.insert(candidate.end(), classes.begin(),
                           classes.begin() + at);
          candidate.push_back({t});
          candidate.insert(candidate.end(), classes.begin() + at,
                           classes.end());
        } else {
          // Equal to class (slot-1)/2; keep the class canonically sorted.
          size_t at = (slot - 1) / 2;
          candidate = classes;
          auto& cls = candidate[at];
          cls.insert(std::upper_bound(cls.begin(), cls.end(), t), t);
        }
        Ordering extended(std::move(candidate));
        if (feasible_rational(extended)) next.push_back(std::move(extended));
      }
    }
    family = std::move(next);
  }
  return family;
}

}  // namespace pacqe
