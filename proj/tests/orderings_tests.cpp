#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "pacqe/eval.hpp"
#include "pacqe/orderings.hpp"

using namespace pacqe;

namespace {

LinearTerm var(const std::string& v, long c = 1) {
  return LinearTerm::variable(v, Int(c));
}

// Independent oracle: all weak orders (ordered set partitions) of the terms,
// then filtered by rational feasibility. Fubini numbers: 1, 3, 13, 75, …
void all_weak_orders(const std::vector<LinearTerm>& terms, size_t j,
                     std::vector<std::vector<LinearTerm>>& classes,
                     std::vector<Ordering>& out) {
  if (j == terms.size()) {
    auto canonical = classes;
    for (auto& cls : canonical) std::sort(cls.begin(), cls.end());
    out.push_back(Ordering(std::move(canonical)));
    return;
  }
  for (size_t i = 0; i <= 2 * classes.size(); ++i) {
    if (i % 2 == 0) {
      classes.insert(classes.begin() + i / 2, {terms[j]});
      all_weak_orders(terms, j + 1, classes, out);
      classes.erase(classes.begin() + i / 2);
    } else {
      classes[(i - 1) / 2].push_back(terms[j]);
      all_weak_orders(terms, j + 1, classes, out);
      classes[(i - 1) / 2].pop_back();
    }
  }
}

std::vector<Ordering> brute_force_orderings(std::vector<LinearTerm> terms) {
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  std::vector<std::vector<LinearTerm>> classes;
  std::vector<Ordering> all;
  all_weak_orders(terms, 0, classes, all);
  std::vector<Ordering> feasible;
  for (const Ordering& o : all)
    if (feasible_rational(o)) feasible.push_back(o);
  std::sort(feasible.begin(), feasible.end());
  return feasible;
}

std::vector<Ordering> sorted(std::vector<Ordering> v) {
  std::sort(v.begin(), v.end());
  return v;
}

LinearTerm random_term(std::mt19937_64& rng, int d, long bound) {
  auto rnd = [&](long lo, long hi) {
    return lo + static_cast<long>(rng() % (hi - lo + 1));
  };
  const char* names[] = {"x", "y"};
  LinearTerm t(Int(rnd(-bound, bound)));
  for (int i = 0; i < d; ++i)
    t = t + LinearTerm::variable(names[i], Int(rnd(-bound, bound)));
  return t;
}

}  // namespace

TEST_CASE("feasible_rational basics") {
  RationalConstraintSet cs;
  cs.strict = {var("x") - var("y"), var("y") - var("x")};
  CHECK(!feasible_rational(cs));  // x < y and y < x

  cs.strict = {var("x"), -var("x") - LinearTerm(Int(1))};
  CHECK(feasible_rational(cs));  // x = -1/2 works over the rationals

  cs.strict = {var("y") - var("x")};
  cs.equal = {var("x") - var("y")};
  CHECK(!feasible_rational(cs));  // x = y contradicts y < x
}

TEST_CASE("feasible_rational handles equality chains and constants") {
  RationalConstraintSet cs;
  cs.equal = {var("x") - var("y"), var("y") - LinearTerm(Int(3))};
  cs.strict = {LinearTerm(Int(2)) - var("x")};  // 2 < x
  CHECK(feasible_rational(cs));
  cs.strict.push_back(var("x") - LinearTerm(Int(3)));  // x < 3 contradicts x=3
  CHECK(!feasible_rational(cs));
  RationalConstraintSet empty;
  CHECK(feasible_rational(empty));
}

TEST_CASE("enumerate_orderings of {x, 0}") {
  auto got = enumerate_orderings({var("x"), LinearTerm()});
  CHECK(got.size() == 3);  // x<0, x=0, 0<x
}

TEST_CASE("enumerate_orderings of {x, y, 0} matches the 13 weak orders") {
  std::vector<LinearTerm> terms = {var("x"), var("y"), LinearTerm()};
  auto got = enumerate_orderings(terms);
  CHECK(got.size() == 13);
  CHECK(sorted(got) == brute_force_orderings(terms));
}

TEST_CASE("enumerate_orderings of {x, x+1, 0} keeps the 5 feasible chains") {
  std::vector<LinearTerm> terms = {var("x"), var("x") + LinearTerm(Int(1)),
                                   LinearTerm()};
  auto got = enumerate_orderings(terms);
  CHECK(got.size() == 5);
  CHECK(sorted(got) == brute_force_orderings(terms));
}

TEST_CASE("ordering_formula shapes") {
  Ordering single = Ordering::single(var("x"));
  CHECK(single.formula() == Formula::boolean(true));

  Ordering lt({{var("x")}, {LinearTerm()}});
  CHECK(lt.formula() == Formula::lt0(var("x")));  // x < 0

  Ordering eq({{var("x"), var("y")}});
  CHECK(eq.formula() ==
        Formula::conjunction({Formula::ge(var("x"), var("y")),
                              Formula::le(var("x"), var("y"))}));
}

TEST_CASE("coverage: every integer point satisfies exactly one ordering") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + static_cast<int>(rng() % 4);  // up to 5 terms
    int d = 1 + static_cast<int>(rng() % 2);
    std::vector<LinearTerm> terms;
    for (int i = 0; i < n; ++i) terms.push_back(random_term(rng, d, 4));
    auto family = enumerate_orderings(terms);

    for (int pt = 0; pt < 40; ++pt) {
      Assignment nu;
      nu.set("x", Int(static_cast<long>(rng() % 41) - 20));
      nu.set("y", Int(static_cast<long>(rng() % 41) - 20));
      int hits = 0;
      for (const Ordering& o : family)
        if (evaluate_qf(o.formula(), nu)) ++hits;
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("exact agreement with brute force for n <= 4") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + static_cast<int>(rng() % 3);
    int d = 1 + static_cast<int>(rng() % 2);
    std::vector<LinearTerm> terms;
    for (int i = 0; i < n; ++i) terms.push_back(random_term(rng, d, 3));
    CHECK(sorted(enumerate_orderings(terms)) == brute_force_orderings(terms));
  }
}

TEST_CASE("count stays within the empirical O(n^2d) envelope") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + static_cast<int>(rng() % 4);
    int d = 1 + static_cast<int>(rng() % 2);
    std::vector<LinearTerm> terms;
    for (int i = 0; i < n; ++i) terms.push_back(random_term(rng, d, 4));
    auto family = enumerate_orderings(terms);
    double bound = 4.0 * std::pow(static_cast<double>(terms.size()),
                                  2.0 * static_cast<double>(d));
    CHECK(static_cast<double>(family.size()) <= bound);
  }
}

TEST_CASE("determinism: input order does not matter") {
  std::vector<LinearTerm> terms = {var("x"), var("y") - LinearTerm(Int(2)),
                                   LinearTerm(), var("x") + var("y")};
  auto reference = enumerate_orderings(terms);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(terms.begin(), terms.end(), rng);
    auto got = enumerate_orderings(terms);
    CHECK(got.size() == reference.size());
    for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == reference[i]);
  }
}

TEST_CASE("duplicate input terms collapse") {
  auto family = enumerate_orderings({var("x"), var("x"), LinearTerm()});
  CHECK(family.size() == 3);
}
