#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "pacqe/params.hpp"
#include "pacqe/term.hpp"

using namespace pacqe;

namespace {

LinearTerm var(const std::string& v, long c = 1) {
  return LinearTerm::variable(v, Int(c));
}

}  // namespace

TEST_CASE("terms are canonical under construction order") {
  // Building from shuffled monomials yields identical values.
  std::mt19937_64 rng(7);
  std::vector<LinearTerm> monomials = {var("a", 2), var("b", -3), var("c", 5),
                                       LinearTerm(Int(11)), var("d", 1)};
  LinearTerm reference;
  for (const LinearTerm& m : monomials) reference = reference + m;
  for (int trial = 0; trial < 50; ++trial) {
    std::shuffle(monomials.begin(), monomials.end(), rng);
    LinearTerm t;
    for (const LinearTerm& m : monomials) t = t + m;
    CHECK(t == reference);
  }
}

TEST_CASE("zero coefficients are never stored") {
  LinearTerm t = var("x", 3) + var("x", -3) + var("y");
  CHECK(t.coeffs().size() == 1);
  CHECK(t.coeff("x") == 0);
  CHECK(t.coeff("y") == 1);
  CHECK((t - var("y")).is_zero());
}

TEST_CASE("arithmetic and evaluation") {
  LinearTerm t = var("x", 2) - var("y") + LinearTerm(Int(7));
  Assignment nu;
  nu.set("x", 5);
  nu.set("y", 3);
  CHECK(t.evaluate(nu) == 14);
  CHECK((-t).evaluate(nu) == -14);
  CHECK(t.scaled(3).evaluate(nu) == 42);
  CHECK(t.norm() == 7);
  CHECK(t.homogeneous().constant_part() == 0);
  CHECK(t.homogeneous().norm() == 2);
}

TEST_CASE("evaluation requires a complete assignment") {
  LinearTerm t = var("x") + var("q");
  Assignment nu;
  nu.set("x", 1);
  CHECK_THROWS_AS(t.evaluate(nu), Error);
}

TEST_CASE("divided is exact and checks divisibility") {
  LinearTerm t = var("x", 4) + LinearTerm(Int(-8));
  LinearTerm half = t.divided(4);
  CHECK(half.coeff("x") == 1);
  CHECK(half.constant_part() == -2);
  CHECK_THROWS_AS((var("x", 3).divided(2)), Error);
}

TEST_CASE("term order is total and deterministic") {
  LinearTerm a = var("x");
  LinearTerm b = var("y");
  LinearTerm c = LinearTerm(Int(0));
  CHECK(((a < b) != (b < a)));
  CHECK(!(a < a));
  std::vector<LinearTerm> v1 = {a, b, c}, v2 = {c, b, a};
  std::sort(v1.begin(), v1.end());
  std::sort(v2.begin(), v2.end());
  CHECK(v1 == v2);
}

TEST_CASE("params_report reads off Lin, Hom, Mod") {
  // φ = (2y − x + 1 < 0 ∧ x ≡_3 2)
  Formula f = Formula::conjunction(
      {Formula::lt0(var("y", 2) - var("x") + LinearTerm(Int(1))),
       Formula::mod(var("x"), 3, 2)});
  ParamsReport rep = params_report(f);
  CHECK(rep.lin.size() == 1);
  CHECK(rep.lin.count(var("y", 2) - var("x") + LinearTerm(Int(1))) == 1);
  CHECK(rep.hom.count(var("y", 2) - var("x")) == 1);
  CHECK(rep.mods == std::set<Int>{1, 3});
  CHECK(rep.norm_lin == 2);
}

TEST_CASE("params_report of True is empty, mods contain 1") {
  ParamsReport rep = params_report(Formula::boolean(true));
  CHECK(rep.lin.empty());
  CHECK(rep.hom.empty());
  CHECK(rep.mods == std::set<Int>{1});
}

TEST_CASE("params_report deduplicates") {
  Formula atom = Formula::lt0(var("x"));
  Formula f = Formula::disjunction({atom, atom});
  ParamsReport rep = params_report(f);
  CHECK(rep.lin.size() == 1);
}

TEST_CASE("params invariants: hom terms homogeneous, |hom| <= |lin|") {
  Formula f = Formula::conjunction(
      {Formula::lt0(var("x") + LinearTerm(Int(1))),
       Formula::lt0(var("x") + LinearTerm(Int(5))),
       Formula::mod(var("z") - var("x"), 4, 1)});
  ParamsReport rep = params_report(f);
  for (const LinearTerm& t : rep.hom) CHECK(t.is_homogeneous());
  CHECK(rep.hom.size() <= rep.lin.size());
  CHECK(rep.lin.size() == 2);
  CHECK(rep.hom.size() == 1);
  CHECK(rep.mods == std::set<Int>{1, 4});
}
