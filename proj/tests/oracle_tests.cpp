#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pacqe/oracle.hpp"
#include "pacqe/parser.hpp"

using namespace pacqe;

namespace {

LinearTerm var(const std::string& v, long c = 1) {
  return LinearTerm::variable(v, Int(c));
}

Assignment assign(std::map<std::string, Int> m) {
  return Assignment(std::move(m));
}

Int direct_count(const Formula& f, const std::string& y, const Assignment& nu,
                 long lo, long hi) {
  Int count = 0;
  for (long v = lo; v <= hi; ++v)
    if (evaluate_qf(f, nu.with(y, Int(v)))) ++count;
  return count;
}

}  // namespace

TEST_CASE("count_line on a bounded congruence set") {
  Formula f = parse("(and (lt 0 y) (lt y 10) (mod y 3 1))");
  CountResult n = count_line(f, "y", Assignment{});
  REQUIRE(n.is_finite());
  CHECK(n.value == 3);  // {1, 4, 7}
}

TEST_CASE("count_line detects infinite periodic sets") {
  CountResult n = count_line(Formula::mod(var("y"), 2, 0), "y", Assignment{});
  CHECK(n.is_infinite());
}

TEST_CASE("count_line on a singleton") {
  CountResult n =
      count_line(Formula::eq(var("y"), LinearTerm(Int(5))), "y", Assignment{});
  REQUIRE(n.is_finite());
  CHECK(n.value == 1);
}

TEST_CASE("count_line of False is zero") {
  CountResult n = count_line(Formula::boolean(false), "y", Assignment{});
  REQUIRE(n.is_finite());
  CHECK(n.value == 0);
}

TEST_CASE("count_line handles solutions far outside the default window") {
  // All solutions sit beyond W = 256; the window must grow to the atom roots.
  CountResult n = count_line(
      Formula::eq(var("y"), LinearTerm(Int(300))), "y", Assignment{});
  REQUIRE(n.is_finite());
  CHECK(n.value == 1);

  CountResult m = count_line(
      Formula::lt(LinearTerm(Int(5000)), var("y")), "y", Assignment{});
  CHECK(m.is_infinite());

  Assignment nu = assign({{"z", 290}});
  Formula box = Formula::conjunction(
      {Formula::lt(LinearTerm(), var("y")), Formula::lt(var("y"), var("z"))});
  CountResult k = count_line(box, "y", nu);
  REQUIRE(k.is_finite());
  CHECK(k.value == 289);
}

TEST_CASE("count_line agrees with direct enumeration on window-pure sets") {
  GenConfig cfg;
  cfg.vars = 2;
  cfg.coef_bound = 3;
  cfg.mod_bound = 3;
  cfg.quantified = false;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Formula body = gen_formula(cfg, 100 + seed);
    // Boxed into [-20, 20]: all solutions lie inside any sane window.
    Formula boxed = Formula::conjunction(
        {body, Formula::le(LinearTerm(Int(-20)), var("y")),
         Formula::le(var("y"), LinearTerm(Int(20)))});
    Assignment nu = gen_assignment(Formula::exists("y", boxed), 10, seed);
    CountResult n = count_line(boxed, "y", nu);
    REQUIRE(n.is_finite());
    CHECK(n.value == direct_count(boxed, "y", nu, -100, 100));
  }
}

TEST_CASE("count_line subadditivity over disjunction") {
  GenConfig cfg;
  cfg.vars = 2;
  cfg.coef_bound = 3;
  cfg.mod_bound = 4;
  cfg.quantified = false;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Formula a = gen_formula(cfg, 500 + seed);
    Formula b = gen_formula(cfg, 900 + seed);
    Formula both = Formula::disjunction({a, b});
    Assignment nu = gen_assignment(Formula::exists("y", both), 10, seed);
    CountResult na = count_line(a, "y", nu);
    CountResult nb = count_line(b, "y", nu);
    CountResult nab = count_line(both, "y", nu);
    if (na.is_infinite() || nb.is_infinite()) {
      CHECK(nab.is_infinite());
    } else if (na.is_finite() && nb.is_finite()) {
      REQUIRE(nab.is_finite());
      CHECK(nab.value <= na.value + nb.value);
    }
  }
}

TEST_CASE("oracle_eval on the counting quantifiers") {
  Formula f = parse("(count-eq x y (and (lt 0 y) (lt y z)))");
  CHECK(oracle_eval(f, assign({{"x", 3}, {"z", 4}})) == Tri::True);
  CHECK(oracle_eval(f, assign({{"x", 2}, {"z", 4}})) == Tri::False);

  Formula g = parse("(count-mod x 2 y (lt y 0))");
  CHECK(oracle_eval(g, assign({{"x", 0}})) == Tri::False);  // infinite

  Formula h = Formula::count_geq("x", "y", Formula::boolean(true));
  CHECK(oracle_eval(h, assign({{"x", 10}})) == Tri::True);
}

TEST_CASE("oracle_eval: ∃y φ iff ∃≥1 y φ") {
  GenConfig cfg;
  cfg.vars = 3;
  cfg.quantified = false;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Formula body = gen_formula(cfg, 2000 + seed);
    Formula ex = Formula::exists("y", body);
    Formula ge1 = Formula::count_geq_const(1, "y", body);
    Assignment nu = gen_assignment(ex, 15, seed);
    CHECK(oracle_eval(ex, nu) == oracle_eval(ge1, nu));
  }
}

TEST_CASE("oracle_eval monotonicity of the threshold") {
  GenConfig cfg;
  cfg.vars = 3;
  cfg.quantified = false;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Formula body = gen_formula(cfg, 3000 + seed);
    if (body.free_vars().count("x") != 0) continue;  // count depends on x
    Formula f = Formula::count_geq("x", "y", body);
    Assignment nu = gen_assignment(f, 12, seed);
    if (oracle_eval(f, nu) == Tri::True) {
      Assignment weaker = nu.with("x", nu.get("x") - 1);
      CHECK(oracle_eval(f, weaker) == Tri::True);
    }
  }
}

TEST_CASE("generator is deterministic and golden-pinned") {
  GenConfig cfg;
  cfg.vars = 2;
  cfg.coef_bound = 3;
  cfg.mod_bound = 3;
  Formula a = gen_formula(cfg, 1);
  Formula b = gen_formula(cfg, 1);
  CHECK(a == b);
  CHECK(render(a) ==
        "(count-eq x y (or (not (mod (+ (* -1 y) -3) 3 2)) (and (mod (+ (* "
        "-2 y) -1) 2 1) (mod (+ (* -2 y) -1) 3 1))))");

  GenConfig d;
  CHECK(render(gen_formula(d, 1)) ==
        "(count-eq x y (lt (+ (* -1 y) (* -2 z) -1) 0))");
}

TEST_CASE("generator keeps binders well-formed") {
  GenConfig cfg;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Formula f = gen_formula(cfg, seed);  // constructors throw on x == y
    CHECK(f.all_vars().size() >= 1);
  }
}

TEST_CASE("generator with zero atom budget produces True bodies") {
  GenConfig cfg;
  cfg.max_atoms = 0;
  cfg.quantified = false;
  CHECK(gen_formula(cfg, 3) == Formula::boolean(true));
}

TEST_CASE("differential_test: zero trials give an empty passing report") {
  CheckConfig cc;
  cc.trials = 0;
  CheckReport report = differential_test(cc);
  CHECK(report.mismatches == 0);
  CHECK(report.inconclusive == 0);
  CHECK(report.counterexamples.empty());
}

TEST_CASE("differential_test smoke run") {
  CheckConfig cc;
  cc.trials = 25;
  cc.samples = 40;
  cc.seed = 99;
  CheckReport report = differential_test(cc);
  CHECK(report.mismatches == 0);
  std::string json = report_to_json(report);
  CHECK(json.find("\"mismatches\":0") != std::string::npos);
}

TEST_CASE("injected fault is caught by the differential loop") {
  set_mutation(Mutation::FlipStepVRelation);
  CheckConfig cc;
  cc.trials = 120;
  cc.samples = 60;
  cc.seed = 5;
  cc.stop_on_first_mismatch = true;
  CheckReport report = differential_test(cc);
  set_mutation(Mutation::None);
  CHECK(report.mismatches >= 1);
}
