#include <random>

#include "pacqe/oracle.hpp"

namespace pacqe {

namespace {

// mt19937_64 is fully specified by the standard; bounded draws below avoid
// std::uniform_int_distribution, whose mapping is implementation-defined.
struct Rng {
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  std::mt19937_64 eng;

  long uniform(long lo, long hi) {  // inclusive
    if (hi <= lo) return lo;
    return lo + static_cast<long>(eng() % static_cast<std::uint64_t>(
                                             hi - lo + 1));
  }
  bool chance(int percent) { return uniform(0, 99) < percent; }
};

const char* kPool[] = {"x", "y", "z", "w", "v", "u", "s", "t"};

struct Generator {
  const GenConfig& cfg;
  Rng rng;
  std::vector<std::string> pool;
  std::vector<LinearTerm> term_bank;  // for EQ-class-exercising reuse

  Generator(const GenConfig& c, std::uint64_t seed) : cfg(c), rng(seed) {
    int n = std::max(cfg.vars, 2);
    for (int i = 0; i < n && i < 8; ++i) pool.push_back(kPool[i]);
  }

  Int coef() {
    long c = rng.uniform(-cfg.coef_bound, cfg.coef_bound);
    return Int(c == 0 ? 1 : c);
  }

  LinearTerm term(const std::vector<std::string>& scope,
                  const std::string* must_use) {
    // 30% of atoms reuse an existing term, exercising equal-term classes.
    if (must_use == nullptr && !term_bank.empty() && rng.chance(30))
      return term_bank[rng.uniform(0, term_bank.size() - 1)];
    LinearTerm t;
    long nvars = rng.uniform(1, std::min<long>(scope.size(), 3));
    std::vector<std::string> picked = scope;
    for (long i = 0; i < nvars; ++i) {
      size_t j = rng.uniform(i, picked.size() - 1);
      std::swap(picked[i], picked[j]);
    }
    picked.resize(nvars);
    if (must_use != nullptr) {
      bool present = false;
      for (const std::string& v : picked) present |= v == *must_use;
      if (!present) picked[0] = *must_use;
    }
    for (const std::string& v : picked)
      t = t + LinearTerm::variable(v, coef());
    t = t + LinearTerm(Int(rng.uniform(-cfg.coef_bound, cfg.coef_bound)));
    term_bank.push_back(t);
    return t;
  }

  Formula atom(const std::vector<std::string>& scope,
               const std::string* must_use) {
    LinearTerm t = term(scope, must_use);
    if (rng.chance(30) && cfg.mod_bound >= 2) {
      Int q(rng.uniform(2, cfg.mod_bound));
      Int r(rng.uniform(0, q.get_si() - 1));
      return Formula::mod(t, q, r);
    }
    return Formula::lt0(t);
  }

  Formula qf_body(const std::vector<std::string>& scope,
                  const std::string* must_use) {
    if (cfg.max_atoms < 1) return Formula::boolean(true);
    long atoms = rng.uniform(1, cfg.max_atoms);
    std::vector<Formula> leaves;
    for (long i = 0; i < atoms; ++i) {
      Formula a = atom(scope, i == 0 ? must_use : nullptr);
      if (rng.chance(25)) a = Formula::negation(std::move(a));
      leaves.push_back(std::move(a));
    }
    // Random binary combination tree.
    while (leaves.size() > 1) {
      size_t i = rng.uniform(0, leaves.size() - 2);
      Formula merged =
          rng.chance(50)
              ? Formula::conjunction({leaves[i], leaves[i + 1]})
              : Formula::disjunction({leaves[i], leaves[i + 1]});
      leaves[i] = std::move(merged);
      leaves.erase(leaves.begin() + i + 1);
    }
    return leaves.front();
  }

  std::pair<std::string, std::string> pick_xy() {
    size_t xi = rng.uniform(0, pool.size() - 1);
    size_t yi = rng.uniform(0, pool.size() - 2);
    if (yi >= xi) ++yi;
    return {pool[xi], pool[yi]};
  }

  // Body scope for a counting quantifier: y plus the remaining pool; x joins
  // only occasionally (it is then an ordinary case variable).
  std::vector<std::string> body_scope(const std::string& x,
                                      const std::string& y,
                                      bool allow_x) {
    std::vector<std::string> scope;
    scope.push_back(y);
    for (const std::string& v : pool)
      if (v != x && v != y) scope.push_back(v);
    if (allow_x && rng.chance(15)) scope.push_back(x);
    return scope;
  }

  Formula counting_node(int which, const std::string& x,
                        const std::string& y) {
    std::vector<std::string> scope = body_scope(x, y, which != 4);
    Formula body = qf_body(scope, &y);
    switch (which) {
      case 1:
        return Formula::count_geq(x, y, std::move(body));
      case 2:
        return Formula::count_eq(x, y, std::move(body));
      case 3:
        return Formula::count_geq_const(Int(rng.uniform(0, cfg.max_threshold_c)),
                                        y, std::move(body));
      default:
        return Formula::count_mod(x, Int(rng.uniform(1, cfg.mod_bound)), y,
                                  std::move(body));
    }
  }

  Formula generate() {
    if (!cfg.quantified) return qf_body(pool, nullptr);
    int shape = static_cast<int>(rng.uniform(0, 99));
    auto [x, y] = pick_xy();
    if (shape < 5) return qf_body(pool, nullptr);
    if (shape < 25) return counting_node(1, x, y);
    if (shape < 40) return counting_node(2, x, y);
    if (shape < 55) return counting_node(3, x, y);
    if (shape < 70) return counting_node(4, x, y);
    if (shape < 78) {  // plain ∃
      std::vector<std::string> scope = body_scope(x, y, true);
      return Formula::exists(y, qf_body(scope, &y));
    }
    if (shape < 84) {  // plain ∀
      std::vector<std::string> scope = body_scope(x, y, true);
      return Formula::forall(y, qf_body(scope, &y));
    }
    // Nested (depth 2): first-order quantifier over x around a counting
    // quantifier whose body is x-free, plus a guard atom on x.
    int inner = static_cast<int>(rng.uniform(1, 4));
    if (inner == 3) inner = 1;  // thresholds have no x: reuse ∃≥x
    Formula count = counting_node(inner, x, y);
    std::vector<std::string> guard_scope = {x};
    for (const std::string& v : pool)
      if (v != x && v != y) guard_scope.push_back(v);
    Formula guard = atom(guard_scope, &x);
    if (shape < 92)
      return Formula::exists(
          x, Formula::conjunction({std::move(guard), std::move(count)}));
    return Formula::forall(
        x, Formula::disjunction(
               {Formula::negation(std::move(guard)), std::move(count)}));
  }
};

}  // namespace

Formula gen_formula(const GenConfig& cfg, std::uint64_t seed) {
  Generator gen(cfg, seed);
  return gen.generate();
}

Assignment gen_assignment(const Formula& f, long box, std::uint64_t seed) {
  Rng rng(seed);
  Assignment nu;
  for (const std::string& v : f.free_vars())
    nu.set(v, Int(rng.uniform(-box, box)));
  return nu;
}

}  // namespace pacqe
