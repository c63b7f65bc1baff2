#include <chrono>

#include <json.hpp>

#include "pacqe/oracle.hpp"
#include "pacqe/parser.hpp"

namespace pacqe {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string assignment_string(const Assignment& nu) {
  std::string out;
  for (const auto& [v, value] : nu.values()) {
    if (!out.empty()) out += ",";
    out += v + "=" + to_string(value);
  }
  return out;
}

bool is_budget_error(const Error& e) {
  return e.code() == ErrorCode::CaseExplosion ||
         e.code() == ErrorCode::ThresholdExplosion ||
         e.code() == ErrorCode::Resource;
}

}  // namespace

CheckReport differential_test(const CheckConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  CheckReport report;
  report.trials = cfg.trials;
  report.samples_per_trial = cfg.samples;

  for (long trial = 0; trial < cfg.trials; ++trial) {
    Formula phi;
    Formula psi;
    bool have = false;
    for (long attempt = 0; attempt < cfg.max_attempts && !have; ++attempt) {
      std::uint64_t s = mix(cfg.seed, mix(trial, attempt));
      Formula candidate = gen_formula(cfg.gen, s);
      try {
        psi = eliminate_all(candidate, cfg.limits);
        phi = std::move(candidate);
        have = true;
      } catch (const Error& e) {
        if (!is_budget_error(e)) throw;
        ++report.regenerated;
      }
    }
    if (!have) {
      // Degenerate fallback: a quantifier-free trial always eliminates.
      GenConfig qf = cfg.gen;
      qf.quantified = false;
      phi = gen_formula(qf, mix(cfg.seed, mix(trial, 1 + cfg.max_attempts)));
      psi = eliminate_all(phi, cfg.limits);
    }

    for (long k = 0; k < cfg.samples; ++k) {
      Assignment nu =
          gen_assignment(phi, cfg.assign_box, mix(cfg.seed, mix(trial, k) ^ 0x5151));
      Tri expected;
      try {
        expected = oracle_eval(phi, nu, cfg.oracle);
      } catch (const Error& e) {
        if (!is_budget_error(e)) throw;
        expected = Tri::Unknown;
      }
      if (expected == Tri::Unknown) {
        ++report.inconclusive;
        continue;
      }
      bool actual = evaluate_qf(psi, nu);
      if ((expected == Tri::True) != actual) {
        ++report.mismatches;
        if (report.counterexamples.size() < 10)
          report.counterexamples.push_back({render(phi),
                                            assignment_string(nu),
                                            expected == Tri::True, actual});
        if (cfg.stop_on_first_mismatch) {
          report.wall_ms =
              std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
          return report;
        }
      }
    }
  }

  report.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

std::string report_to_json(const CheckReport& report) {
  nlohmann::json j;
  j["trials"] = report.trials;
  j["samples_per_trial"] = report.samples_per_trial;
  j["mismatches"] = report.mismatches;
  j["inconclusive"] = report.inconclusive;
  j["regenerated"] = report.regenerated;
  j["counterexamples"] = nlohmann::json::array();
  for (const Counterexample& ce : report.counterexamples) {
    nlohmann::json c;
    c["formula"] = ce.formula;
    c["assignment"] = ce.assignment;
    c["oracle"] = ce.oracle_value;
    c["eliminated"] = ce.qe_value;
    j["counterexamples"].push_back(std::move(c));
  }
  j["wall_ms"] = report.wall_ms;
  return j.dump();
}

}  // namespace pacqe
