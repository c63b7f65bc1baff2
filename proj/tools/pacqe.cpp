#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pacqe/oracle.hpp"
#include "pacqe/parser.hpp"
#include "pacqe/qe.hpp"

namespace {

using namespace pacqe;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Parse, "cannot read file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Assignment parse_assignment(const std::string& text) {
  Assignment nu;
  if (text.empty()) return nu;
  std::istringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ',')) {
    auto eq = piece.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::Parse, "bad --assign entry '" + piece +
                                 "' (expected var=value)");
    std::string var = piece.substr(0, eq);
    std::string value = piece.substr(eq + 1);
    try {
      nu.set(var, Int(value));
    } catch (const std::invalid_argument&) {
      fail(ErrorCode::Parse, "bad integer in --assign entry '" + piece + "'");
    }
  }
  return nu;
}

std::string stats_json(const ParamsReport& rep) {
  nlohmann::json j;
  j["num_lin"] = rep.lin.size();
  j["norm_lin"] = to_string(rep.norm_lin);
  j["num_hom"] = rep.hom.size();
  j["norm_hom"] = to_string(rep.norm_hom);
  j["mods"] = nlohmann::json::array();
  for (const Int& q : rep.mods) {
    if (q.fits_slong_p())
      j["mods"].push_back(q.get_si());
    else
      j["mods"].push_back(to_string(q));  // beyond 64-bit: decimal string
  }
  j["num_mod"] = rep.mods.size();
  return j.dump();
}

Formula eliminate_single(const Formula& f, const EliminationLimits& limits) {
  if (!f.is_quantifier() || !f.child().is_quantifier_free())
    fail(ErrorCode::MalformedFormula,
         "--mode single requires a single quantifier over a "
         "quantifier-free body at the root");
  switch (f.kind()) {
    case Kind::Exists:
      return eliminate_threshold(1, f.var_y(), f.child(), limits);
    case Kind::ForAll:
      return Formula::negation(eliminate_threshold(
          1, f.var_y(), Formula::negation(f.child()), limits));
    case Kind::CountGeqVar:
      return eliminate_count_var(CountMode::Geq, f.var_x(), f.var_y(),
                                 f.child(), limits);
    case Kind::CountEqVar:
      return eliminate_count_var(CountMode::Eq, f.var_x(), f.var_y(),
                                 f.child(), limits);
    case Kind::CountGeqConst:
      return eliminate_threshold(f.threshold(), f.var_y(), f.child(), limits);
    case Kind::CountMod:
      return eliminate_mod_count(f.var_x(), f.count_modulus(), f.var_y(),
                                 f.child(), limits);
    default:
      fail(ErrorCode::Internal, "unreachable");
  }
}

int run(int argc, char** argv) {
  CLI::App app{"pacqe: quantifier elimination for Presburger arithmetic "
               "with counting quantifiers"};
  app.require_subcommand(1);

  // qe
  auto* qe = app.add_subcommand("qe", "eliminate all quantifiers");
  std::string qe_file, qe_out, qe_mode = "full";
  long qe_max_cases = 200000, qe_max_e = 10000;
  bool qe_stats = false;
  qe->add_option("file", qe_file, "input formula file")->required();
  qe->add_option("--out", qe_out, "write the result to a file");
  qe->add_option("--mode", qe_mode, "full|single")
      ->check(CLI::IsMember({"full", "single"}));
  qe->add_option("--max-cases", qe_max_cases, "case-explosion guard");
  qe->add_option("--max-threshold-e", qe_max_e, "threshold-e guard");
  qe->add_flag("--stats", qe_stats, "print input/output parameter reports");

  // decide
  auto* decide_cmd = app.add_subcommand("decide", "decide a sentence");
  std::string decide_file;
  long decide_max_cases = 200000, decide_max_e = 10000;
  decide_cmd->add_option("file", decide_file)->required();
  decide_cmd->add_option("--max-cases", decide_max_cases);
  decide_cmd->add_option("--max-threshold-e", decide_max_e);

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "parameter report as JSON");
  std::string stats_file;
  stats_cmd->add_option("file", stats_file)->required();

  // count
  auto* count_cmd =
      app.add_subcommand("count", "oracle count of solutions in one variable");
  std::string count_file, count_var, count_assign;
  count_cmd->add_option("file", count_file)->required();
  count_cmd->add_option("--var", count_var, "counting variable")->required();
  count_cmd->add_option("--assign", count_assign, "assignment \"x=1,z=-2\"");

  // check
  auto* check_cmd =
      app.add_subcommand("check", "differential test against the oracle");
  CheckConfig cc;
  long check_vars = 3;
  check_cmd->add_option("--trials", cc.trials);
  check_cmd->add_option("--samples", cc.samples);
  check_cmd->add_option("--seed", cc.seed);
  check_cmd->add_option("--vars", check_vars);
  check_cmd->add_option("--coef-bound", cc.gen.coef_bound);
  check_cmd->add_option("--mod-bound", cc.gen.mod_bound);
  check_cmd->add_option("--assign-box", cc.assign_box);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (qe->parsed()) {
      EliminationLimits limits{Int(qe_max_cases), Int(qe_max_e)};
      Formula input = parse(read_file(qe_file));
      Formula result = qe_mode == "full" ? eliminate_all(input, limits)
                                         : eliminate_single(input, limits);
      std::string text = render(result) + "\n";
      if (qe_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(qe_out);
        if (!out) fail(ErrorCode::Parse, "cannot write '" + qe_out + "'");
        out << text;
      }
      if (qe_stats) {
        std::cerr << "input:  " << stats_json(params_report(input)) << "\n"
                  << "output: " << stats_json(params_report(result)) << "\n";
      }
      return 0;
    }
    if (decide_cmd->parsed()) {
      EliminationLimits limits{Int(decide_max_cases), Int(decide_max_e)};
      bool value = decide(parse(read_file(decide_file)), limits);
      std::cout << (value ? "true" : "false") << "\n";
      return 0;
    }
    if (stats_cmd->parsed()) {
      std::cout << stats_json(params_report(parse(read_file(stats_file))))
                << "\n";
      return 0;
    }
    if (count_cmd->parsed()) {
      Formula f = parse(read_file(count_file));
      Assignment nu = parse_assignment(count_assign);
      for (const std::string& v : f.free_vars())
        if (v != count_var && !nu.has(v))
          fail(ErrorCode::IncompleteAssignment,
               "--assign must cover free variable '" + v + "'");
      CountResult n = count_line(f, count_var, nu);
      if (n.is_infinite())
        std::cout << "inf\n";
      else if (n.is_finite())
        std::cout << to_string(n.value) << "\n";
      else
        fail(ErrorCode::Resource, "count inconclusive: " + n.reason);
      return 0;
    }
    if (check_cmd->parsed()) {
      cc.gen.vars = static_cast<int>(check_vars);
      CheckReport report = differential_test(cc);
      std::cout << report_to_json(report) << "\n";
      return report.mismatches == 0 ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
