// Command-line front end: scenario ingestion, command dispatch, report and
// envelope emission. Exit codes: 0 pass, 1 mathematical violation, 2
// configuration/usage error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "uet/uet.hpp"

namespace {

struct CommonFlags {
  std::string scenario_path;
  std::string norm;
  double t_max = 0.0;
  bool t_max_set = false;
  long long seed = -1;
  double tol = -1.0;
  std::string out_path;
  std::string csv_path;
  int threads = 1;
};

void add_scenario_flags(CLI::App* cmd, CommonFlags& f, bool scenario_required = true) {
  auto* s = cmd->add_option("--scenario", f.scenario_path, "scenario file (JSON)");
  if (scenario_required) s->required();
  cmd->add_option("--norm", f.norm, "override the norm (L1, L2, LInf)");
  cmd->add_option("--t-max", f.t_max, "override the grid horizon")->each([&f](const std::string&) {
    f.t_max_set = true;
  });
  cmd->add_option("--seed", f.seed, "override the test-vector seed");
  cmd->add_option("--tol", f.tol, "override check and verify tolerances");
  cmd->add_option("--out", f.out_path, "write the JSON report here");
  cmd->add_option("--threads", f.threads, "worker threads for grid sweeps")
      ->check(CLI::Range(1, 256));
}

uet::Scenario load_scenario(const CommonFlags& f) {
  std::ifstream in(f.scenario_path);
  if (!in) throw uet::ScenarioError("cannot open scenario file '" + f.scenario_path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  uet::Scenario s = uet::parse_scenario_text(buffer.str());
  if (!f.norm.empty()) s.norm = uet::norm_from_string(f.norm);
  if (f.t_max_set) {
    if (!(f.t_max > 0.0)) throw uet::ScenarioError("--t-max must be positive");
    s.grid.t_max = f.t_max;
    if (s.grid.triples().empty())
      throw uet::ScenarioError("grid: no sample triple satisfies t <= t_max");
  }
  if (f.seed >= 0) s.grid.seed = static_cast<std::uint64_t>(f.seed);
  if (f.tol >= 0.0) {
    s.check_tol = f.tol;
    s.verify_tol = f.tol;
  }
  return s;
}

void write_outputs(const uet::CommandResult& res, const CommonFlags& f) {
  if (!res.summary.empty()) std::cout << res.summary << "\n";
  if (!f.out_path.empty()) {
    std::ofstream out(f.out_path);
    if (!out) throw uet::ScenarioError("cannot write report to '" + f.out_path + "'");
    out << res.report.dump(2) << "\n";
  } else {
    std::cout << res.report.dump(2) << "\n";
  }
  if (!f.csv_path.empty()) {
    std::ofstream csv(f.csv_path);
    if (!csv) throw uet::ScenarioError("cannot write envelope table to '" + f.csv_path + "'");
    csv << res.csv;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evolution-operator trichotomy toolkit"};
  app.set_version_flag("--version", uet::kVersion);
  app.require_subcommand(1);

  CommonFlags check_f, verify_f, estimate_f, convert_f;
  std::string construction;

  CLI::App* check = app.add_subcommand("check", "axioms: idempotency, composition law, compatibility");
  add_scenario_flags(check, check_f);

  CLI::App* verify = app.add_subcommand("verify", "inequality system with the scenario's constants");
  add_scenario_flags(verify, verify_f);

  CLI::App* estimate = app.add_subcommand("estimate", "feasible-constant envelopes and classification");
  add_scenario_flags(estimate, estimate_f);
  estimate->add_option("--csv", estimate_f.csv_path, "write the envelope table here");

  CLI::App* convert = app.add_subcommand("convert", "run a family construction");
  add_scenario_flags(convert, convert_f);
  convert
      ->add_option("--construction", construction,
                   "triple_to_pair | pair_to_triple | triple_to_quad | quad_to_triple")
      ->required();

  CLI::App* demo = app.add_subcommand("demo", "run every command over the built-in fixtures");
  std::string demo_norm, demo_out;
  double demo_t_max = 0.0;
  bool demo_t_max_set = false;
  int demo_threads = 1;
  demo->add_option("--norm", demo_norm, "override the norm for all fixtures");
  demo->add_option("--t-max", demo_t_max, "override the grid horizon for all fixtures")
      ->each([&demo_t_max_set](const std::string&) { demo_t_max_set = true; });
  demo->add_option("--out", demo_out, "write the JSON report here");
  demo->add_option("--threads", demo_threads, "worker threads")->check(CLI::Range(1, 256));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return uet::kExitConfig;
  }

  try {
    if (check->parsed()) {
      const auto res = uet::cmd_check(load_scenario(check_f), {check_f.threads});
      write_outputs(res, check_f);
      return res.exit_code;
    }
    if (verify->parsed()) {
      const auto res = uet::cmd_verify(load_scenario(verify_f), {verify_f.threads});
      write_outputs(res, verify_f);
      return res.exit_code;
    }
    if (estimate->parsed()) {
      const auto res = uet::cmd_estimate(load_scenario(estimate_f), {estimate_f.threads});
      write_outputs(res, estimate_f);
      return res.exit_code;
    }
    if (convert->parsed()) {
      const auto res = uet::cmd_convert(load_scenario(convert_f), construction, {convert_f.threads});
      write_outputs(res, convert_f);
      return res.exit_code;
    }
    // demo
    uet::DemoOptions opt;
    if (!demo_norm.empty()) opt.norm = uet::norm_from_string(demo_norm);
    if (demo_t_max_set) {
      if (!(demo_t_max > 0.0)) throw uet::ScenarioError("--t-max must be positive");
      opt.t_max = demo_t_max;
    }
    opt.threads = demo_threads;
    const auto res = uet::cmd_demo(opt);
    std::cout << res.summary;
    if (!demo_out.empty()) {
      std::ofstream out(demo_out);
      if (!out) throw uet::ScenarioError("cannot write report to '" + demo_out + "'");
      out << res.report.dump(2) << "\n";
    }
    return res.exit_code;
  } catch (const uet::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return uet::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return uet::kExitConfig;
  }
}
