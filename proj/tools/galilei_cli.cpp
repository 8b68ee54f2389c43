// Command-line front end: scenario-driven simulation, the verification
// suite, barycenter decomposition and momentum inspection.
//
// Exit codes: 0 success (verify: overall pass), 1 verification failure,
// 2 malformed scenario or bad arguments, 3 constraint violation.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "CLI11.hpp"

#include "galilei/galilei.hpp"

namespace {

int write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << text;
  out.flush();
  if (!out) {
    std::cerr << "error: cannot write output file: " << out_path << '\n';
    return 2;
  }
  return 0;
}

int run_simulate(const std::string& scenario_path,
                 const std::string& out_path) {
  const galilei::Scenario scenario = galilei::load_scenario(scenario_path);
  return write_output(galilei::trajectory_csv(scenario), out_path);
}

int run_verify(std::uint64_t seed, std::uint64_t trials,
               std::optional<double> tolerance_override,
               const std::string& out_path) {
  const galilei::VerificationReport report =
      galilei::run_all(seed, trials, tolerance_override);
  const int write_status =
      write_output(galilei::format_report(report), out_path);
  if (write_status != 0) return write_status;
  return report.overall_pass() ? 0 : 1;
}

int run_decompose(const std::string& scenario_path) {
  const galilei::Scenario scenario = galilei::load_scenario(scenario_path);
  const auto* body = std::get_if<galilei::TwoBodyScenario>(&scenario.body);
  if (body == nullptr) {
    throw galilei::ScenarioError("decompose requires a two_body scenario");
  }
  std::cout << galilei::decompose_text(*body);
  return 0;
}

int run_momentum(const std::string& scenario_path) {
  const galilei::Scenario scenario = galilei::load_scenario(scenario_path);
  std::cout << galilei::momentum_text(scenario);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "1+1D Galilei group: orbit actions, two-body reduction and a seeded "
      "verification suite"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;
  std::uint64_t seed = galilei::kDefaultSeed;
  std::uint64_t trials = galilei::kDefaultTrials;
  double tolerance_override = 0.0;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Evolve a scenario and emit a trajectory CSV");
  simulate->add_option("scenario", scenario_path, "Scenario JSON file")
      ->required();
  simulate->add_option("--out", out_path, "Output file (default: stdout)");

  CLI::App* verify = app.add_subcommand(
      "verify", "Run the verification suite and emit a report");
  verify->add_option("--seed", seed, "Master seed (default 42)");
  verify->add_option("--trials", trials, "Trials per check (default 1000)")
      ->check(CLI::Range(std::uint64_t{1},
                         std::numeric_limits<std::uint64_t>::max()));
  verify->add_option("--out", out_path, "Output file (default: stdout)");
  CLI::Option* tolerance_option =
      verify
          ->add_option("--tolerance-override", tolerance_override,
                       "Replace every check's tolerance")
          ->check(CLI::PositiveNumber);

  CLI::App* decompose = app.add_subcommand(
      "decompose",
      "Print the barycenter decomposition of a two_body scenario");
  decompose->add_option("scenario", scenario_path, "Scenario JSON file")
      ->required();

  CLI::App* momentum_cmd = app.add_subcommand(
      "momentum", "Print momentum components of a scenario's initial state");
  momentum_cmd->add_option("scenario", scenario_path, "Scenario JSON file")
      ->required();

  app.add_subcommand("info", "Print version and default tolerances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) return run_simulate(scenario_path, out_path);
    if (verify->parsed()) {
      std::optional<double> override_value;
      if (tolerance_option->count() > 0) override_value = tolerance_override;
      return run_verify(seed, trials, override_value, out_path);
    }
    if (decompose->parsed()) return run_decompose(scenario_path);
    if (momentum_cmd->parsed()) return run_momentum(scenario_path);
    std::cout << galilei::info_text();
    return 0;
  } catch (const galilei::ScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
