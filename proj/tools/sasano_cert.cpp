#include "sasano/cli_report.hpp"
#include "sasano/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace sasano;

namespace {

struct Common {
  std::string report_dir;
  std::string format = "both";
  int precision = 20;
};

void print_summary(const ProofReport& report) {
  for (const auto& s : report.sections) {
    std::cout << "[" << status_name(s.status) << "] " << s.name << ": " << s.summary << "\n";
  }
  std::cout << "overall: " << (report.passed() ? "pass" : "fail") << "\n";
}

void emit(const ProofReport& report, const Common& common) {
  auto format = parse_report_format(common.format);
  if (!format) throw InputError("unknown report format '" + common.format + "' (json, md or both)");
  print_summary(report);
  if (!common.report_dir.empty()) {
    for (const auto& p : write_report(report, common.report_dir, *format)) std::cout << "wrote " << p.string() << "\n";
  }
}

RationalSolution read_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open solution file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("solution file " + path + " is not valid JSON: " + e.what());
  }
  return solution_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of the non-integrability certificate for the Sasano system"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--report-dir", common.report_dir, "Directory for JSON / Markdown reports");
  app.add_option("--format", common.format, "Report format: json, md or both");
  app.add_option("--precision", common.precision, "Decimal digits of numeric renderings");

  auto* verify = app.add_subcommand("verify-seed", "Check a rational solution against the extended system");
  std::string params_text;
  std::string solution_file;
  verify->add_option("--params", params_text, "Parameters a0,a1,a2 (overrides those of the solution)");
  verify->add_option("--solution-file", solution_file, "JSON solution {params, components}");

  auto* prove = app.add_subcommand("prove", "Run the full chain from the seed to the Galois verdict");
  ProofOptions options;
  std::string stop_after;
  prove->add_flag("--alpha-wasow", options.alpha_wasow, "Use alpha = 4^(-4/7) and the alternate tower");
  prove->add_option("--stop-after", stop_after, "Stop after nve, reduction or classify");
  prove->add_option("--depth", options.orbit_depth, "Orbit depth for the summary section");

  auto* orbit = app.add_subcommand("orbit", "Enumerate the Backlund orbit of the seed");
  int depth = 2;
  bool check_matsuda = false;
  orbit->add_option("--depth", depth, "Maximal word length");
  orbit->add_flag("--check-matsuda", check_matsuda, "Require every node to lie on a congruence row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) {
      std::optional<ParamTriple> params;
      if (!params_text.empty()) params = parse_params(params_text);
      std::optional<RationalSolution> solution;
      if (!solution_file.empty()) solution = read_solution(solution_file);
      ProofReport report = run_verify_seed(params, solution, common.precision);
      emit(report, common);
      return report.exit_code();
    }
    if (prove->parsed()) {
      if (!stop_after.empty()) {
        options.stop_after = parse_stop_after(stop_after);
        if (!options.stop_after) throw InputError("unknown --stop-after value '" + stop_after + "'");
      }
      options.precision = common.precision;
      ProofReport report = run_proof(options);
      emit(report, common);
      return report.exit_code();
    }
    OrbitRun run = run_orbit(depth, check_matsuda);
    emit(run.report, common);
    if (!common.report_dir.empty()) {
      std::filesystem::path path = std::filesystem::path(common.report_dir) / "orbit.jsonl";
      std::ofstream out(path, std::ios::binary);
      if (!out) throw InputError("cannot write " + path.string());
      out << run.jsonl;
      std::cout << "wrote " << path.string() << "\n";
    }
    return run.report.exit_code();
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
