#pragma once

// Orchestration of the full verification run and its JSON / Markdown reports.

#include "sasano/sasano_model.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sasano {

enum class SectionStatus { Pass, Fail, Inconclusive };
const char* status_name(SectionStatus s);

struct ReportSection {
  std::string name;
  SectionStatus status = SectionStatus::Fail;
  std::string summary;
  nlohmann::json payload = nlohmann::json::object();
};

struct ProofReport {
  std::string command;
  std::vector<ReportSection> sections;

  bool passed() const;
  bool has_section(const std::string& name) const;
  const ReportSection& section(const std::string& name) const;
  // 0 when every section passed, 1 otherwise.
  int exit_code() const;

  nlohmann::json to_json() const;
  std::string to_markdown() const;
};

enum class StopAfter { Nve, Reduction, Classify };
std::optional<StopAfter> parse_stop_after(const std::string& text);

struct ProofOptions {
  bool alpha_wasow = false;
  std::optional<StopAfter> stop_after;
  int precision = 20;
  int frobenius_order = 10;
  int orbit_depth = 1;
};

// Seed check with optional parameter override and solution replacement.
ProofReport run_verify_seed(const std::optional<ParamTriple>& params, const std::optional<RationalSolution>& solution,
                            int precision = 20);

ProofReport run_proof(const ProofOptions& options = {});

struct OrbitRun {
  ProofReport report;
  std::string jsonl;
};

OrbitRun run_orbit(int depth, bool check_matsuda);

enum class ReportFormat { Json, Markdown, Both };
std::optional<ReportFormat> parse_report_format(const std::string& text);

// Writes <dir>/<command>.json and/or <dir>/<command>.md; returns the paths.
std::vector<std::filesystem::path> write_report(const ProofReport& report, const std::filesystem::path& dir,
                                                ReportFormat format);

}  // namespace sasano
