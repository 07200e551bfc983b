#include "sasano/cli_report.hpp"

#include "sasano/errors.hpp"
#include "sasano/galois_classifier.hpp"
#include "sasano/reduction_pipeline.hpp"
#include "sasano/weyl_orbit.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace sasano {

using nlohmann::json;

const char* status_name(SectionStatus s) {
  switch (s) {
    case SectionStatus::Pass:
      return "pass";
    case SectionStatus::Fail:
      return "fail";
    default:
      return "inconclusive";
  }
}

bool ProofReport::passed() const {
  for (const auto& s : sections) {
    if (s.status != SectionStatus::Pass) return false;
  }
  return !sections.empty();
}

bool ProofReport::has_section(const std::string& name) const {
  for (const auto& s : sections) {
    if (s.name == name) return true;
  }
  return false;
}

const ReportSection& ProofReport::section(const std::string& name) const {
  for (const auto& s : sections) {
    if (s.name == name) return s;
  }
  throw std::out_of_range("no report section " + name);
}

int ProofReport::exit_code() const { return passed() ? 0 : 1; }

json ProofReport::to_json() const {
  json out{{"command", command}, {"status", passed() ? "pass" : "fail"}, {"sections", json::array()}};
  for (const auto& s : sections) {
    out["sections"].push_back(
        json{{"name", s.name}, {"status", status_name(s.status)}, {"summary", s.summary}, {"payload", s.payload}});
  }
  return out;
}

std::string ProofReport::to_markdown() const {
  std::ostringstream md;
  md << "# sasano-cert " << command << "\n\n";
  md << "Overall: **" << (passed() ? "pass" : "fail") << "**\n\n";
  md << "| section | status | summary |\n|---|---|---|\n";
  for (const auto& s : sections) md << "| " << s.name << " | " << status_name(s.status) << " | " << s.summary << " |\n";
  for (const auto& s : sections) {
    md << "\n## " << s.name << "\n\n";
    md << "Status: " << status_name(s.status) << "\n\n";
    md << s.summary << "\n\n";
    md << "```json\n" << s.payload.dump(2) << "\n```\n";
  }
  return md.str();
}

std::optional<StopAfter> parse_stop_after(const std::string& text) {
  if (text == "nve") return StopAfter::Nve;
  if (text == "reduction") return StopAfter::Reduction;
  if (text == "classify") return StopAfter::Classify;
  return std::nullopt;
}

std::optional<ReportFormat> parse_report_format(const std::string& text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "md") return ReportFormat::Markdown;
  if (text == "both") return ReportFormat::Both;
  return std::nullopt;
}

namespace {

void check_precision(int digits) {
  if (digits < 1 || digits > 500) throw InputError("precision must be between 1 and 500 digits");
}

class Formatter {
 public:
  explicit Formatter(int digits) : digits_(digits) { check_precision(digits); }

  json value(const AlgNum& a) const {
    return json{{"exact", a.to_string()}, {"numeric", numeric_embed(a, digits_ + 10).to_string(digits_)}};
  }

  json values(const std::vector<AlgNum>& v) const {
    json out = json::array();
    for (const auto& a : v) out.push_back(value(a));
    return out;
  }

 private:
  int digits_;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

json matrix_json(const PuiseuxMatrix& m, const std::string& variable) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string(variable));
    rows.push_back(row);
  }
  return rows;
}

json params_json(const ParamTriple& p) {
  return json::array({to_string(p.a0), to_string(p.a1), to_string(p.a2)});
}

json residual_json(const ResidualReport& r) {
  static const char* names[] = {"x", "y", "z", "w", "t", "F"};
  json res = json::object();
  for (std::size_t k = 0; k < r.residuals.size(); ++k) res[names[k]] = r.residuals[k].to_string();
  return json{{"residuals", res},
              {"F_supplied", r.F_supplied},
              {"F_reconstructed", r.F_reconstructed},
              {"F_unavailable", r.F_unavailable},
              {"verified", r.verified()}};
}

ReportSection model_section(const ParamTriple& params, const RationalSolution& sol) {
  ReportSection s{"model", SectionStatus::Fail, "", json::object()};
  HamiltonianSystem sys = build_extended_system(params);
  RationalSolution full = complete_solution(RationalSolution{params, sol.xyzw, sol.F});
  ResidualReport rep = verify_solution(sys, full);
  s.payload = residual_json(rep);
  s.payload["params"] = params_json(params);
  s.payload["solution"] = solution_to_json(full).at("components");
  s.payload["hamiltonian"] = sys.hamiltonian.to_string();
  s.status = rep.verified() ? SectionStatus::Pass : SectionStatus::Fail;
  s.summary = rep.verified() ? "the solution satisfies the extended system exactly with parameters " + params.to_string()
                             : "the solution does not satisfy the system: " + rep.summary();
  return s;
}

struct BlockData {
  std::string label;
  ScalarODE2 ode;
  IndicialData indicial;
};

}  // namespace

ProofReport run_verify_seed(const std::optional<ParamTriple>& params, const std::optional<RationalSolution>& solution,
                            int precision) {
  check_precision(precision);
  RationalSolution sol = solution ? *solution : seed_solution();
  ParamTriple p = params ? *params : sol.params;
  if (!p.normalized()) throw InputError("parameters " + p.to_string() + " violate a0 + 2 a1 + 2 a2 = 1");
  ProofReport report{"verify-seed", {}};
  report.sections.push_back(model_section(p, sol));
  return report;
}

ProofReport run_proof(const ProofOptions& options) {
  Formatter fmt(options.precision);
  if (options.frobenius_order < 1) throw InputError("Frobenius order must be positive");
  if (options.orbit_depth < 0) throw InputError("orbit depth must be nonnegative");
  ProofReport report{"prove", {}};
  auto halted = [&] { return !report.sections.empty() && report.sections.back().status == SectionStatus::Fail; };

  ChainScript script = options.alpha_wasow ? wasow_chain_script() : canonical_chain_script();
  const TowerPtr tower = script.tower;
  const ReferenceData& ref = ReferenceData::builtin();
  const ParamTriple params = seed_params();
  const RationalSolution seed = seed_solution();

  report.sections.push_back(model_section(params, seed));
  if (halted()) return report;

  // Normal variational equations.
  DiffSystem nve;
  {
    ReportSection s{"nve", SectionStatus::Fail, "", json::object()};
    try {
      HamiltonianSystem sys = build_extended_system(params);
      nve = extract_nve(variational_matrix(sys, seed), tower);
      DiffSystem expected = ref.system("nve", standard_context(tower, "t"));
      auto bad = mismatched_entries(expected.M, nve.M);
      s.payload = json{{"variable", nve.variable}, {"matrix", matrix_json(nve.M, nve.variable)},
                       {"reference", "nve"}, {"mismatched_entries", bad}};
      s.status = bad.empty() && nve.variable == expected.variable ? SectionStatus::Pass : SectionStatus::Fail;
      s.summary = bad.empty() ? "the 4x4 normal variational system equals the reference matrix entry by entry"
                              : std::to_string(bad.size()) + " entries differ from the reference matrix";
    } catch (const VerificationError& e) {
      s.summary = e.what();
    }
    report.sections.push_back(std::move(s));
  }
  if (halted() || options.stop_after == StopAfter::Nve) return report;

  // Formal reduction.
  std::optional<ReductionTrace> trace;
  {
    ReportSection s{"reduction", SectionStatus::Fail, "", json::object()};
    s.payload["script"] = script.name;
    try {
      trace = run_canonical_chain(nve, script);
      json checks = json::array();
      bool all = true;
      for (const auto& c : trace->checks) {
        checks.push_back(json{{"stage", c.stage}, {"reference", c.reference}, {"matched", c.matched}});
        all = all && c.matched;
      }
      TraceConsistency tc = verify_trace_consistency(*trace);
      json samples = json::array();
      for (const auto& smp : tc.samples) {
        samples.push_back(json{{"tau", sci(smp.tau.real()) + (smp.tau.imag() < 0 ? "-" : "+") +
                                           sci(std::abs(smp.tau.imag())) + "i"},
                               {"relative_error", sci(smp.relative_error)}});
      }
      s.payload["checks"] = checks;
      s.payload["leading_char_poly"] = fmt.values(trace->leading_char_poly);
      s.payload["eigenvalues"] = fmt.values(trace->eigenvalues);
      s.payload["final_system"] = json{{"variable", trace->final_system().variable},
                                       {"matrix", matrix_json(trace->final_system().M, trace->final_system().variable)}};
      s.payload["consistency"] = json{{"round_trip", tc.round_trip},
                                      {"block_diagonal", tc.block_diagonal},
                                      {"diagonal_leading", tc.diagonal_leading},
                                      {"final_rank", to_string(tc.final_rank)},
                                      {"samples", samples},
                                      {"tolerance", sci(tc.tolerance)},
                                      {"failures", tc.failures}};
      s.status = all && tc.ok() ? SectionStatus::Pass : SectionStatus::Fail;
      const std::string last = trace->checks.empty() ? "none" : trace->checks.back().reference;
      s.summary = s.status == SectionStatus::Pass
                      ? std::to_string(trace->checks.size()) + " reference checks matched, ending with " + last
                      : "the reduction trace is inconsistent";
    } catch (const StageMismatch& e) {
      s.payload["mismatch"] = json{{"stage", e.stage()},
                                   {"reference", e.reference()},
                                   {"entry", e.entry()},
                                   {"expected", e.expected()},
                                   {"computed", e.computed()}};
      s.summary = e.what();
    } catch (const VerificationError& e) {
      s.summary = e.what();
    }
    report.sections.push_back(std::move(s));
  }
  if (halted() || options.stop_after == StopAfter::Reduction) return report;

  // Sixth-root pullback, scalar blocks and the apparent singularity.
  std::vector<BlockData> blocks;
  ApparentCertificate apparent;
  {
    ReportSection s{"apparent_singularity", SectionStatus::Fail, "", json::object()};
    try {
      DiffSystem eta = pullback_sixth_root(trace->final_system());
      auto parts = block_split(eta, {{0, 1}, {2, 3}});
      const char* labels[] = {"12", "34"};
      std::vector<std::pair<AlgNum, AlgNum>> exps;
      std::vector<FrobeniusSeries> series;
      json per_block = json::object();
      for (std::size_t b = 0; b < parts.size(); ++b) {
        ScalarODE2 ode = system_to_scalar(parts[b]);
        IndicialData id = indicial_exponents(ode);
        exps.emplace_back(id.rho1, id.rho2);
        json fro = json::array();
        for (const AlgNum& rho : {id.rho1, id.rho2}) {
          series.push_back(frobenius_series(ode, rho, options.frobenius_order));
          fro.push_back(json{{"rho", rho.to_string()},
                             {"resonance_free", series.back().resonance_free},
                             {"c1", series.back().coeffs.size() > 1 ? series.back().coeffs[1].to_string() : ""}});
        }
        per_block[labels[b]] = json{{"c1", ode.c1.to_string(ode.variable)},
                                    {"c0", ode.c0.to_string(ode.variable)},
                                    {"rho", json::array({id.rho1.to_string(), id.rho2.to_string()})},
                                    {"frobenius", fro}};
        blocks.push_back(BlockData{labels[b], ode, id});
      }
      apparent = certify_apparent(exps, 6, series);
      json j1 = json::array();
      for (const auto& q : apparent.J1) j1.push_back(to_string(q));
      s.payload = json{{"eta_system", matrix_json(eta.M, eta.variable)},
                       {"blocks", per_block},
                       {"pullback_order", apparent.pullback_order},
                       {"J1", j1},
                       {"non_integer_difference", apparent.non_integer_difference},
                       {"single_valued", apparent.single_valued},
                       {"frobenius_order", apparent.frobenius_order},
                       {"failures", apparent.failures}};
      s.status = apparent.certified() ? SectionStatus::Pass : SectionStatus::Fail;
      std::string j1s;
      for (const auto& q : apparent.J1) j1s += (j1s.empty() ? "" : ",") + to_string(q);
      s.summary = apparent.certified() ? "eta = 0 is apparent after x = eta^(1/6); J1 = diag(" + j1s + ")"
                                       : "the apparent-singularity certificate failed";
    } catch (const InputError& e) {
      s.summary = e.what();
    }
    report.sections.push_back(std::move(s));
  }
  if (halted()) return report;

  // Whittaker normal forms.
  std::vector<BlockVerdict> verdicts;
  std::vector<std::pair<std::string, WhittakerParams>> forms;
  bool whittaker_failed = false;
  for (const auto& b : blocks) {
    ReportSection s{"whittaker_" + b.label, SectionStatus::Fail, "", json::object()};
    try {
      WhittakerParams w = normalize_whittaker(b.ode);
      s.payload = json{{"A", fmt.value(w.A)},       {"B", fmt.value(w.B)},         {"C", fmt.value(w.C)},
                       {"kappa", fmt.value(w.kappa)}, {"mu", fmt.value(w.mu)},     {"scale", fmt.value(w.scale)},
                       {"bracket", w.whittaker_bracket().to_string(w.new_variable)}};
      s.status = SectionStatus::Pass;
      s.summary = "kappa = " + w.kappa.to_string() + ", mu = " + w.mu.to_string();
      forms.emplace_back(b.label, w);
    } catch (const std::domain_error& e) {
      s.summary = e.what();
      whittaker_failed = true;
    }
    report.sections.push_back(std::move(s));
    if (whittaker_failed) return report;
  }
  if (!options.alpha_wasow) {
    ReportSection s{"whittaker_cross", SectionStatus::Fail, "", json::object()};
    ExprContext ctx = standard_context(tower, ref.variable("cross_scaled_bracket"));
    PuiseuxPoly br = ref.bracket("cross_scaled_bracket", ctx);
    WhittakerParams w = normalize_whittaker(ScalarODE2{ctx.variable, PuiseuxPoly(tower), -br}, "omega");
    PuiseuxPoly expected = ref.bracket("cross_whittaker_bracket", ctx.with_variable("omega"));
    bool scale_ok = w.scale * w.scale == ref.values("cross_scale_squared", ctx).at(0);
    bool bracket_ok = w.whittaker_bracket() == expected;
    s.payload = json{{"kappa", fmt.value(w.kappa)},
                     {"mu", fmt.value(w.mu)},
                     {"scale", fmt.value(w.scale)},
                     {"bracket", w.whittaker_bracket().to_string("omega")},
                     {"scale_squared_matches", scale_ok},
                     {"bracket_matches", bracket_ok}};
    s.status = scale_ok && bracket_ok ? SectionStatus::Pass : SectionStatus::Fail;
    s.summary = "cross bracket gives kappa = " + w.kappa.to_string() + ", mu = " + w.mu.to_string();
    report.sections.push_back(std::move(s));
    if (halted()) return report;
    forms.emplace_back("cross", w);
  }

  // Stokes rule under both conventions for N.
  {
    ReportSection s{"stokes", SectionStatus::Pass, "", json::object()};
    bool all_nontrivial = true;
    bool convention_free = true;
    for (const auto& [label, w] : forms) {
      StokesFlags with0 = stokes_triviality(w.kappa, w.mu, NaturalConvention::WithZero);
      StokesFlags without0 = stokes_triviality(w.kappa, w.mu, NaturalConvention::WithoutZero);
      auto flag = [](bool trivial) { return trivial ? "trivial" : "nontrivial"; };
      s.payload[label] = json{{"mu1", flag(with0.mu1_trivial)},
                              {"mu2", flag(with0.mu2_trivial)},
                              {"convention_independent", with0.mu1_trivial == without0.mu1_trivial &&
                                                             with0.mu2_trivial == without0.mu2_trivial}};
      all_nontrivial = all_nontrivial && with0.both_nontrivial();
      convention_free = convention_free && s.payload[label]["convention_independent"].get<bool>();
      if (label != "cross") verdicts.push_back(classify_block(w, label));
    }
    s.status = all_nontrivial && convention_free ? SectionStatus::Pass : SectionStatus::Inconclusive;
    s.summary = all_nontrivial ? "both Stokes multipliers are nontrivial in every case"
                               : "some Stokes multiplier is trivial";
    report.sections.push_back(std::move(s));
  }

  GaloisVerdict verdict;
  {
    verdict = morales_ramis_verdict(verdicts, apparent);
    ReportSection s{"galois_components", SectionStatus::Inconclusive, "", json::object()};
    bool all_sl2 = verdicts.size() == 2;
    for (const auto& v : verdicts) {
      s.payload[v.label] = component_name(v.component);
      all_sl2 = all_sl2 && v.component == Component::SL2;
    }
    s.payload["identity_component"] = verdict.identity_component;
    if (all_sl2) s.status = SectionStatus::Pass;
    s.summary = "identity component " + verdict.identity_component;
    report.sections.push_back(std::move(s));
  }
  if (options.stop_after == StopAfter::Classify) return report;

  {
    bool prerequisites = report.passed();
    ReportSection s{"verdict", SectionStatus::Inconclusive, "", json::object()};
    Aggregate agg = prerequisites ? verdict.aggregate : Aggregate::Inconclusive;
    json cert = json::array();
    for (const auto& step : verdict.certificate) {
      cert.push_back(json{{"claim", step.claim}, {"anchor", step.anchor}, {"values", step.values}});
    }
    s.payload = json{{"aggregate", aggregate_name(agg)},
                     {"identity_component", verdict.identity_component},
                     {"params", params_json(params)},
                     {"tower", script.name},
                     {"certificate", cert}};
    if (agg == Aggregate::NotIntegrable) s.status = SectionStatus::Pass;
    s.summary = agg == Aggregate::NotIntegrable
                    ? "G0 = " + verdict.identity_component + " is not abelian: not integrable by rational first integrals"
                    : "the verdict is inconclusive";
    report.sections.push_back(std::move(s));
  }

  {
    OrbitRun orbit = run_orbit(options.orbit_depth, true);
    ReportSection s = orbit.report.sections.front();
    s.name = "orbit_summary";
    report.sections.push_back(std::move(s));
  }
  return report;
}

OrbitRun run_orbit(int depth, bool check_matsuda) {
  if (depth < 0) throw InputError("orbit depth must be nonnegative");
  OrbitReport orbit = enumerate_orbit(seed_solution(), depth);
  OrbitRun run{ProofReport{"orbit", {}}, orbit_to_jsonl(orbit)};
  ReportSection s{"orbit", SectionStatus::Fail, "", json::object()};

  std::map<std::size_t, std::map<int, int>> rows_by_depth;
  for (const auto& n : orbit.nodes) rows_by_depth[n.word.size()][n.matsuda_row.value_or(0)] += 1;
  json per_depth = json::array();
  for (std::size_t d = 0; d < orbit.nodes_at_depth.size(); ++d) {
    json rows = json::object();
    for (const auto& [row, count] : rows_by_depth[d]) rows[row == 0 ? "none" : std::to_string(row)] = count;
    per_depth.push_back(json{{"depth", d}, {"new_nodes", orbit.nodes_at_depth[d]}, {"rows", rows}});
  }
  json totals = json::object();
  for (const auto& [row, count] : orbit.row_counts) totals[row == 0 ? "none" : std::to_string(row)] = count;
  json disc = json::array();
  for (const auto& d : orbit.discrepancies) disc.push_back(d.params.to_string());
  auto seed_check = matsuda_check(seed_params());

  bool ok = orbit.all_verified() && orbit.all_normalized() && orbit.discrepancies.empty();
  if (check_matsuda) ok = ok && orbit.all_matched();
  s.payload = json{{"depth", depth},
                   {"nodes", orbit.nodes.size()},
                   {"per_depth", per_depth},
                   {"row_totals", totals},
                   {"all_verified", orbit.all_verified()},
                   {"all_normalized", orbit.all_normalized()},
                   {"all_matched", orbit.all_matched()},
                   {"matsuda_checked", check_matsuda},
                   {"collisions_checked", orbit.collisions_checked},
                   {"discrepancies", disc},
                   {"seed_row", seed_check.row ? json(*seed_check.row) : json(nullptr)},
                   {"coverage_note", "row counts describe the nodes reached; no completeness claim is made"}};
  s.status = ok ? SectionStatus::Pass : SectionStatus::Fail;
  std::ostringstream summary;
  summary << orbit.nodes.size() << " parameter triples to depth " << depth << ", "
          << (orbit.all_verified() ? "all verified" : "some unverified");
  if (check_matsuda) summary << ", " << (orbit.all_matched() ? "all" : "not all") << " on a congruence row";
  s.summary = summary.str();
  run.report.sections.push_back(std::move(s));
  return run;
}

std::vector<std::filesystem::path> write_report(const ProofReport& report, const std::filesystem::path& dir,
                                                ReportFormat format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create report directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> out;
  auto write = [&](const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw InputError("cannot write " + p.string());
    f << text;
    out.push_back(p);
  };
  if (format != ReportFormat::Markdown) write(dir / (report.command + ".json"), report.to_json().dump(2) + "\n");
  if (format != ReportFormat::Json) write(dir / (report.command + ".md"), report.to_markdown());
  return out;
}

}  // namespace sasano
