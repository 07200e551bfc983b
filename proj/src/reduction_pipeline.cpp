#include "sasano/reduction_pipeline.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace sasano {

namespace {

std::string entry_label(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

ChainScript make_script(std::string name, TowerPtr tower, bool canonical_alpha, const char* root_name) {
  const auto& data = ReferenceData::builtin();
  ExprContext ctx = standard_context(tower, "t");
  ChainScript s;
  s.name = std::move(name);
  s.tower = tower;
  s.canonical_alpha = canonical_alpha;
  s.eigen_basis = canonical_alpha ? EigenBasis::Reference : EigenBasis::UnitFirstComponent;

  StepSpec t1{StepKind::Constant, "T1", data.constant("T1", ctx), Rational(0), std::nullopt};
  s.stages.push_back({t1, {{"after_T1", {}}}, "T1_inv"});

  StepSpec shear_quarter{StepKind::Shear, "shear g=1/4", std::nullopt, Rational(1, 4), std::nullopt};
  s.stages.push_back({shear_quarter, {{"after_shear_quarter", {}}, {"sheared_general", {{"g", Rational(1, 4)}}}}, ""});

  Substitution sub{AlgNum::generator(tower, root_name), Rational(4), Rational(4), "tau"};
  StepSpec change{StepKind::VariableChange, "t = alpha*tau^4", std::nullopt, Rational(0), sub};
  s.stages.push_back({change, {{"after_substitution", {}}}, ""});

  StepSpec t2{StepKind::Constant, "T2", data.constant("T2", ctx), Rational(0), std::nullopt};
  s.stages.push_back({t2, {{"after_T2", {}}}, "T2_inv"});

  StepSpec shear_one{StepKind::Shear, "shear g=1", std::nullopt, Rational(1), std::nullopt};
  s.stages.push_back({shear_one, {{"after_shear_one", {}}}, ""});
  return s;
}

void compare_constant(const std::string& stage, const std::string& reference, const AlgMatrix& expected,
                      const AlgMatrix& computed, std::vector<StageCheck>& checks) {
  for (std::size_t i = 0; i < expected.rows(); ++i) {
    for (std::size_t j = 0; j < expected.cols(); ++j) {
      if (expected(i, j) != computed(i, j)) {
        throw StageMismatch(stage, reference, entry_label(i, j), expected(i, j).to_string(),
                            computed(i, j).to_string());
      }
    }
  }
  checks.push_back({stage, reference, true, "exact"});
}

void compare_system(const std::string& stage, const std::string& reference, const DiffSystem& expected,
                    const DiffSystem& computed, std::vector<StageCheck>& checks) {
  if (expected.variable != computed.variable) {
    throw StageMismatch(stage, reference, "variable", expected.variable, computed.variable);
  }
  for (std::size_t i = 0; i < expected.dim(); ++i) {
    for (std::size_t j = 0; j < expected.dim(); ++j) {
      if (expected.M(i, j) != computed.M(i, j)) {
        throw StageMismatch(stage, reference, entry_label(i, j), expected.M(i, j).to_string(expected.variable),
                            computed.M(i, j).to_string(computed.variable));
      }
    }
  }
  checks.push_back({stage, reference, true, "exact"});
}

}  // namespace

StageMismatch::StageMismatch(std::string stage, std::string reference, std::string entry, std::string expected,
                             std::string computed)
    : VerificationError("stage '" + stage + "' disagrees with reference '" + reference + "' at " + entry +
                        ": expected " + expected + ", computed " + computed),
      stage_(std::move(stage)),
      reference_(std::move(reference)),
      entry_(std::move(entry)),
      expected_(std::move(expected)),
      computed_(std::move(computed)) {}

ChainScript canonical_chain_script() { return make_script("canonical", canonical_tower(), true, "gamma"); }

ChainScript wasow_chain_script() { return make_script("wasow", wasow_tower(), false, "delta"); }

std::vector<std::string> mismatched_entries(const PuiseuxMatrix& expected, const PuiseuxMatrix& computed) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < expected.rows(); ++i) {
    for (std::size_t j = 0; j < expected.cols(); ++j) {
      if (expected(i, j) != computed(i, j)) out.push_back(entry_label(i, j));
    }
  }
  return out;
}

ReductionTrace run_canonical_chain(const DiffSystem& nve, const ChainScript& script) {
  const auto& data = ReferenceData::builtin();
  const TowerPtr tower = script.tower;
  ExprContext ctx = standard_context(tower, nve.variable);
  DiffSystem input{nve.variable, nve.M.map([&](const PuiseuxPoly& p) { return p.lifted(tower); }), nve.point};

  ReductionTrace trace;
  trace.script = script.name;
  trace.canonical_alpha = script.canonical_alpha;
  trace.input = input;
  if (data.applies("nve", script.canonical_alpha)) {
    compare_system("input", "nve", data.system("nve", ctx), input, trace.checks);
  }

  DiffSystem cur = input;
  for (const auto& stage : script.stages) {
    GaugeStep step = apply_step(stage.step, cur);
    if (!stage.inverse_reference.empty() && data.applies(stage.inverse_reference, script.canonical_alpha)) {
      compare_constant(stage.step.label, stage.inverse_reference, data.constant(stage.inverse_reference, ctx),
                       *step.T_inverse, trace.checks);
    }
    for (const auto& ex : stage.expect) {
      if (!data.applies(ex.reference, script.canonical_alpha)) continue;
      compare_system(stage.step.label, ex.reference, data.system(ex.reference, ctx, ex.params), step.after,
                     trace.checks);
    }
    cur = step.after;
    trace.stages.push_back(std::move(step));
  }

  LeadingTerm lead = leading_matrix(cur);
  if (lead.rank != 5) {
    throw VerificationError("leading matrix before the eigenbasis gauge has rank " + to_string(lead.rank) +
                            ", expected 5");
  }
  trace.leading = lead.L;
  if (data.applies("P2_inf", script.canonical_alpha)) {
    compare_constant("leading matrix", "P2_inf", data.constant("P2_inf", ctx), lead.L, trace.checks);
  }
  trace.leading_char_poly = char_poly(lead.L);
  const auto& cp = trace.leading_char_poly;
  if (cp.size() != 5 || !cp[1].is_zero() || !cp[3].is_zero()) {
    throw VerificationError("characteristic polynomial of the leading matrix is not biquadratic");
  }
  trace.eigenvalues = biquadratic_roots(cp[2], cp[0]);
  if (data.applies("eigenvalues", script.canonical_alpha)) {
    auto ref = data.values("eigenvalues", ctx);
    for (std::size_t k = 0; k < ref.size(); ++k) {
      if (ref[k] != trace.eigenvalues[k]) {
        throw StageMismatch("leading matrix", "eigenvalues", "lambda" + std::to_string(k + 1), ref[k].to_string(),
                            trace.eigenvalues[k].to_string());
      }
    }
    trace.checks.push_back({"leading matrix", "eigenvalues", true, "exact"});
  }

  AlgMatrix T3(4, 4, AlgNum(tower));
  if (script.eigen_basis == EigenBasis::Reference) {
    AlgMatrix ref = data.constant("T3", ctx);
    std::vector<AlgNum> first_row;
    for (std::size_t j = 0; j < 4; ++j) first_row.push_back(ref(0, j));
    T3 = eigen_decompose_distinct(lead.L, trace.eigenvalues, first_row);
    compare_constant("T3", "T3", ref, T3, trace.checks);
  } else {
    T3 = eigen_decompose_distinct(lead.L, trace.eigenvalues);
  }
  GaugeStep last = apply_step(StepSpec{StepKind::Constant, "T3", T3, Rational(0), std::nullopt}, cur);
  if (script.eigen_basis == EigenBasis::Reference && data.applies("T3_inv", script.canonical_alpha)) {
    compare_constant("T3", "T3_inv", data.constant("T3_inv", ctx), *last.T_inverse, trace.checks);
  }
  ExprContext lctx = ctx;
  for (std::size_t k = 0; k < 4; ++k) lctx.bind("lambda" + std::to_string(k + 1), trace.eigenvalues[k]);
  compare_system("T3", "block_diagonal", data.system("block_diagonal", lctx), last.after, trace.checks);
  trace.stages.push_back(std::move(last));
  return trace;
}

namespace {

using CMat = Eigen::MatrixXcd;
using cd = std::complex<double>;

// x = c * tau^p for a stage variable x in terms of the final variable tau.
struct Frame {
  cd c{1.0, 0.0};
  double p = 1.0;

  cd power(const Rational& e, cd tau) const {
    double q = e.get_d();
    return std::pow(c, q) * std::pow(tau, p * q);
  }
  cd power_derivative(const Rational& e, cd tau) const {
    double q = e.get_d();
    if (p * q == 0.0) return 0.0;
    return std::pow(c, q) * (p * q) * std::pow(tau, p * q - 1.0);
  }
};

CMat evaluate(const PuiseuxMatrix& M, const Frame& f, cd tau) {
  CMat out(M.rows(), M.cols());
  for (std::size_t i = 0; i < M.rows(); ++i) {
    for (std::size_t j = 0; j < M.cols(); ++j) {
      out(i, j) = M(i, j).evaluate([&](const Rational& e) { return f.power(e, tau); });
    }
  }
  return out;
}

CMat evaluate(const AlgMatrix& M) {
  CMat out(M.rows(), M.cols());
  for (std::size_t i = 0; i < M.rows(); ++i) {
    for (std::size_t j = 0; j < M.cols(); ++j) out(i, j) = M(i, j).approx();
  }
  return out;
}

bool is_block_diagonal(const DiffSystem& sys) {
  if (sys.dim() != 4) return false;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i / 2 != j / 2 && !sys.M(i, j).is_zero()) return false;
    }
  }
  return true;
}

}  // namespace

TraceConsistency verify_trace_consistency(const ReductionTrace& trace, const std::vector<std::complex<double>>& taus) {
  TraceConsistency rep;
  const DiffSystem& fin = trace.final_system();

  try {
    DiffSystem cur = fin;
    bool ok = true;
    for (std::size_t k = trace.stages.size(); k-- > 0;) {
      cur = undo_step(trace.stages[k], cur);
      if (!(cur == trace.stages[k].before)) {
        rep.failures.push_back("inverse of stage '" + trace.stages[k].spec.label + "' does not recover its input");
        ok = false;
        break;
      }
    }
    rep.round_trip = ok && cur == trace.input;
    if (ok && !rep.round_trip) rep.failures.push_back("inverse chain does not recover the input system");
  } catch (const std::exception& e) {
    rep.failures.push_back(std::string("inverse chain failed: ") + e.what());
  }

  rep.block_diagonal = is_block_diagonal(fin);
  if (!rep.block_diagonal) rep.failures.push_back("final system is not 2+2 block diagonal");
  try {
    LeadingTerm lead = leading_matrix(fin);
    rep.final_rank = lead.rank;
    bool diag = lead.rank == 5;
    for (std::size_t i = 0; i < lead.L.rows() && diag; ++i) {
      for (std::size_t j = 0; j < lead.L.cols(); ++j) {
        if (i != j && !lead.L(i, j).is_zero()) diag = false;
        if (i != j && lead.L(i, i) == lead.L(j, j)) diag = false;
      }
    }
    rep.diagonal_leading = diag;
  } catch (const std::exception& e) {
    rep.failures.push_back(std::string("final leading matrix: ") + e.what());
  }
  if (!rep.diagonal_leading) rep.failures.push_back("final leading matrix is not diagonal with distinct entries at rank 5");

  // Frames of each stage's input variable, walking back from the final one.
  const std::size_t n = trace.stages.size();
  std::vector<Frame> frames(n + 1);
  for (std::size_t k = n; k-- > 0;) {
    frames[k] = frames[k + 1];
    const auto& spec = trace.stages[k].spec;
    if (spec.kind == StepKind::VariableChange) {
      const Substitution& s = *spec.sub;
      const Frame& y = frames[k + 1];
      double pw = s.power.get_d();
      frames[k].c = std::pow(s.root.approx(), s.root_power.get_d()) * std::pow(y.c, pw);
      frames[k].p = y.p * pw;
    }
  }

  const std::size_t dim = fin.dim();
  rep.numeric_ok = !taus.empty();
  for (cd tau : taus) {
    CMat S = CMat::Identity(dim, dim);
    CMat dS = CMat::Zero(dim, dim);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& spec = trace.stages[k].spec;
      CMat G = CMat::Identity(dim, dim);
      CMat dG = CMat::Zero(dim, dim);
      if (spec.kind == StepKind::Constant) {
        G = evaluate(*spec.T);
      } else if (spec.kind == StepKind::Shear) {
        for (std::size_t i = 0; i < dim; ++i) {
          Rational e = -spec.g * static_cast<long>(i);
          G(i, i) = frames[k].power(e, tau);
          dG(i, i) = frames[k].power_derivative(e, tau);
        }
      }
      dS = dS * G + S * dG;
      S = S * G;
    }
    const Frame& f0 = frames[0];
    CMat M0 = evaluate(trace.input.M, f0, tau) * f0.power_derivative(Rational(1), tau);
    CMat composed = S.inverse() * (M0 * S - dS);
    CMat exact = evaluate(fin.M, Frame{}, tau);
    double scale = std::max(1.0, exact.cwiseAbs().maxCoeff());
    double err = (composed - exact).cwiseAbs().maxCoeff() / scale;
    rep.samples.push_back({tau, err});
    if (!(err <= rep.tolerance)) {
      rep.numeric_ok = false;
      std::ostringstream os;
      os << "numeric recomposition at tau = " << tau << " has relative error " << err;
      rep.failures.push_back(os.str());
    }
  }
  return rep;
}

}  // namespace sasano
