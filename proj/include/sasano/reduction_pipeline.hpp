#pragma once

// Scripted reduction of the 4x4 normal variational system to a 2+2
// block-diagonal system with a diagonal leading matrix, checked stage by
// stage against the reference matrices.

#include "sasano/diff_system.hpp"
#include "sasano/errors.hpp"
#include "sasano/reference_data.hpp"

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace sasano {

enum class EigenBasis {
  // T3 taken from the reference table and re-derived from the leading matrix.
  Reference,
  // Eigenvectors normalized to first component 1.
  UnitFirstComponent,
};

struct Expectation {
  std::string reference;
  std::map<std::string, Rational> params;
};

struct ChainStage {
  StepSpec step;
  // Reference systems the stage output must equal exactly.
  std::vector<Expectation> expect;
  // Reference for the inverse of a constant step, if tabulated.
  std::string inverse_reference;
};

struct ChainScript {
  std::string name;
  TowerPtr tower;
  bool canonical_alpha = true;
  // Steps up to and including the second shear; the eigenbasis gauge is
  // computed from the leading matrix of that output.
  std::vector<ChainStage> stages;
  EigenBasis eigen_basis = EigenBasis::Reference;
};

ChainScript canonical_chain_script();
// Same chain with alpha = 4^(-4/7) (delta^4 in the alternate tower).
ChainScript wasow_chain_script();

class StageMismatch : public VerificationError {
 public:
  StageMismatch(std::string stage, std::string reference, std::string entry, std::string expected,
                std::string computed);
  const std::string& stage() const { return stage_; }
  const std::string& reference() const { return reference_; }
  const std::string& entry() const { return entry_; }
  const std::string& expected() const { return expected_; }
  const std::string& computed() const { return computed_; }

 private:
  std::string stage_, reference_, entry_, expected_, computed_;
};

struct StageCheck {
  std::string stage;
  std::string reference;
  bool matched = false;
  std::string detail;
};

struct ReductionTrace {
  std::string script;
  bool canonical_alpha = true;
  DiffSystem input;
  std::vector<GaugeStep> stages;
  std::vector<StageCheck> checks;
  // Leading data before the eigenbasis gauge.
  AlgMatrix leading;
  std::vector<AlgNum> leading_char_poly;
  std::vector<AlgNum> eigenvalues;

  const DiffSystem& final_system() const { return stages.empty() ? input : stages.back().after; }
};

// Throws StageMismatch at the first reference disagreement.
ReductionTrace run_canonical_chain(const DiffSystem& nve, const ChainScript& script = canonical_chain_script());

struct NumericSample {
  std::complex<double> tau;
  double relative_error = 0.0;
};

struct TraceConsistency {
  bool round_trip = false;
  bool block_diagonal = false;
  bool diagonal_leading = false;
  Rational final_rank;
  std::vector<NumericSample> samples;
  double tolerance = 1e-9;
  bool numeric_ok = false;
  std::vector<std::string> failures;

  bool ok() const { return round_trip && block_diagonal && diagonal_leading && numeric_ok; }
};

// Exact round trip, final block structure, and a floating-point recomposition
// of the chain compared with the exact final matrix. Never throws on a failed
// check; see TraceConsistency::failures.
TraceConsistency verify_trace_consistency(const ReductionTrace& trace,
                                          const std::vector<std::complex<double>>& taus = {
                                              {2, 0}, {3, 0}, {1, 1}, {2.5, 0}, {4, 0}});

// Entries of `computed` that differ from `expected`, formatted "(i,j)".
std::vector<std::string> mismatched_entries(const PuiseuxMatrix& expected, const PuiseuxMatrix& computed);

}  // namespace sasano
