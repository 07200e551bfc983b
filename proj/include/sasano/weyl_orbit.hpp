#pragma once

// Backlund transformations s0, s1, s2 of the affine Weyl group W(A4(2)) on
// parameters and on rational solutions, and the orbit of the seed solution.

#include "sasano/errors.hpp"
#include "sasano/matrix.hpp"
#include "sasano/sasano_model.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sasano {

// Invariant divisor f_g is identically zero while alpha_g is not.
class DivisorVanishes : public InputError {
 public:
  explicit DivisorVanishes(int generator);
  int generator() const { return generator_; }

 private:
  int generator_;
};

ParamTriple act_on_params(int g, const ParamTriple& p);
// The linear map of s_g on (alpha0, alpha1, alpha2) as a 3x3 matrix.
Matrix<Rational> param_matrix(int g);

// Image of a solution; the result is re-verified against the system with the
// new parameters (VerificationError if that fails).
RationalSolution act_on_state(int g, const RationalSolution& s);

struct PhasePoint {
  std::array<Rational, 4> xyzw;
  Rational t;
  ParamTriple params;
  friend bool operator==(const PhasePoint& a, const PhasePoint& b) {
    return a.xyzw == b.xyzw && a.t == b.t && a.params == b.params;
  }
};
PhasePoint act_on_point(int g, const PhasePoint& p);

struct RelationResult {
  std::string relation;        // e.g. "(s0 s1)^4"
  std::vector<int> word;       // generators in order of application
  bool params_ok = false;      // composed linear map is the identity
  int points_checked = 0;
  int points_skipped = 0;      // a divisor vanished along the word
  std::optional<PhasePoint> witness;  // first point where the relation failed
  bool ok() const { return params_ok && !witness; }
};

struct RelationReport {
  std::vector<RelationResult> relations;
  bool ok() const;
};

// All nine words s_i^2, (s0 s1)^4, (s1 s0)^4, (s0 s2)^2, (s2 s0)^2,
// (s1 s2)^4, (s2 s1)^4, each at `samples` random rational phase points.
RelationReport verify_group_relations(int samples, std::uint64_t seed = 20240531);

// 1..4 for the congruence row matched, nullopt when none applies.
struct MatsudaResult {
  std::optional<Integer> a, b;  // 5 alpha2 - 1/2 and 5 alpha1 - 1 reduced mod 5
  std::optional<int> row;
};
MatsudaResult matsuda_check(const ParamTriple& p);

struct OrbitNode {
  ParamTriple params;
  std::vector<int> word;  // generators in order of application to the seed
  RationalSolution state;
  std::optional<int> matsuda_row;
  bool verified = false;

  std::string word_string() const;
};

struct OrbitDiscrepancy {
  std::vector<int> first_word;
  std::vector<int> second_word;
  ParamTriple params;
};

struct OrbitReport {
  std::vector<OrbitNode> nodes;  // breadth-first order
  std::vector<std::size_t> nodes_at_depth;  // new nodes per word length
  int collisions_checked = 0;
  std::vector<OrbitDiscrepancy> discrepancies;
  // Matsuda row -> count, with 0 for "none".
  std::map<int, int> row_counts;

  bool all_verified() const;
  bool all_normalized() const;
  bool all_matched() const;
};

// Breadth-first closure under s0, s1, s2 up to word length `depth`, keyed by
// parameters. States reached by different words are compared for word
// lengths up to `audit_depth`.
OrbitReport enumerate_orbit(const RationalSolution& seed, int depth, int audit_depth = 4);

nlohmann::json orbit_node_to_json(const OrbitNode& n);
std::string orbit_to_jsonl(const OrbitReport& r);

}  // namespace sasano
