#pragma once

// Reference matrices and values the reduction is checked against, loaded from
// data/reference_matrices.json (embedded at build time).

#include "sasano/diff_system.hpp"
#include "sasano/expression.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sasano {

class ReferenceData {
 public:
  static const ReferenceData& builtin();
  static ReferenceData from_json_text(std::string_view text);

  bool has(const std::string& name) const;
  const nlohmann::json& entry(const std::string& name) const;
  std::vector<std::string> names() const;
  std::vector<std::string> notes() const;

  // "any" entries hold for every alpha; "canonical" ones need alpha^3 = 5/64.
  bool applies(const std::string& name, bool canonical_alpha) const;
  std::map<std::string, std::string> typography(const std::string& name) const;

  AlgMatrix constant(const std::string& name, const ExprContext& ctx) const;
  // Parameters listed by the entry must be present in `params`.
  DiffSystem system(const std::string& name, const ExprContext& ctx,
                    const std::map<std::string, Rational>& params = {}) const;
  std::vector<AlgNum> values(const std::string& name, const ExprContext& ctx) const;
  // A scalar expression in the entry's own variable.
  PuiseuxPoly bracket(const std::string& name, const ExprContext& ctx) const;
  std::string variable(const std::string& name) const;

 private:
  nlohmann::json fixtures_;
  nlohmann::json notes_;
};

}  // namespace sasano
