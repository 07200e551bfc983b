#include "sasano/reference_data.hpp"

#include "sasano/errors.hpp"
#include "sasano/reference_matrices_json.hpp"

namespace sasano {

namespace {

std::vector<std::vector<std::string>> read_rows(const nlohmann::json& rows) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows) out.push_back(r.get<std::vector<std::string>>());
  return out;
}

}  // namespace

const ReferenceData& ReferenceData::builtin() {
  static const ReferenceData data = from_json_text(generated::kReferenceMatricesJson);
  return data;
}

ReferenceData ReferenceData::from_json_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("reference data is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", 0) != 1 || !doc.contains("fixtures")) {
    throw InputError("reference data: unsupported format");
  }
  ReferenceData out;
  out.fixtures_ = doc.at("fixtures");
  out.notes_ = doc.value("notes", nlohmann::json::array());
  return out;
}

bool ReferenceData::has(const std::string& name) const { return fixtures_.contains(name); }

const nlohmann::json& ReferenceData::entry(const std::string& name) const {
  auto it = fixtures_.find(name);
  if (it == fixtures_.end()) throw InputError("no reference entry '" + name + "'");
  return *it;
}

std::vector<std::string> ReferenceData::names() const {
  std::vector<std::string> out;
  for (auto it = fixtures_.begin(); it != fixtures_.end(); ++it) out.push_back(it.key());
  return out;
}

std::vector<std::string> ReferenceData::notes() const { return notes_.get<std::vector<std::string>>(); }

bool ReferenceData::applies(const std::string& name, bool canonical_alpha) const {
  std::string scope = entry(name).value("scope", "any");
  if (scope == "any") return true;
  if (scope == "canonical") return canonical_alpha;
  throw InputError("reference entry '" + name + "' has unknown scope '" + scope + "'");
}

std::map<std::string, std::string> ReferenceData::typography(const std::string& name) const {
  const auto& e = entry(name);
  if (!e.contains("typography")) return {};
  return e.at("typography").get<std::map<std::string, std::string>>();
}

std::string ReferenceData::variable(const std::string& name) const {
  const auto& e = entry(name);
  if (!e.contains("variable")) throw InputError("reference entry '" + name + "' has no variable");
  return e.at("variable").get<std::string>();
}

AlgMatrix ReferenceData::constant(const std::string& name, const ExprContext& ctx) const {
  const auto& e = entry(name);
  if (e.value("kind", "") != "constant") throw InputError("reference entry '" + name + "' is not a constant matrix");
  return constant_matrix(parse_matrix(read_rows(e.at("rows")), ctx));
}

DiffSystem ReferenceData::system(const std::string& name, const ExprContext& ctx,
                                 const std::map<std::string, Rational>& params) const {
  const auto& e = entry(name);
  if (e.value("kind", "") != "system") throw InputError("reference entry '" + name + "' is not a system");
  ExprContext local = ctx.with_variable(e.at("variable").get<std::string>());
  for (const auto& p : e.value("parameters", std::vector<std::string>{})) {
    auto it = params.find(p);
    if (it == params.end()) throw InputError("reference entry '" + name + "' needs parameter '" + p + "'");
    local.parameters.insert_or_assign(p, it->second);
  }
  Rational r = parse_rational(e.at("presentation").get<std::string>());
  if (e.contains("rows")) {
    return DiffSystem::from_presentation(local.variable, parse_matrix(read_rows(e.at("rows")), local), r);
  }
  if (!e.contains("expansion")) throw InputError("reference entry '" + name + "' has neither rows nor expansion");
  std::optional<PuiseuxMatrix> Q;
  for (const auto& part : e.at("expansion")) {
    Rational power = parse_rational(part.at("power").get<std::string>());
    PuiseuxMatrix term = as_puiseux(constant(part.at("matrix").get<std::string>(), local))
                             .map([&](const PuiseuxPoly& p) { return p.shifted(power); });
    Q = Q ? *Q + term : term;
  }
  if (!Q) throw InputError("reference entry '" + name + "' has an empty expansion");
  return DiffSystem::from_presentation(local.variable, *Q, r);
}

std::vector<AlgNum> ReferenceData::values(const std::string& name, const ExprContext& ctx) const {
  const auto& e = entry(name);
  if (e.value("kind", "") != "vector") throw InputError("reference entry '" + name + "' is not a value list");
  std::vector<AlgNum> out;
  for (const auto& v : e.at("values")) out.push_back(parse_constant(v.get<std::string>(), ctx));
  return out;
}

PuiseuxPoly ReferenceData::bracket(const std::string& name, const ExprContext& ctx) const {
  const auto& e = entry(name);
  if (e.value("kind", "") != "bracket") throw InputError("reference entry '" + name + "' is not a bracket");
  return parse_puiseux(e.at("value").get<std::string>(), ctx.with_variable(e.at("variable").get<std::string>()));
}

}  // namespace sasano
