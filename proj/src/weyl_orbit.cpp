#include "sasano/weyl_orbit.hpp"

#include <deque>
#include <random>
#include <sstream>

namespace sasano {

DivisorVanishes::DivisorVanishes(int generator)
    : InputError("divisor f" + std::to_string(generator) + " vanishes with nonzero parameter alpha" +
                 std::to_string(generator)),
      generator_(generator) {}

namespace {

void check_generator(int g) {
  if (g < 0 || g > 2) throw InputError("generator index must be 0, 1 or 2");
}

const Rational& alpha(const ParamTriple& p, int g) { return g == 0 ? p.a0 : (g == 1 ? p.a1 : p.a2); }

bool is_zero(const Rational& q) { return sgn(q) == 0; }
bool is_zero(const RatFunc& f) { return f.is_zero(); }

// The birational part of s_g over a field K of values (Q or Q(t)).
template <typename K>
std::array<K, 4> transform(int g, const std::array<K, 4>& v, const K& t, const ParamTriple& p) {
  const K& x = v[0];
  const K& y = v[1];
  const K& z = v[2];
  const K& w = v[3];
  const K a(alpha(p, g));
  K f = w;
  if (g == 1) f = x + z * z;
  if (g == 2) f = x + y * y + w + t;
  if (is_zero(f)) {
    if (is_zero(alpha(p, g))) return v;
    throw DivisorVanishes(g);
  }
  if (g == 0) return {x, y, z + a / f, w};
  if (g == 1) return {x, y - a / f, z, w - K(Rational(2)) * a * z / f};
  return {x + K(Rational(2)) * a * y / f - a * a / (f * f), y - a / f, z + a / f, w};
}

std::string relation_name(const std::vector<int>& base, int power) {
  std::string s = base.size() == 1 ? "s" + std::to_string(base[0])
                                   : "(s" + std::to_string(base[0]) + " s" + std::to_string(base[1]) + ")";
  return s + "^" + std::to_string(power);
}

}  // namespace

ParamTriple act_on_params(int g, const ParamTriple& p) {
  check_generator(g);
  switch (g) {
    case 0:
      return {Rational(-p.a0), Rational(p.a1 + p.a0), p.a2};
    case 1:
      return {Rational(p.a0 + 2 * p.a1), Rational(-p.a1), Rational(p.a2 + p.a1)};
    default:
      return {p.a0, Rational(p.a1 + 2 * p.a2), Rational(-p.a2)};
  }
}

Matrix<Rational> param_matrix(int g) {
  check_generator(g);
  Matrix<Rational> m(3, 3, Rational(0));
  for (std::size_t j = 0; j < 3; ++j) {
    ParamTriple e{Rational(j == 0), Rational(j == 1), Rational(j == 2)};
    auto img = act_on_params(g, e).as_array();
    for (std::size_t i = 0; i < 3; ++i) m(i, j) = img[i];
  }
  return m;
}

RationalSolution act_on_state(int g, const RationalSolution& s) {
  check_generator(g);
  RationalSolution out;
  out.params = act_on_params(g, s.params);
  out.xyzw = transform<RatFunc>(g, s.xyzw, RatFunc::variable(), s.params);
  out = complete_solution(out);
  ResidualReport rep = verify_solution(build_extended_system(out.params), out);
  if (!rep.verified()) {
    throw VerificationError("s" + std::to_string(g) + " image fails to verify: " + rep.summary());
  }
  return out;
}

PhasePoint act_on_point(int g, const PhasePoint& p) {
  check_generator(g);
  return PhasePoint{transform<Rational>(g, p.xyzw, p.t, p.params), p.t, act_on_params(g, p.params)};
}

bool RelationReport::ok() const {
  for (const auto& r : relations) {
    if (!r.ok()) return false;
  }
  return !relations.empty();
}

RelationReport verify_group_relations(int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-30, 30);
  std::uniform_int_distribution<long> den(1, 12);
  auto rand_q = [&] {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
  };

  std::vector<std::pair<std::vector<int>, int>> families = {
      {{0}, 2}, {{1}, 2}, {{2}, 2}, {{0, 1}, 4}, {{1, 0}, 4}, {{0, 2}, 2}, {{2, 0}, 2}, {{1, 2}, 4}, {{2, 1}, 4}};
  // Words are applied right to left, (s0 s1)^4 = s0 s1 s0 s1 ... with s1 first.
  RelationReport rep;
  for (const auto& [base, power] : families) {
    RelationResult r;
    r.relation = relation_name(base, power);
    for (int k = 0; k < power; ++k) {
      for (auto it = base.rbegin(); it != base.rend(); ++it) r.word.push_back(*it);
    }
    Matrix<Rational> m = Matrix<Rational>::identity(3, Rational(0), Rational(1));
    for (int g : r.word) m = param_matrix(g) * m;
    r.params_ok = m == Matrix<Rational>::identity(3, Rational(0), Rational(1));

    int attempts = 0;
    while (r.points_checked < samples && attempts < 20 * samples + 100) {
      ++attempts;
      PhasePoint start;
      for (auto& v : start.xyzw) v = rand_q();
      start.t = rand_q();
      start.params.a0 = rand_q();
      start.params.a1 = rand_q();
      start.params.a2 = (1 - start.params.a0 - 2 * start.params.a1) / 2;
      PhasePoint cur = start;
      bool skipped = false;
      try {
        for (int g : r.word) cur = act_on_point(g, cur);
      } catch (const DivisorVanishes&) {
        skipped = true;
      }
      if (skipped) {
        ++r.points_skipped;
        continue;
      }
      ++r.points_checked;
      if (!(cur == start) && !r.witness) r.witness = start;
    }
    rep.relations.push_back(std::move(r));
  }
  return rep;
}

MatsudaResult matsuda_check(const ParamTriple& p) {
  MatsudaResult out;
  Rational a = 5 * p.a2 - Rational(1, 2);
  Rational b = 5 * p.a1 - 1;
  if (!is_integer(a) || !is_integer(b)) return out;
  out.a = floor_mod(a.get_num(), Integer(5));
  out.b = floor_mod(b.get_num(), Integer(5));
  static const std::vector<std::pair<int, std::vector<int>>> table = {{0, {0, 2}}, {1, {2, 3}}, {3, {0, 1}}, {4, {1, 3}}};
  for (std::size_t row = 0; row < table.size(); ++row) {
    if (*out.a != table[row].first) continue;
    for (int bv : table[row].second) {
      if (*out.b == bv) out.row = static_cast<int>(row + 1);
    }
  }
  return out;
}

std::string OrbitNode::word_string() const {
  if (word.empty()) return "id";
  std::string s;
  for (int g : word) s += (s.empty() ? "s" : " s") + std::to_string(g);
  return s;
}

bool OrbitReport::all_verified() const {
  for (const auto& n : nodes) {
    if (!n.verified) return false;
  }
  return true;
}

bool OrbitReport::all_normalized() const {
  for (const auto& n : nodes) {
    if (!n.params.normalized()) return false;
  }
  return true;
}

bool OrbitReport::all_matched() const {
  for (const auto& n : nodes) {
    if (!n.matsuda_row) return false;
  }
  return true;
}

OrbitReport enumerate_orbit(const RationalSolution& seed, int depth, int audit_depth) {
  if (depth < 0) throw InputError("orbit depth must be nonnegative");
  OrbitReport rep;
  std::map<ParamTriple, std::size_t> index;

  auto add_node = [&](OrbitNode node) {
    node.verified = verify_solution(build_extended_system(node.params), node.state).verified();
    node.matsuda_row = matsuda_check(node.params).row;
    rep.row_counts[node.matsuda_row.value_or(0)] += 1;
    index.emplace(node.params, rep.nodes.size());
    rep.nodes.push_back(std::move(node));
  };

  add_node(OrbitNode{seed.params, {}, complete_solution(seed), std::nullopt, false});
  rep.nodes_at_depth.push_back(1);
  std::vector<std::size_t> frontier = {0};
  for (int d = 1; d <= depth; ++d) {
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier) {
      for (int g = 0; g < 3; ++g) {
        const OrbitNode parent = rep.nodes[idx];
        ParamTriple p = act_on_params(g, parent.params);
        auto hit = index.find(p);
        if (hit != index.end() && d > audit_depth) continue;
        RationalSolution state = act_on_state(g, parent.state);
        std::vector<int> word = parent.word;
        word.push_back(g);
        if (hit != index.end()) {
          ++rep.collisions_checked;
          const OrbitNode& other = rep.nodes[hit->second];
          if (other.state.xyzw != state.xyzw) rep.discrepancies.push_back({other.word, word, p});
          continue;
        }
        add_node(OrbitNode{p, word, state, std::nullopt, false});
        next.push_back(rep.nodes.size() - 1);
      }
    }
    rep.nodes_at_depth.push_back(next.size());
    frontier = std::move(next);
  }
  return rep;
}

nlohmann::json orbit_node_to_json(const OrbitNode& n) {
  nlohmann::json word = nlohmann::json::array();
  for (int g : n.word) word.push_back("s" + std::to_string(g));
  nlohmann::json state = solution_to_json(n.state);
  return nlohmann::json{{"word", word},
                        {"params", state.at("params")},
                        {"state", state.at("components")},
                        {"matsuda_row", n.matsuda_row ? nlohmann::json(*n.matsuda_row) : nlohmann::json(nullptr)},
                        {"verified", n.verified}};
}

std::string orbit_to_jsonl(const OrbitReport& r) {
  std::string out;
  for (const auto& n : r.nodes) out += orbit_node_to_json(n).dump() + "\n";
  return out;
}

}  // namespace sasano
