#include "dyckshift/invariants.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace dyckshift {

std::string multiplier_to_string(const Multiplier& m) {
  std::string out = "(";
  for (std::size_t i = 0; i < m.cycle.size(); ++i) {
    if (i) out += " ";
    out += m.cycle[i];
  }
  return out + ")";
}

std::uint64_t InvariantTable::count(const Multiplier& m, int period) const {
  auto it = per_multiplier.find(m);
  if (it == per_multiplier.end()) return 0;
  auto jt = it->second.find(period);
  return jt == it->second.end() ? 0 : jt->second;
}

int InvariantTable::lambda_of(const Multiplier& m) const {
  auto it = lambda.find(m);
  if (it == lambda.end())
    throw UnknownMultiplier(multiplier_to_string(m));
  return it->second;
}

std::int64_t InvariantTable::delta_of(const Multiplier& m) const {
  auto it = delta.find(m);
  if (it == delta.end())
    throw HorizonTooSmall("delta of " + multiplier_to_string(m) +
                          " needs period " + std::to_string(lambda_of(m) + 2));
  return it->second;
}

std::vector<Multiplier> InvariantTable::multipliers_of_length(std::size_t len) const {
  std::vector<Multiplier> out;
  for (const auto& [m, _] : per_multiplier)
    if (m.length() == len) out.push_back(m);
  return out;
}

std::vector<Multiplier> InvariantTable::multipliers_of_orbit(std::size_t len,
                                                             int period) const {
  std::vector<Multiplier> out;
  for (const auto& [m, counts] : per_multiplier)
    if (m.length() == len && counts.count(period)) out.push_back(m);
  return out;
}

InvariantTable compute_invariants(const DirectedGraph& g, int max_period,
                                  const SearchOptions& opts) {
  if (max_period < 2)
    throw HorizonTooSmall("invariant tables need at least period 2");
  TreePartition p = compute_tree_partition(g);
  ContractedGraph c = contract(g, p);

  InvariantTable t;
  t.nu = c.graph.edge_count();
  t.tau = p.f_edges.size();
  t.max_period = max_period;

  for (const Edge& e : c.graph.edges())
    if (e.src == e.dst) t.loops_by_root[e.src].push_back(Multiplier{{e.id}});
  t.neutral2_by_root = i2_parts(g, p, c);

  for (int k = 1; k <= max_period; ++k) {
    std::uint64_t i0 = 0, ineg = 0, ipos = 0;
    for (const auto& [orbit, cls] : enumerate_orbits(g, k, opts)) {
      switch (cls.kind) {
        case OrbitClass::Kind::Neutral:
          i0++;
          break;
        case OrbitClass::Kind::Negative: {
          ineg++;
          Multiplier m{cls.cycle};
          t.per_multiplier[m][k]++;
          if (!t.lambda.count(m)) t.lambda[m] = k;
          break;
        }
        case OrbitClass::Kind::Positive:
          ipos++;
          break;
      }
    }
    t.neutral[k] = i0;
    t.negative[k] = ineg;
    t.positive[k] = ipos;
  }
  t.fixed_negative = t.negative[1];

  // Delta is populated wherever the horizon allows; consumers that need more
  // raise HorizonTooSmall through the accessors.
  for (const auto& [m, lam] : t.lambda)
    if (lam + 2 <= max_period)
      t.delta[m] = static_cast<std::int64_t>(t.count(m, lam + 2)) - lam;
  return t;
}

bool multiplier_compatible(const InvariantTable& t, const Multiplier& a,
                           const Multiplier& b) {
  if (a.length() != 1 || b.length() != 1)
    throw UnknownMultiplier("compatibility is defined for length-one multipliers");
  auto root_of = [&](const Multiplier& m) -> const std::string& {
    for (const auto& [root, loops] : t.loops_by_root)
      if (std::find(loops.begin(), loops.end(), m) != loops.end()) return root;
    throw UnknownMultiplier(multiplier_to_string(m));
  };
  return root_of(a) == root_of(b);
}

std::map<std::string, std::uint64_t> i2_parts(const DirectedGraph& g,
                                              const TreePartition& p,
                                              const ContractedGraph& c) {
  std::map<std::string, std::uint64_t> out;
  for (const std::string& r : p.roots) out[r] = 0;
  for (const Edge& e : g.edges()) out[p.root_of.at(e.src)]++;
  (void)c;
  return out;
}

Sh2ClosedForm closed_form_sh2(std::int64_t K, std::int64_t L, std::int64_t M) {
  if (K < 1 || L < 1 || M < 1) throw InvalidParams("K, L, M must be positive");
  if (K == 1 && L == 1 && M == 1) throw DegenerateCycle();
  auto choose2 = [](std::int64_t n) { return n * (n - 1) / 2; };
  Sh2ClosedForm f;
  const std::int64_t s = K + L + M;
  f.i5 = s;
  f.i9 = s * s * s + K * L * M;
  f.i10 = s * (3 * s - 1) / 2;
  f.i4_0 = choose2(K) + K * choose2(L) + K * L * choose2(M) + K * L + K * L * M +
           K * K * L * M;
  f.nu = K * L * M;
  f.tau = K + K * L;
  return f;
}

std::string invariants_to_json(const InvariantTable& t) {
  nlohmann::ordered_json j;
  j["nu"] = t.nu;
  j["tau"] = t.tau;
  j["max_period"] = t.max_period;
  auto series = [](const std::map<int, std::uint64_t>& m) {
    nlohmann::ordered_json o;
    for (const auto& [k, v] : m) o[std::to_string(k)] = v;
    return o;
  };
  j["I0"] = series(t.neutral);
  j["Ineg"] = series(t.negative);
  j["Ipos"] = series(t.positive);
  j["fixed_neg"] = t.fixed_negative;
  j["multipliers"] = nlohmann::ordered_json::array();
  for (const auto& [m, counts] : t.per_multiplier) {
    nlohmann::ordered_json o;
    o["cycle"] = m.cycle;
    o["lambda"] = t.lambda.at(m);
    if (t.delta.count(m)) o["delta"] = t.delta.at(m);
    nlohmann::ordered_json cc;
    for (const auto& [k, v] : counts) cc[std::to_string(k)] = v;
    o["counts"] = cc;
    j["multipliers"].push_back(o);
  }
  nlohmann::ordered_json compat;
  for (const auto& [root, loops] : t.loops_by_root) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& m : loops) arr.push_back(m.cycle.front());
    compat[root] = arr;
  }
  j["compat"] = compat;
  nlohmann::ordered_json i2;
  for (const auto& [root, n] : t.neutral2_by_root) i2[root] = n;
  j["i2_parts"] = i2;
  return j.dump();
}

std::string invariants_to_text(const InvariantTable& t) {
  std::ostringstream os;
  os << "nu = " << t.nu << "\n";
  os << "tau = " << t.tau << "\n";
  os << "I1- = " << t.fixed_negative << "\n";
  os << "k:";
  for (const auto& [k, _] : t.neutral) os << "\t" << k;
  os << "\nI0:";
  for (const auto& [_, v] : t.neutral) os << "\t" << v;
  os << "\nI-:";
  for (const auto& [_, v] : t.negative) os << "\t" << v;
  os << "\nI+:";
  for (const auto& [_, v] : t.positive) os << "\t" << v;
  os << "\n";
  for (const auto& [m, counts] : t.per_multiplier) {
    os << multiplier_to_string(m) << " lambda=" << t.lambda.at(m);
    if (t.delta.count(m)) os << " delta=" << t.delta.at(m);
    os << " counts:";
    for (const auto& [k, v] : counts) os << " " << k << ":" << v;
    os << "\n";
  }
  return os.str();
}

}  // namespace dyckshift
