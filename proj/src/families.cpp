#include "dyckshift/families.hpp"

#include <json.hpp>

namespace dyckshift {

namespace {

std::string pad2(int n) {
  std::string s = std::to_string(n);
  return s.size() < 2 ? "0" + s : s;
}

}  // namespace

void validate_family_iv(const FamilyIVParams& p, bool strict) {
  if (p.H < 1 || p.h < 1 || p.h0 < 1 || p.h1 < 1)
    throw InvalidParams("family IV parameters must be positive");
  if (!(p.h < p.H)) throw InvalidParams("requires h < H");
  if (!(p.h0 <= p.h1)) throw InvalidParams("requires h0 <= h1");
  if (strict) {
    if (!(p.h1 <= p.H - p.h - p.h0))
      throw InvalidParams("requires h1 <= H - h - h0");
    if (!(3 * p.h + p.h0 + p.h1 >= 2 * p.H + (p.H + 1) / 2))
      throw InvalidParams("requires 3h + h0 + h1 >= 2H + ceil(H/2)");
  } else {
    if (!(p.h1 <= p.H - p.h)) throw InvalidParams("requires h1 <= H - h");
  }
}

DirectedGraph build_family_iv(const FamilyIVParams& p, bool strict) {
  validate_family_iv(p, strict);
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
  auto trunk = [&](int i) { return "V" + pad2(i); };
  auto branch = [&](int a, int i) { return "B" + std::to_string(a) + "_" + pad2(i); };
  auto tail = [&](int a, int b, int i) {
    return "T" + std::to_string(a) + std::to_string(b) + "_" + pad2(i);
  };

  for (int i = 0; i <= p.h; ++i) vertices.push_back(trunk(i));
  for (int i = 1; i <= p.h; ++i)
    edges.push_back(Edge{"f" + pad2(i), trunk(i - 1), trunk(i)});

  const int ha[2] = {p.h0, p.h1};
  for (int a = 0; a < 2; ++a) {
    for (int i = 1; i <= ha[a]; ++i) {
      vertices.push_back(branch(a, i));
      edges.push_back(Edge{"g" + std::to_string(a) + "_" + pad2(i),
                           i == 1 ? trunk(p.h) : branch(a, i - 1), branch(a, i)});
    }
    const int tail_len = p.H - p.h - ha[a];
    for (int b = 0; b < 2; ++b) {
      for (int i = 1; i <= tail_len; ++i) {
        vertices.push_back(tail(a, b, i));
        edges.push_back(Edge{
            "t" + std::to_string(a) + std::to_string(b) + "_" + pad2(i),
            i == 1 ? branch(a, ha[a]) : tail(a, b, i - 1), tail(a, b, i)});
      }
      std::string src = tail_len > 0 ? tail(a, b, tail_len) : branch(a, ha[a]);
      edges.push_back(
          Edge{"e" + std::to_string(a) + std::to_string(b), src, trunk(0)});
    }
  }
  return DirectedGraph(std::move(vertices), std::move(edges));
}

void validate_family_v(const FamilyVParams& p) {
  if (p.K < 1) throw InvalidParams("family V needs K >= 1");
  if (p.ell < 0) throw InvalidParams("family V needs ell >= 0");
  if (p.ell < p.K - 1) throw InvalidParams("family V needs ell >= K - 1");
  if (static_cast<int>(p.branches.size()) != p.K)
    throw InvalidParams("family V needs one branch record per k = 1..K");
  int prev_eta = -1;
  for (int k = 0; k < p.K; ++k) {
    const auto& br = p.branches[k];
    if (br.eta < 0) throw InvalidParams("branch levels must be nonnegative");
    if (br.eta <= prev_eta) throw InvalidParams("branch levels must increase");
    prev_eta = br.eta;
    int total = 0;
    for (const auto& [L, cnt] : br.mu) {
      if (L < 0 || cnt < 0) throw InvalidParams("leg data must be nonnegative");
      total += cnt;
    }
    if (total <= 0) throw InvalidParams("every branch needs at least one leg or return");
  }
  const auto& last = p.branches.back();
  if (last.eta > p.ell) throw InvalidParams("requires eta_K <= ell");
  for (const auto& [L, cnt] : last.mu)
    if (cnt > 0 && L > p.ell - last.eta)
      throw InvalidParams("top-branch legs must not reach past the trunk top");
  // degenerate bare cycle: single trunk loop with nothing else
  if (p.K == 1 && p.branches[0].mu.size() == 1) {
    auto [L, cnt] = *p.branches[0].mu.begin();
    if (L == 0 && cnt == 0) throw InvalidParams("empty branch");
  }
}

DirectedGraph build_family_v(const FamilyVParams& p) {
  validate_family_v(p);
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
  auto trunk = [&](int i) { return "V" + pad2(i); };
  for (int i = 0; i <= p.ell; ++i) vertices.push_back(trunk(i));
  for (int i = 1; i <= p.ell; ++i)
    edges.push_back(Edge{"f" + pad2(i), trunk(i - 1), trunk(i)});
  edges.push_back(Edge{"etop", trunk(p.ell), trunk(0)});

  for (int k = 1; k <= p.K; ++k) {
    const auto& br = p.branches[k - 1];
    for (const auto& [L, cnt] : br.mu) {
      for (int m = 1; m <= cnt; ++m) {
        std::string tag = std::to_string(k) + "_" + std::to_string(L) + "_" +
                          std::to_string(m);
        if (L == 0) {
          edges.push_back(Edge{"e" + tag, trunk(br.eta), trunk(0)});
          continue;
        }
        std::string prev = trunk(br.eta);
        for (int l = 1; l <= L; ++l) {
          std::string w = "W" + tag + "_" + pad2(l);
          vertices.push_back(w);
          edges.push_back(Edge{"l" + tag + "_" + pad2(l), prev, w});
          prev = w;
        }
        edges.push_back(Edge{"e" + tag, prev, trunk(0)});
      }
    }
  }
  DirectedGraph g(std::move(vertices), std::move(edges));
  auto r = check_connectivity(g);
  if (r.is_cycle) throw DegenerateCycle();
  return g;
}

void validate_sh2(const SphericalParams& p) {
  if (p.K < 1 || p.L < 1 || p.M < 1)
    throw InvalidParams("spherical parameters must be positive");
  if (p.K == 1 && p.L == 1 && p.M == 1) throw DegenerateCycle();
}

DirectedGraph build_sh2(const SphericalParams& p) {
  validate_sh2(p);
  std::vector<std::string> vertices{"r"};
  std::vector<Edge> edges;
  for (int i = 0; i < p.K; ++i) {
    std::string u = "u" + std::to_string(i);
    vertices.push_back(u);
    edges.push_back(Edge{"a" + std::to_string(i), "r", u});
    for (int j = 0; j < p.L; ++j) {
      std::string w = "w" + std::to_string(i) + "_" + std::to_string(j);
      vertices.push_back(w);
      edges.push_back(Edge{"b" + std::to_string(i) + "_" + std::to_string(j), u, w});
      for (int m = 0; m < p.M; ++m)
        edges.push_back(Edge{
            "e" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(m),
            w, "r"});
    }
  }
  return DirectedGraph(std::move(vertices), std::move(edges));
}

void validate_three_vertex(const ThreeVertexParams& p) {
  if (p.Taa < 0 || p.Tbb < 0) throw InvalidParams("loop totals must be nonnegative");
  if (p.Tab < 1 || p.Tba < 1) throw InvalidParams("cross totals must be positive");
  if (p.da < 0 || p.dA < 0) throw InvalidParams("splits must be nonnegative");
  if (p.dA > p.Taa) throw InvalidParams("requires dA <= Taa");
  if (p.da > p.Tab) throw InvalidParams("requires da <= Tab");
  if (!(p.Taa + p.Tba > 1)) throw InvalidParams("requires Taa + Tba > 1");
  if (!(p.Tab + p.Tbb > 1)) throw InvalidParams("requires Tab + Tbb > 1");
  if (p.dA == 0 && !(p.da < p.Tab))
    throw InvalidParams("requires da < Tab when dA = 0");
  if (p.Taa == 0 && p.Tbb == 0 && p.da == 0 && (p.Tab < 2 || p.Tba < 2))
    throw InvalidParams("requires Tab >= 2 and Tba >= 2 when Taa = Tbb = da = 0");
}

DirectedGraph build_three_vertex(const ThreeVertexParams& p) {
  validate_three_vertex(p);
  std::vector<std::string> vertices{"a0", "a1", "b"};
  std::vector<Edge> edges;
  auto add = [&](const std::string& prefix, const std::string& s, const std::string& t,
                 int count) {
    for (int i = 1; i <= count; ++i)
      edges.push_back(Edge{prefix + std::to_string(i), s, t});
  };
  add("laa", "a0", "a0", p.Taa - p.dA);
  edges.push_back(Edge{"f", "a0", "a1"});
  add("xab", "a0", "b", p.da);
  add("raa", "a1", "a0", p.dA);
  add("yab", "a1", "b", p.Tab - p.da);
  add("zba", "b", "a0", p.Tba);
  add("lbb", "b", "b", p.Tbb);
  return DirectedGraph(std::move(vertices), std::move(edges));
}

std::uint64_t beta_weight(const DirectedGraph& g, const TreePartition& p,
                          const std::string& v) {
  const std::string root = p.root_of.at(v);
  std::uint64_t total = g.out_degree(g.vertex_index(root));
  for (const std::string& f : p.tree_path.at(v))
    total += g.out_degree(g.dst_of(g.edge_index(f)));
  return total;
}

std::string family_v_params_to_json(const FamilyVParams& p) {
  nlohmann::ordered_json j;
  j["K"] = p.K;
  j["ell"] = p.ell;
  j["branches"] = nlohmann::ordered_json::array();
  for (const auto& br : p.branches) {
    nlohmann::ordered_json b;
    b["eta"] = br.eta;
    nlohmann::ordered_json mu;
    for (const auto& [L, cnt] : br.mu) mu[std::to_string(L)] = cnt;
    b["mu"] = mu;
    j["branches"].push_back(b);
  }
  return j.dump();
}

FamilyVParams family_v_params_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  FamilyVParams p;
  if (!j.contains("K") || !j.contains("ell") || !j.contains("branches"))
    throw SchemaError("family V spec needs K, ell, branches");
  p.K = j["K"].get<int>();
  p.ell = j["ell"].get<int>();
  for (const auto& b : j["branches"]) {
    FamilyVParams::Branch br;
    if (!b.contains("eta") || !b.contains("mu"))
      throw SchemaError("branch needs eta and mu");
    br.eta = b["eta"].get<int>();
    for (const auto& [key, val] : b["mu"].items())
      br.mu[std::stoi(key)] = val.get<int>();
    p.branches.push_back(std::move(br));
  }
  return p;
}

}  // namespace dyckshift
