#include "dyckshift/graph.hpp"

#include <algorithm>
#include <numeric>

namespace dyckshift {

DirectedGraph::DirectedGraph(std::vector<std::string> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return a.id < b.id; });

  for (std::size_t i = 0; i < vertices_.size(); ++i)
    vindex_[vertices_[i]] = static_cast<int>(i);

  out_.assign(vertices_.size(), {});
  in_.assign(vertices_.size(), {});
  esrc_.reserve(edges_.size());
  edst_.reserve(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (eindex_.count(e.id))
      throw SchemaError("duplicate edge id '" + e.id + "'");
    auto s = vindex_.find(e.src);
    auto t = vindex_.find(e.dst);
    if (s == vindex_.end())
      throw SchemaError("edge '" + e.id + "' references unknown vertex '" + e.src + "'");
    if (t == vindex_.end())
      throw SchemaError("edge '" + e.id + "' references unknown vertex '" + e.dst + "'");
    eindex_[e.id] = static_cast<int>(i);
    esrc_.push_back(s->second);
    edst_.push_back(t->second);
    out_[s->second].push_back(static_cast<int>(i));
    in_[t->second].push_back(static_cast<int>(i));
  }
}

bool DirectedGraph::has_vertex(const std::string& v) const { return vindex_.count(v) > 0; }
bool DirectedGraph::has_edge(const std::string& e) const { return eindex_.count(e) > 0; }

int DirectedGraph::vertex_index(const std::string& v) const {
  auto it = vindex_.find(v);
  if (it == vindex_.end()) throw SchemaError("unknown vertex '" + v + "'");
  return it->second;
}

int DirectedGraph::edge_index(const std::string& e) const {
  auto it = eindex_.find(e);
  if (it == eindex_.end()) throw SchemaError("unknown edge '" + e + "'");
  return it->second;
}

namespace {

// Vertices reachable from `start` along `adj`.
std::vector<bool> reach(const DirectedGraph& g, int start,
                        const std::vector<int>& (DirectedGraph::*adj)(int) const,
                        int (DirectedGraph::*step)(int) const) {
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<int> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int e : (g.*adj)(v)) {
      int w = (g.*step)(e);
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

ConnectivityReport check_connectivity(const DirectedGraph& g) {
  ConnectivityReport r;
  if (g.vertex_count() == 0 || g.edge_count() == 0) return r;
  auto fwd = reach(g, 0, &DirectedGraph::out_edges, &DirectedGraph::dst_of);
  auto bwd = reach(g, 0, &DirectedGraph::in_edges, &DirectedGraph::src_of);
  r.strongly_connected =
      std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
      std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
  if (r.strongly_connected) {
    bool cyc = true;
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
      if (g.out_degree(static_cast<int>(v)) != 1 || g.in_degree(static_cast<int>(v)) != 1)
        cyc = false;
    r.is_cycle = cyc;
  }
  return r;
}

void require_valid_shift_graph(const DirectedGraph& g) {
  auto r = check_connectivity(g);
  if (!r.strongly_connected) throw NotStronglyConnected();
  if (r.is_cycle) throw IsACycle();
}

TreePartition compute_tree_partition(const DirectedGraph& g) {
  require_valid_shift_graph(g);
  TreePartition p;
  std::vector<int> parent_edge(g.vertex_count(), -1);
  for (std::size_t vi = 0; vi < g.vertex_count(); ++vi) {
    int v = static_cast<int>(vi);
    if (g.in_degree(v) == 1) {
      int e = g.in_edges(v)[0];
      p.f_edges.insert(g.edge(e).id);
      parent_edge[v] = e;
    } else {
      p.roots.push_back(g.vertex_name(v));
    }
  }

  // A sole-incoming loop would disconnect its vertex, so forest edges are
  // never loops here; asserted by the reach check below.
  std::vector<int> frontier;
  for (const auto& rname : p.roots) {
    int r = g.vertex_index(rname);
    p.root_of[rname] = rname;
    p.level[rname] = 0;
    p.tree_path[rname] = {};
    frontier.push_back(r);
  }
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int v : frontier) {
      const std::string& vn = g.vertex_name(v);
      for (int e : g.out_edges(v)) {
        int w = g.dst_of(e);
        if (parent_edge[w] != e) continue;  // not the forest edge into w
        const std::string& wn = g.vertex_name(w);
        if (p.root_of.count(wn)) continue;
        p.root_of[wn] = p.root_of.at(vn);
        p.level[wn] = p.level.at(vn) + 1;
        auto path = p.tree_path.at(vn);
        path.push_back(g.edge(e).id);
        p.tree_path[wn] = std::move(path);
        next.push_back(w);
      }
    }
    frontier = std::move(next);
  }
  if (p.root_of.size() != g.vertex_count()) throw FEdgesCyclic();
  return p;
}

ContractedGraph contract(const DirectedGraph& g, const TreePartition& p) {
  std::vector<std::string> vertices = p.roots;
  std::vector<Edge> edges;
  std::map<std::string, std::string> hat_edge, hat_ident;
  for (const Edge& e : g.edges()) {
    if (p.f_edges.count(e.id)) {
      hat_ident[e.id] = p.root_of.at(e.src);
    } else {
      edges.push_back(Edge{e.id, p.root_of.at(e.src), p.root_of.at(e.dst)});
      hat_edge[e.id] = e.id;
    }
  }
  return ContractedGraph{DirectedGraph(std::move(vertices), std::move(edges)),
                         std::move(hat_edge), std::move(hat_ident)};
}

namespace {

// Multiplicity matrix keyed by dense vertex indices plus a per-vertex
// refinement signature used to order and prune the backtracking.
struct IsoData {
  std::vector<std::vector<int>> mult;
  std::vector<std::string> sig;
};

IsoData iso_data(const DirectedGraph& g) {
  IsoData d;
  int n = static_cast<int>(g.vertex_count());
  d.mult.assign(n, std::vector<int>(n, 0));
  for (const Edge& e : g.edges())
    d.mult[g.vertex_index(e.src)][g.vertex_index(e.dst)]++;
  d.sig.resize(n);
  for (int v = 0; v < n; ++v) {
    std::vector<int> outm, inm;
    for (int w = 0; w < n; ++w) {
      if (d.mult[v][w]) outm.push_back(d.mult[v][w]);
      if (d.mult[w][v]) inm.push_back(d.mult[w][v]);
    }
    std::sort(outm.begin(), outm.end());
    std::sort(inm.begin(), inm.end());
    std::string s = "L" + std::to_string(d.mult[v][v]) + "|O";
    for (int x : outm) s += std::to_string(x) + ",";
    s += "|I";
    for (int x : inm) s += std::to_string(x) + ",";
    d.sig[v] = s;
  }
  return d;
}

bool extend(const IsoData& a, const IsoData& b, std::vector<int>& map,
            std::vector<bool>& used, std::size_t pos, const std::vector<int>& order) {
  if (pos == order.size()) return true;
  int v = order[pos];
  int n = static_cast<int>(a.sig.size());
  for (int w = 0; w < n; ++w) {
    if (used[w] || a.sig[v] != b.sig[w]) continue;
    bool ok = true;
    for (std::size_t q = 0; q < pos && ok; ++q) {
      int u = order[q];
      if (a.mult[v][u] != b.mult[w][map[u]] || a.mult[u][v] != b.mult[map[u]][w]) ok = false;
    }
    if (a.mult[v][v] != b.mult[w][w]) ok = false;
    if (!ok) continue;
    map[v] = w;
    used[w] = true;
    if (extend(a, b, map, used, pos + 1, order)) return true;
    used[w] = false;
    map[v] = -1;
  }
  return false;
}

}  // namespace

std::optional<std::map<std::string, std::string>> are_isomorphic(
    const DirectedGraph& g1, const DirectedGraph& g2, std::size_t max_vertices) {
  if (g1.vertex_count() > max_vertices || g2.vertex_count() > max_vertices)
    throw SizeLimitExceeded("isomorphism limited to " + std::to_string(max_vertices) +
                            " vertices");
  if (g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count())
    return std::nullopt;

  IsoData a = iso_data(g1), b = iso_data(g2);
  {
    auto sa = a.sig, sb = b.sig;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }

  int n = static_cast<int>(g1.vertex_count());
  // Rarest signatures first keeps the search shallow.
  std::map<std::string, int> freq;
  for (const auto& s : a.sig) freq[s]++;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (freq[a.sig[x]] != freq[a.sig[y]]) return freq[a.sig[x]] < freq[a.sig[y]];
    return x < y;
  });

  std::vector<int> map(n, -1);
  std::vector<bool> used(n, false);
  if (!extend(a, b, map, used, 0, order)) return std::nullopt;

  std::map<std::string, std::string> out;
  for (int v = 0; v < n; ++v) out[g1.vertex_name(v)] = g2.vertex_name(map[v]);
  return out;
}

}  // namespace dyckshift
