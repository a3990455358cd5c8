#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dyckshift/errors.hpp"

namespace dyckshift {

struct Edge {
  std::string id;
  std::string src;
  std::string dst;
};

// Finite directed multigraph with named vertices and edges. Vertices are kept
// sorted and edges are kept sorted by id so that every algorithm downstream
// iterates in a deterministic order. Immutable after construction.
class DirectedGraph {
 public:
  DirectedGraph(std::vector<std::string> vertices, std::vector<Edge> edges);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_vertex(const std::string& v) const;
  bool has_edge(const std::string& e) const;

  // Dense indices, stable for the lifetime of the graph.
  int vertex_index(const std::string& v) const;
  int edge_index(const std::string& e) const;
  const std::string& vertex_name(int i) const { return vertices_[i]; }
  const Edge& edge(int i) const { return edges_[i]; }

  int src_of(int e) const { return esrc_[e]; }
  int dst_of(int e) const { return edst_[e]; }

  const std::vector<int>& out_edges(int v) const { return out_[v]; }
  const std::vector<int>& in_edges(int v) const { return in_[v]; }

  std::size_t out_degree(int v) const { return out_[v].size(); }
  std::size_t in_degree(int v) const { return in_[v].size(); }

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::map<std::string, int> vindex_;
  std::map<std::string, int> eindex_;
  std::vector<int> esrc_, edst_;
  std::vector<std::vector<int>> out_, in_;
};

struct ConnectivityReport {
  bool strongly_connected = false;
  bool is_cycle = false;
};

ConnectivityReport check_connectivity(const DirectedGraph& g);

// Splits the edge set into the forest edges (unique incoming edge of their
// target) and the rest, and roots every vertex in its subtree.
struct TreePartition {
  std::set<std::string> f_edges;
  std::vector<std::string> roots;
  std::map<std::string, std::string> root_of;
  std::map<std::string, int> level;
  // Forest path from the root of the subtree down to the vertex.
  std::map<std::string, std::vector<std::string>> tree_path;
};

TreePartition compute_tree_partition(const DirectedGraph& g);

// Graph obtained by contracting every subtree to its root. Non-forest edges
// keep their ids, so cycles in the contracted graph read as lists of original
// edge ids.
struct ContractedGraph {
  DirectedGraph graph;
  std::map<std::string, std::string> hat_edge;   // non-forest edge -> its id in `graph`
  std::map<std::string, std::string> hat_ident;  // forest edge -> root it collapses to
};

ContractedGraph contract(const DirectedGraph& g, const TreePartition& p);

// Exact backtracking isomorphism over multigraphs. Returns a vertex bijection
// preserving edge multiplicities, or nullopt. Throws SizeLimitExceeded above
// `max_vertices`.
std::optional<std::map<std::string, std::string>> are_isomorphic(
    const DirectedGraph& g1, const DirectedGraph& g2, std::size_t max_vertices = 64);

// Requires strong connectivity and rejects bare cycles; used by the family
// builders and the partition code.
void require_valid_shift_graph(const DirectedGraph& g);

}  // namespace dyckshift
