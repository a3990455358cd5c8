#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "dyckshift/graph.hpp"

namespace dyckshift {

// Trunk of length h with two branches at its top and up to four tails, four
// return edges back to the root; all leaves at level H.
struct FamilyIVParams {
  int H = 0, h = 0, h0 = 0, h1 = 0;
  bool operator==(const FamilyIVParams&) const = default;
};

// Trunk of length ell closed by a top return edge; branch k hangs mu_k(L)
// legs of length L at trunk level eta_k, one return edge per leg.
struct FamilyVParams {
  struct Branch {
    int eta = 0;
    std::map<int, int> mu;  // leg length -> count; length 0 = direct return
    bool operator==(const Branch&) const = default;
  };
  int K = 0;
  int ell = 0;
  std::vector<Branch> branches;
  bool operator==(const FamilyVParams&) const = default;
};

// Uniform height-two tree: K children, L grandchildren each, M return edges
// per leaf.
struct SphericalParams {
  int K = 0, L = 0, M = 0;
  bool operator==(const SphericalParams&) const = default;
};

// Three vertices alpha0, alpha1, beta with the single forest edge
// alpha0 -> alpha1 and the multiplicities of the 3x3 adjacency matrix.
struct ThreeVertexParams {
  int Taa = 0, Tbb = 0, Tab = 0, Tba = 0;
  int da = 0;  // alpha0 -> beta edges split off T_ab
  int dA = 0;  // alpha1 -> alpha0 edges split off T_aa
  bool operator==(const ThreeVertexParams&) const = default;
};

void validate_family_iv(const FamilyIVParams& p, bool strict);
void validate_family_v(const FamilyVParams& p);
void validate_sh2(const SphericalParams& p);
void validate_three_vertex(const ThreeVertexParams& p);

DirectedGraph build_family_iv(const FamilyIVParams& p, bool strict = true);
DirectedGraph build_family_v(const FamilyVParams& p);
DirectedGraph build_sh2(const SphericalParams& p);
DirectedGraph build_three_vertex(const ThreeVertexParams& p);

// Sum of out-degrees along the forest path from the root to v, both ends
// included; the branch-weight test picks out the top return edges.
std::uint64_t beta_weight(const DirectedGraph& g, const TreePartition& p,
                          const std::string& v);

std::string family_v_params_to_json(const FamilyVParams& p);
FamilyVParams family_v_params_from_json(const std::string& text);

}  // namespace dyckshift
