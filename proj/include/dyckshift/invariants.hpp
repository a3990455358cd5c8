#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dyckshift/graph.hpp"
#include "dyckshift/shift.hpp"

namespace dyckshift {

// Cyclic class of a simple cycle in the contracted graph, stored as the
// lexicographically least rotation of its edge ids.
struct Multiplier {
  std::vector<std::string> cycle;

  std::size_t length() const { return cycle.size(); }
  bool operator==(const Multiplier&) const = default;
  auto operator<=>(const Multiplier&) const = default;
};

std::string multiplier_to_string(const Multiplier& m);

// Conjugacy-invariant summary of a Markov-Dyck shift, assembled by orbit
// enumeration up to max_period. Orbit (not point) counts throughout.
struct InvariantTable {
  std::uint64_t nu = 0;   // edges of the contracted graph
  std::uint64_t tau = 0;  // forest edges
  int max_period = 0;

  std::map<int, std::uint64_t> neutral;   // I0_k
  std::map<int, std::uint64_t> negative;  // I-_k, all negative-multiplier orbits
  std::map<int, std::uint64_t> positive;  // exposed for symmetry checks only

  std::map<Multiplier, std::map<int, std::uint64_t>> per_multiplier;  // negative orbits
  std::map<Multiplier, int> lambda;         // least period with an orbit
  std::map<Multiplier, std::int64_t> delta; // I_{lambda+2} - lambda, where horizon allows

  std::uint64_t fixed_negative = 0;  // I-_1

  // Length-one multipliers grouped by the contracted vertex carrying them.
  std::map<std::string, std::vector<Multiplier>> loops_by_root;
  // Neutral 2-orbit counts attributed to the part of the descending edge source.
  std::map<std::string, std::uint64_t> neutral2_by_root;

  std::uint64_t count(const Multiplier& m, int period) const;
  int lambda_of(const Multiplier& m) const;
  std::int64_t delta_of(const Multiplier& m) const;
  std::vector<Multiplier> multipliers_of_length(std::size_t len) const;
  // Multipliers of the stated length carrying an orbit of the stated period.
  std::vector<Multiplier> multipliers_of_orbit(std::size_t len, int period) const;
};

InvariantTable compute_invariants(const DirectedGraph& g, int max_period,
                                  const SearchOptions& opts = {});

bool multiplier_compatible(const InvariantTable& t, const Multiplier& a,
                           const Multiplier& b);

// Neutral length-2 orbits ({e-e+} per edge) attributed to the part of s(e).
std::map<std::string, std::uint64_t> i2_parts(const DirectedGraph& g,
                                              const TreePartition& p,
                                              const ContractedGraph& c);

// Exact orbit counts for the uniform height-two graphs, as functions of the
// root/branch/leaf out-degrees.
struct Sh2ClosedForm {
  std::int64_t i5 = 0;
  std::int64_t i9 = 0;
  std::int64_t i10 = 0;
  std::int64_t i4_0 = 0;
  std::int64_t nu = 0;
  std::int64_t tau = 0;
};

Sh2ClosedForm closed_form_sh2(std::int64_t K, std::int64_t L, std::int64_t M);

std::string invariants_to_json(const InvariantTable& t);
std::string invariants_to_text(const InvariantTable& t);

}  // namespace dyckshift
