#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dyckshift/graph.hpp"
#include "dyckshift/semigroup.hpp"

namespace dyckshift {

// Word over the shift alphabet E- u E+ (no idempotents).
using ShiftWord = std::vector<Symbol>;

struct SearchOptions {
  std::uint64_t budget = 0;  // 0 = default_budget()
  int threads = 1;
};

// DYCKSHIFT_BUDGET overrides the built-in default node budget.
std::uint64_t default_budget();

bool is_admissible(const DirectedGraph& g, std::span<const Symbol> w);

// counts[n] = number of admissible words of length n, 0 <= n <= max_len.
std::vector<std::uint64_t> count_admissible(const DirectedGraph& g, int max_len,
                                            const SearchOptions& opts = {});

// True iff every power of w is admissible. Decided by the rotation criterion:
// some rotation reduces to an idempotent or to a pure one-sided form whose
// path closes up at the apex.
bool is_periodic_word(const DirectedGraph& g, const ShiftWord& w);

struct OrbitClass {
  enum class Kind { Neutral, Negative, Positive };
  Kind kind = Kind::Neutral;
  std::string root;                // Neutral: the subtree root carrying the idempotent
  std::vector<std::string> cycle;  // Negative/Positive: least rotation of the simple cycle
  int exponent = 0;                // Negative/Positive: power of the cycle
  bool operator==(const OrbitClass&) const = default;
};

OrbitClass classify_period_word(const DirectedGraph& g, const TreePartition& p,
                                const ContractedGraph& c, const ShiftWord& w);

struct PeriodicOrbit {
  ShiftWord word;  // lexicographically least rotation, Minus(e) < Plus(e), edges by id
  int period = 0;
};

// All periodic orbits of period exactly k, as (least rotation, class), sorted.
std::vector<std::pair<PeriodicOrbit, OrbitClass>> enumerate_orbits(
    const DirectedGraph& g, int k, const SearchOptions& opts = {});

struct CodeCounts {
  // c_counts[I] = first returns to the start vertex of length 2I;
  // d_counts[eta] = straight descent-ascent returns = paths of length eta.
  std::vector<std::uint64_t> c_counts;
  std::vector<std::uint64_t> d_counts;
};

CodeCounts code_counts(const DirectedGraph& g, const std::string& vertex, int bound,
                       const SearchOptions& opts = {});

}  // namespace dyckshift
