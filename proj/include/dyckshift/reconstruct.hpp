#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dyckshift/families.hpp"
#include "dyckshift/graph.hpp"
#include "dyckshift/invariants.hpp"

namespace dyckshift {

struct FamilyTag {
  enum class Kind { FamilyIV, FamilyV, SphericalH2, ThreeVertex, Unknown };
  Kind kind = Kind::Unknown;
  int H = 0;  // FamilyIV only

  bool operator==(const FamilyTag&) const = default;
};

std::string tag_to_string(const FamilyTag& t);

// All recognizers that accept the table, strongest first; families overlap,
// so the head of the list is the primary tag.
std::vector<FamilyTag> classify_family_all(const InvariantTable& t,
                                           bool floor_c3 = false);
FamilyTag classify_family(const InvariantTable& t, bool floor_c3 = false);

// Compares the input shift against reference graphs wherever the
// reconstruction arguments need it. Must agree with compute_invariants.
using InvariantOracle = std::function<InvariantTable(const DirectedGraph&, int)>;

InvariantOracle make_enumeration_oracle(SearchOptions opts = {});

SphericalParams reconstruct_sh2(const InvariantTable& t);

FamilyIVParams reconstruct_f4(const DirectedGraph& g, const InvariantOracle& oracle,
                              bool floor_c3 = false);

FamilyVParams reconstruct_f5(const InvariantTable& t, const InvariantOracle& oracle);

struct ThreeVertexResult {
  ThreeVertexParams params;
  std::string branch;  // which case of the two-vertex ledger applied
};

ThreeVertexResult reconstruct_three_vertex(const InvariantTable& t,
                                           const ContractedGraph& c);

struct RoundTripReport {
  FamilyTag tag;
  std::vector<FamilyTag> all_tags;
  InvariantTable table;
  std::optional<FamilyIVParams> f4;
  std::optional<FamilyVParams> f5;
  std::optional<SphericalParams> sh2;
  std::optional<ThreeVertexParams> tv;
  std::string tv_branch;
  std::map<std::string, std::string> witness;  // vertex bijection onto the rebuild
  bool success = false;
  std::string detail;
};

// build -> invariants -> classify -> reconstruct -> isomorphism witness.
// horizon <= 0 picks a family-appropriate default when params are given.
RoundTripReport verify_roundtrip(const DirectedGraph& g, int horizon,
                                 const SearchOptions& opts = {}, bool floor_c3 = false);
RoundTripReport verify_roundtrip(const FamilyIVParams& p, int horizon = -1,
                                 const SearchOptions& opts = {});
RoundTripReport verify_roundtrip(const FamilyVParams& p, int horizon = -1,
                                 const SearchOptions& opts = {});
RoundTripReport verify_roundtrip(const SphericalParams& p, int horizon = -1,
                                 const SearchOptions& opts = {});
RoundTripReport verify_roundtrip(const ThreeVertexParams& p, int horizon = -1,
                                 const SearchOptions& opts = {});

std::string roundtrip_report_to_json(const RoundTripReport& r);

}  // namespace dyckshift
