#pragma once

#include <span>
#include <string>
#include <vector>

#include "dyckshift/graph.hpp"

namespace dyckshift {

enum class SymKind { Minus, Plus, Ident };

// e-, e+ or 1@V. `name` is an edge id for Minus/Plus and a vertex for Ident.
// Ordered by name first so that word comparisons agree with the canonical
// orbit order: Minus(e) < Plus(e), edges by id.
struct Symbol {
  SymKind kind;
  std::string name;

  bool operator==(const Symbol&) const = default;
  std::strong_ordering operator<=>(const Symbol& o) const {
    if (auto c = name <=> o.name; c != std::strong_ordering::equal) return c;
    return kind <=> o.kind;
  }
};

Symbol parse_symbol(const std::string& text);
std::string symbol_to_string(const Symbol& s);

// Comma-separated symbol list, e.g. "f1-,e2-,1@V0".
std::vector<Symbol> parse_word(const std::string& text);
std::string word_to_string(std::span<const Symbol> w);

// Canonical nonzero elements are a pair of directed paths sharing their
// source vertex (the apex): the element climbs `up` in reverse and then
// descends `down`. Both empty encodes the idempotent at the apex.
struct NormalForm {
  bool zero = false;
  std::string apex;
  std::vector<std::string> up;    // path order, starts at apex
  std::vector<std::string> down;  // path order, starts at apex

  static NormalForm zero_element() { return NormalForm{true, "", {}, {}}; }
  static NormalForm idempotent(std::string vertex) {
    return NormalForm{false, std::move(vertex), {}, {}};
  }

  bool is_zero() const { return zero; }
  bool is_idempotent() const { return !zero && up.empty() && down.empty(); }
  bool operator==(const NormalForm&) const = default;
  auto operator<=>(const NormalForm&) const = default;
};

// Vertex the element maps from / to (composition is read left to right).
std::string left_vertex(const DirectedGraph& g, const NormalForm& x);
std::string right_vertex(const DirectedGraph& g, const NormalForm& x);

// Left-to-right absorption of one symbol at a time; zero is absorbing.
NormalForm reduce(const DirectedGraph& g, std::span<const Symbol> word);

NormalForm multiply(const DirectedGraph& g, const NormalForm& x, const NormalForm& y);

// Expands an element back into its defining symbol sequence (empty for an
// idempotent, which has no generator word of its own).
std::vector<Symbol> to_symbols(const NormalForm& x);

// Projects a word onto the contracted graph: non-forest letters keep their
// sign over the contracted edge, forest letters and idempotents collapse to
// the idempotent at their subtree root.
std::vector<Symbol> hat_word(const TreePartition& p, const ContractedGraph& c,
                             std::span<const Symbol> word);

}  // namespace dyckshift
