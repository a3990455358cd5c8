#include "dyckshift/semigroup.hpp"

#include <algorithm>
#include <sstream>

namespace dyckshift {

Symbol parse_symbol(const std::string& text) {
  if (text.size() >= 2 && text.rfind("1@", 0) == 0)
    return Symbol{SymKind::Ident, text.substr(2)};
  if (text.size() >= 2 && text.back() == '-')
    return Symbol{SymKind::Minus, text.substr(0, text.size() - 1)};
  if (text.size() >= 2 && text.back() == '+')
    return Symbol{SymKind::Plus, text.substr(0, text.size() - 1)};
  throw UnknownSymbol(text);
}

std::string symbol_to_string(const Symbol& s) {
  switch (s.kind) {
    case SymKind::Minus: return s.name + "-";
    case SymKind::Plus: return s.name + "+";
    case SymKind::Ident: return "1@" + s.name;
  }
  return {};
}

std::vector<Symbol> parse_word(const std::string& text) {
  std::vector<Symbol> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    // trim
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(parse_symbol(item.substr(b, e - b + 1)));
  }
  return out;
}

std::string word_to_string(std::span<const Symbol> w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ",";
    out += symbol_to_string(w[i]);
  }
  return out;
}

std::string left_vertex(const DirectedGraph& g, const NormalForm& x) {
  if (x.zero) throw Error("zero has no left vertex");
  if (!x.up.empty()) return g.edge(g.edge_index(x.up.back())).dst;
  return x.apex;
}

std::string right_vertex(const DirectedGraph& g, const NormalForm& x) {
  if (x.zero) throw Error("zero has no right vertex");
  if (!x.down.empty()) return g.edge(g.edge_index(x.down.back())).dst;
  return x.apex;
}

namespace {

void check_symbol(const DirectedGraph& g, const Symbol& s) {
  if (s.kind == SymKind::Ident) {
    if (!g.has_vertex(s.name)) throw UnknownSymbol(symbol_to_string(s));
  } else if (!g.has_edge(s.name)) {
    throw UnknownSymbol(symbol_to_string(s));
  }
}

// x := x * s. Returns false when the product collapses to zero.
bool absorb(const DirectedGraph& g, NormalForm& x, const Symbol& s) {
  const std::string right = right_vertex(g, x);
  switch (s.kind) {
    case SymKind::Minus: {
      const Edge& e = g.edge(g.edge_index(s.name));
      if (e.src != right) return false;
      x.down.push_back(s.name);
      return true;
    }
    case SymKind::Plus: {
      const Edge& e = g.edge(g.edge_index(s.name));
      if (!x.down.empty()) {
        if (x.down.back() != s.name) return false;  // f-g+ = 0 for f != g
        x.down.pop_back();
        return true;
      }
      if (e.dst != x.apex) return false;
      x.up.insert(x.up.begin(), s.name);
      x.apex = e.src;
      return true;
    }
    case SymKind::Ident:
      return s.name == right;
  }
  return false;
}

NormalForm seed(const DirectedGraph& g, const Symbol& s) {
  switch (s.kind) {
    case SymKind::Minus: {
      const Edge& e = g.edge(g.edge_index(s.name));
      return NormalForm{false, e.src, {}, {s.name}};
    }
    case SymKind::Plus: {
      const Edge& e = g.edge(g.edge_index(s.name));
      return NormalForm{false, e.src, {s.name}, {}};
    }
    case SymKind::Ident:
      return NormalForm::idempotent(s.name);
  }
  return NormalForm::zero_element();
}

}  // namespace

NormalForm reduce(const DirectedGraph& g, std::span<const Symbol> word) {
  if (word.empty()) throw Error("cannot reduce the empty word");
  for (const Symbol& s : word) check_symbol(g, s);
  NormalForm acc = seed(g, word[0]);
  for (std::size_t i = 1; i < word.size(); ++i)
    if (!absorb(g, acc, word[i])) return NormalForm::zero_element();
  return acc;
}

std::vector<Symbol> to_symbols(const NormalForm& x) {
  if (x.zero) throw Error("zero has no symbol expansion");
  std::vector<Symbol> out;
  for (auto it = x.up.rbegin(); it != x.up.rend(); ++it)
    out.push_back(Symbol{SymKind::Plus, *it});
  for (const auto& e : x.down) out.push_back(Symbol{SymKind::Minus, e});
  return out;
}

NormalForm multiply(const DirectedGraph& g, const NormalForm& x, const NormalForm& y) {
  if (x.zero || y.zero) return NormalForm::zero_element();
  NormalForm acc = x;
  if (y.is_idempotent())
    return right_vertex(g, acc) == y.apex ? acc : NormalForm::zero_element();
  for (const Symbol& s : to_symbols(y))
    if (!absorb(g, acc, s)) return NormalForm::zero_element();
  return acc;
}

std::vector<Symbol> hat_word(const TreePartition& p, const ContractedGraph& c,
                             std::span<const Symbol> word) {
  std::vector<Symbol> out;
  out.reserve(word.size());
  for (const Symbol& s : word) {
    if (s.kind == SymKind::Ident) {
      auto it = p.root_of.find(s.name);
      if (it == p.root_of.end()) throw UnknownSymbol(symbol_to_string(s));
      out.push_back(Symbol{SymKind::Ident, it->second});
      continue;
    }
    auto hi = c.hat_ident.find(s.name);
    if (hi != c.hat_ident.end()) {
      out.push_back(Symbol{SymKind::Ident, hi->second});
      continue;
    }
    auto he = c.hat_edge.find(s.name);
    if (he == c.hat_edge.end()) throw UnknownSymbol(symbol_to_string(s));
    out.push_back(Symbol{s.kind, he->second});
  }
  return out;
}

}  // namespace dyckshift
