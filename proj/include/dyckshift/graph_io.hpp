#pragma once

#include <string>

#include "dyckshift/graph.hpp"

namespace dyckshift {

// {"vertices":["v1",...],"edges":[{"id":"e1","src":"v1","dst":"v2"},...]}
DirectedGraph graph_from_json(const std::string& text);
std::string graph_to_json(const DirectedGraph& g);

// One line per edge; forest edges solid, the rest bold when a partition is given.
std::string graph_to_dot(const DirectedGraph& g, const TreePartition* p = nullptr);

}  // namespace dyckshift
