#include "dyckshift/graph_io.hpp"

#include <sstream>

#include <json.hpp>

namespace dyckshift {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

DirectedGraph graph_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object()) throw SchemaError("top level must be an object");
  std::string missing;
  for (const char* key : {"vertices", "edges"})
    if (!j.contains(key)) missing += missing.empty() ? key : std::string(", ") + key;
  if (!missing.empty()) throw SchemaError("missing fields: " + missing);
  if (!j["vertices"].is_array()) throw SchemaError("'vertices' must be an array");
  if (!j["edges"].is_array()) throw SchemaError("'edges' must be an array");

  std::vector<std::string> vertices;
  for (const auto& v : j["vertices"]) {
    if (!v.is_string()) throw SchemaError("vertex names must be strings");
    vertices.push_back(v.get<std::string>());
  }
  std::vector<Edge> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_object()) throw SchemaError("edges must be objects");
    std::string miss;
    for (const char* key : {"id", "src", "dst"})
      if (!e.contains(key) || !e[key].is_string())
        miss += miss.empty() ? key : std::string(", ") + key;
    if (!miss.empty()) throw SchemaError("edge missing string fields: " + miss);
    edges.push_back(Edge{e["id"].get<std::string>(), e["src"].get<std::string>(),
                         e["dst"].get<std::string>()});
  }
  return DirectedGraph(std::move(vertices), std::move(edges));
}

std::string graph_to_json(const DirectedGraph& g) {
  ordered_json j;
  j["vertices"] = g.vertices();
  j["edges"] = ordered_json::array();
  for (const Edge& e : g.edges()) {
    ordered_json je;
    je["id"] = e.id;
    je["src"] = e.src;
    je["dst"] = e.dst;
    j["edges"].push_back(je);
  }
  return j.dump();
}

std::string graph_to_dot(const DirectedGraph& g, const TreePartition* p) {
  std::ostringstream os;
  os << "digraph G {\n";
  for (const Edge& e : g.edges()) {
    const char* style = "bold";
    if (p && p->f_edges.count(e.id)) style = "solid";
    os << "  \"" << e.src << "\" -> \"" << e.dst << "\" [label=\"" << e.id
       << "\", style=" << (p ? style : "solid") << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace dyckshift
