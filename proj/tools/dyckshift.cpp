#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dyckshift/families.hpp"
#include "dyckshift/graph_io.hpp"
#include "dyckshift/invariants.hpp"
#include "dyckshift/reconstruct.hpp"
#include "dyckshift/shift.hpp"

namespace {

using namespace dyckshift;

std::string read_stdin() {
  std::ostringstream os;
  os << std::cin.rdbuf();
  return os.str();
}

DirectedGraph graph_from_stdin() { return graph_from_json(read_stdin()); }

int run(int argc, char** argv) {
  CLI::App app{"Markov-Dyck shift toolkit: families, invariants, reconstruction"};
  app.require_subcommand(1);
  // --h is a family parameter, so help lives on --help alone
  app.set_help_flag("--help", "print help and exit");

  bool json_out = false;
  int threads = 1;
  std::uint64_t budget = 0;
  app.add_flag("--json", json_out, "emit JSON instead of tables");
  app.add_option("--threads", threads, "enumeration worker threads");
  app.add_option("--budget", budget, "search node budget (overrides DYCKSHIFT_BUDGET)");

  auto opts = [&] { return SearchOptions{budget, threads}; };

  // family -------------------------------------------------------------
  auto* family = app.add_subcommand("family", "build a family graph, JSON on stdout");
  family->fallthrough();
  family->set_help_flag("--help");

  auto* f4 = family->add_subcommand("f4", "trunk/branch/tail family");
  f4->fallthrough();
  f4->set_help_flag("--help");
  int H = 0, h = 0, h0 = 0, h1 = 0;
  bool strict = true;
  f4->add_option("--H", H)->required();
  f4->add_option("--h", h)->required();
  f4->add_option("--h0", h0)->required();
  f4->add_option("--h1", h1)->required();
  f4->add_flag("--strict", strict, "enforce the full parameter inequalities (default)");
  f4->callback([&] {
    std::cout << graph_to_json(build_family_iv(FamilyIVParams{H, h, h0, h1}, strict))
              << "\n";
  });

  auto* f5 = family->add_subcommand("f5", "caterpillar family");
  f5->fallthrough();
  std::string spec;
  f5->add_option("--spec", spec, "params as JSON text or a file path")->required();
  f5->callback([&] {
    std::string text = spec;
    if (!spec.empty() && spec[0] != '{') {
      std::ifstream in(spec);
      if (!in) throw ParseError("cannot open " + spec);
      std::ostringstream os;
      os << in.rdbuf();
      text = os.str();
    }
    std::cout << graph_to_json(build_family_v(family_v_params_from_json(text))) << "\n";
  });

  auto* sh2cmd = family->add_subcommand("sh2", "uniform height-two family");
  sh2cmd->fallthrough();
  int K = 0, L = 0, M = 0;
  sh2cmd->add_option("--K", K)->required();
  sh2cmd->add_option("--L", L)->required();
  sh2cmd->add_option("--M", M)->required();
  sh2cmd->callback(
      [&] { std::cout << graph_to_json(build_sh2(SphericalParams{K, L, M})) << "\n"; });

  auto* tv = family->add_subcommand("tv", "three-vertex family");
  tv->fallthrough();
  ThreeVertexParams tvp;
  tv->add_option("--Taa", tvp.Taa)->required();
  tv->add_option("--Tbb", tvp.Tbb)->required();
  tv->add_option("--Tab", tvp.Tab)->required();
  tv->add_option("--Tba", tvp.Tba)->required();
  tv->add_option("--da", tvp.da)->required();
  tv->add_option("--dA", tvp.dA)->required();
  tv->callback([&] { std::cout << graph_to_json(build_three_vertex(tvp)) << "\n"; });

  // invariants ----------------------------------------------------------
  auto* inv = app.add_subcommand("invariants", "invariant table of the graph on stdin");
  inv->fallthrough();
  int horizon = 6;
  inv->add_option("--horizon", horizon, "max period to enumerate");
  inv->callback([&] {
    auto t = compute_invariants(graph_from_stdin(), horizon, opts());
    std::cout << (json_out ? invariants_to_json(t) + "\n" : invariants_to_text(t));
  });

  // orbits ---------------------------------------------------------------
  auto* orb = app.add_subcommand("orbits", "periodic orbits of one period");
  orb->fallthrough();
  int period = 2;
  orb->add_option("--period", period)->required();
  orb->callback([&] {
    DirectedGraph g = graph_from_stdin();
    auto orbits = enumerate_orbits(g, period, opts());
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [o, cls] : orbits) {
      nlohmann::ordered_json j;
      j["word"] = word_to_string(o.word);
      j["period"] = o.period;
      nlohmann::ordered_json jc;
      switch (cls.kind) {
        case OrbitClass::Kind::Neutral:
          jc["kind"] = "neutral";
          jc["root"] = cls.root;
          break;
        case OrbitClass::Kind::Negative:
          jc["kind"] = "neg";
          jc["cycle"] = cls.cycle;
          jc["M"] = cls.exponent;
          break;
        case OrbitClass::Kind::Positive:
          jc["kind"] = "pos";
          jc["cycle"] = cls.cycle;
          jc["M"] = cls.exponent;
          break;
      }
      j["class"] = jc;
      arr.push_back(j);
    }
    if (json_out) {
      std::cout << arr.dump() << "\n";
    } else {
      for (const auto& j : arr)
        std::cout << j["word"].get<std::string>() << "\t"
                  << j["class"]["kind"].get<std::string>() << "\n";
      std::cout << "total\t" << arr.size() << "\n";
    }
  });

  // language --------------------------------------------------------------
  auto* lang = app.add_subcommand("language", "admissible word counts");
  lang->fallthrough();
  int max_len = 6;
  lang->add_option("--max-len", max_len);
  lang->callback([&] {
    auto counts = count_admissible(graph_from_stdin(), max_len, opts());
    if (json_out) {
      nlohmann::ordered_json j = counts;
      std::cout << j.dump() << "\n";
    } else {
      for (std::size_t n = 0; n < counts.size(); ++n)
        std::cout << n << "\t" << counts[n] << "\n";
    }
  });

  // reconstruct -------------------------------------------------------------
  auto* rec = app.add_subcommand("reconstruct", "recognize and rebuild from stdin");
  rec->fallthrough();
  int rec_horizon = 10;
  bool floor_c3 = false;
  rec->add_option("--horizon", rec_horizon);
  rec->add_flag("--floor-c3", floor_c3, "use the floor variant of the tree-size bound");
  rec->callback([&] {
    DirectedGraph g = graph_from_stdin();
    auto report = verify_roundtrip(g, rec_horizon, opts(), floor_c3);
    std::cout << roundtrip_report_to_json(report) << "\n";
    if (!report.success) std::exit(1);
  });

  // roundtrip ----------------------------------------------------------------
  auto* rt = app.add_subcommand("roundtrip", "build, reconstruct and compare");
  rt->fallthrough();
  std::string rt_family;
  std::vector<std::string> rt_args;
  int rt_horizon = -1;
  rt->add_option("family", rt_family, "f4 | f5 | sh2 | tv")->required();
  rt->add_option("params", rt_args, "family parameters (f5 takes JSON)");
  rt->add_option("--horizon", rt_horizon);
  rt->callback([&] {
    RoundTripReport report;
    auto geti = [&](std::size_t i) {
      if (i >= rt_args.size()) throw InvalidParams("missing positional parameter");
      return std::stoi(rt_args[i]);
    };
    if (rt_family == "f4")
      report = verify_roundtrip(FamilyIVParams{geti(0), geti(1), geti(2), geti(3)},
                                rt_horizon, opts());
    else if (rt_family == "f5")
      report = verify_roundtrip(family_v_params_from_json(rt_args.at(0)), rt_horizon,
                                opts());
    else if (rt_family == "sh2")
      report = verify_roundtrip(SphericalParams{geti(0), geti(1), geti(2)}, rt_horizon,
                                opts());
    else if (rt_family == "tv")
      report = verify_roundtrip(ThreeVertexParams{geti(0), geti(1), geti(2), geti(3),
                                                  geti(4), geti(5)},
                                rt_horizon, opts());
    else
      throw InvalidParams("unknown family " + rt_family);
    std::cout << roundtrip_report_to_json(report) << "\n";
    if (!report.success) std::exit(1);
  });

  // isomorphic ---------------------------------------------------------------
  auto* iso = app.add_subcommand("isomorphic", "graph on stdin vs graph file");
  iso->fallthrough();
  std::string other;
  iso->add_option("graph", other, "path to the second graph JSON")->required();
  iso->callback([&] {
    DirectedGraph g1 = graph_from_stdin();
    std::ifstream in(other);
    if (!in) throw ParseError("cannot open " + other);
    std::ostringstream os;
    os << in.rdbuf();
    DirectedGraph g2 = graph_from_json(os.str());
    auto witness = are_isomorphic(g1, g2);
    if (!witness) {
      std::cout << "{\"isomorphic\":false}\n";
      std::exit(1);
    }
    nlohmann::ordered_json j;
    j["isomorphic"] = true;
    nlohmann::ordered_json w;
    for (const auto& [k, v] : *witness) w[k] = v;
    j["witness"] = w;
    std::cout << j.dump() << "\n";
  });

  // dot ------------------------------------------------------------------
  auto* dot = app.add_subcommand("dot", "DOT export of the graph on stdin");
  dot->fallthrough();
  bool mark_forest = false;
  dot->add_flag("--forest", mark_forest, "style forest edges solid, others bold");
  dot->callback([&] {
    DirectedGraph g = graph_from_stdin();
    if (mark_forest) {
      TreePartition p = compute_tree_partition(g);
      std::cout << graph_to_dot(g, &p);
    } else {
      std::cout << graph_to_dot(g);
    }
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const dyckshift::ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const dyckshift::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dyckshift::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
