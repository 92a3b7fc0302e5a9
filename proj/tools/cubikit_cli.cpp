#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cubikit/acceptance.hpp"
#include "cubikit/blowup.hpp"
#include "cubikit/building.hpp"
#include "cubikit/cube_complex.hpp"
#include "cubikit/graph.hpp"
#include "cubikit/raag.hpp"
#include "cubikit/report.hpp"
#include "cubikit/semiconjugacy.hpp"
#include "cubikit/wallspace.hpp"

using namespace cubikit;
using ojson = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kVerificationFailed = 1, kBadParameters = 2, kBadPath = 3, kBadInput = 4, kInternal = 5 };

struct PathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParameterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PathError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PathError("cannot write " + path);
  out << text;
  if (!out) throw PathError("write failed for " + path);
}

struct Common {
  std::string out;  // report path, stdout when empty
  std::string dot;  // optional DOT path
  std::uint64_t seed = 1;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("-o,--out", c.out, "Write the JSON report here instead of stdout");
  app->add_option("--dot", c.dot, "Also write a DOT drawing of the 1-skeleton");
  app->add_option("--seed", c.seed, "Seed for randomised parts (recorded in the report)");
}

int emit(const Common& c, Report& rep, const std::string& dot = "") {
  rep.seed = c.seed;
  if (!c.dot.empty()) {
    if (dot.empty()) throw ParameterError("this command has no DOT output");
    write_file(c.dot, dot);
  }
  std::string text = rep.to_json();
  if (c.out.empty())
    std::cout << text;
  else
    write_file(c.out, text);
  return rep.ok() ? kOk : kVerificationFailed;
}

void require(bool cond, const std::string& what) {
  if (!cond) throw ParameterError(what);
}

ojson complex_json(const CubeComplex& c) { return ojson::parse(c.to_json()); }

Check flag_check(const std::string& name, const CubeComplex& c) {
  auto rep = check_flag_links(c);
  std::string w = std::to_string(rep.checked_vertices) + " interior vertices, max cube dimension " +
                  std::to_string(rep.max_cube_dimension);
  if (!rep.failures.empty()) w = c.name(rep.failures.front().vertex) + ": " + rep.failures.front().reason;
  return {name, rep.pass, w};
}

// The action restricted to [-window, window].
ZActionSpec restrict_window(const ZActionSpec& spec, int window) {
  ZActionSpec out = spec;
  out.window = window;
  for (auto& [name, table] : out.generators) {
    std::map<int, int> t;
    for (auto [x, y] : table)
      if (std::abs(x) <= window && std::abs(y) <= window) t[x] = y;
    table = t;
  }
  return out;
}

BlowUpData make_data(const Raag& G, const std::string& kind, std::uint64_t seed, int spread) {
  if (kind == "identity") return identity_data(G);
  if (kind == "floor-half") return floor_half_data(G);
  if (kind == "double") return double_data(G);
  if (kind == "random") return random_blowup_data(G, seed, spread);
  return BlowUpData::from_json(G, read_file(kind));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cubikit: cube complexes from right-angled Artin groups, buildings and wallspaces"};
  app.require_subcommand(1);
  std::function<int()> action;

  // graph info
  auto* graph = app.add_subcommand("graph", "Defining graph tools");
  graph->require_subcommand(1);
  auto* info = graph->add_subcommand("info", "Cliques, dimension and join factors of a defining graph");
  Common info_c;
  std::string info_graph;
  info->add_option("--graph", info_graph, "Graph JSON")->required();
  add_common(info, info_c);
  info->callback([&] {
    action = [&] {
      auto g = parse_graph(read_file(info_graph));
      Report rep;
      rep.command = "graph info";
      auto cl = cliques(g);
      int dim = 0;
      ojson cj = ojson::array();
      for (VertexSet c : cl) {
        cj.push_back(g.format_set(c));
        dim = std::max(dim, popcount(c));
      }
      ojson fj = ojson::array();
      for (VertexSet f : join_decompose(g)) fj.push_back(g.format_set(f));
      rep.result["graph"] = ojson::parse(graph_to_json(g));
      rep.result["cliques"] = cj;
      rep.result["dimension"] = dim;
      rep.result["join-factors"] = fj;
      bool closed = true;
      std::set<VertexSet> cs(cl.begin(), cl.end());
      for (VertexSet c : cl)
        for (int v : members(c)) closed = closed && cs.count(c & ~bit(v));
      rep.add("cliques-downward-closed", closed);
      rep.add("empty-clique-first", !cl.empty() && cl.front() == 0);
      return emit(info_c, rep);
    };
  });

  // ball
  auto* ball = app.add_subcommand("ball", "Ball in X(Γ) or, with --exploded, in X_e(Γ)");
  Common ball_c;
  std::string ball_graph;
  int ball_radius = 2, ball_margin = 1;
  bool exploded = false;
  ball->add_option("--graph", ball_graph, "Graph JSON")->required();
  ball->add_option("--radius", ball_radius, "Ball radius");
  ball->add_option("--margin", ball_margin, "Interior margin");
  ball->add_flag("--exploded", exploded, "Use the exploded Salvetti complex");
  add_common(ball, ball_c);
  ball->callback([&] {
    action = [&] {
      require(ball_radius >= 1 && ball_margin >= 1, "radius and margin must be at least 1");
      Raag G(parse_graph(read_file(ball_graph)));
      CubeComplex c = exploded ? ball_Xe(G, ball_radius, ball_margin).complex : ball_X(G, ball_radius, ball_margin).complex;
      Report rep;
      rep.command = exploded ? "ball --exploded" : "ball";
      rep.result["radius"] = ball_radius;
      rep.result["margin"] = ball_margin;
      rep.result["complex"] = complex_json(c);
      rep.checks.push_back(flag_check("flag-links", c));
      return emit(ball_c, rep, c.to_dot());
    };
  });

  // davis
  auto* davis = app.add_subcommand("davis", "Davis realisation of the right-angled building on a window");
  Common davis_c;
  std::string davis_graph;
  DavisWindow dwin;
  davis->add_option("--graph", davis_graph, "Graph JSON")->required();
  davis->add_option("--radius", dwin.base_length, "Longest residue base word");
  davis->add_option("--max-exponent", dwin.max_exponent, "Bound on syllable exponents (box window)");
  davis->add_option("--margin", dwin.margin, "Interior margin");
  add_common(davis, davis_c);
  davis->callback([&] {
    action = [&] {
      require(dwin.base_length >= 1 && dwin.margin >= 1, "radius and margin must be at least 1");
      Raag G(parse_graph(read_file(davis_graph)));
      auto D = davis_ball(G, dwin);
      Report rep;
      rep.command = "davis";
      rep.result["complex"] = complex_json(D.complex);
      rep.checks.push_back(flag_check("flag-links", D.complex));
      std::vector<int> id(D.complex.vertex_count());
      for (int v = 0; v < D.complex.vertex_count(); ++v) id[v] = v;
      rep.add("rank-structure", rank_preserving_check(D.complex, id));
      return emit(davis_c, rep, D.complex.to_dot());
    };
  });

  // check cat0 / check rq
  auto* check = app.add_subcommand("check", "Verification suites");
  check->require_subcommand(1);
  auto* cat0 = check->add_subcommand("cat0", "Flag condition on the links of interior vertices");
  Common cat0_c;
  std::string cat0_graph, cat0_complex;
  int cat0_radius = 2;
  bool cat0_exploded = false;
  cat0->add_option("--graph", cat0_graph, "Graph JSON");
  cat0->add_option("--complex", cat0_complex, "Complex JSON instead of a ball");
  cat0->add_option("--radius", cat0_radius, "Ball radius");
  cat0->add_flag("--exploded", cat0_exploded, "Use the exploded Salvetti complex");
  add_common(cat0, cat0_c);
  cat0->callback([&] {
    action = [&] {
      require(cat0_graph.empty() != cat0_complex.empty(), "give exactly one of --graph and --complex");
      require(cat0_radius >= 1, "radius must be at least 1");
      CubeComplex c;
      if (!cat0_complex.empty()) {
        c = CubeComplex::from_json(read_file(cat0_complex));
      } else {
        Raag G(parse_graph(read_file(cat0_graph)));
        c = cat0_exploded ? ball_Xe(G, cat0_radius, 1).complex : ball_X(G, cat0_radius, 1).complex;
      }
      Report rep;
      rep.command = "check cat0";
      auto fr = check_flag_links(c);
      rep.result["checked-vertices"] = fr.checked_vertices;
      rep.result["max-cube-dimension"] = fr.max_cube_dimension;
      rep.add("flag-links", fr.pass, fr.failures.empty() ? "" : c.name(fr.failures.front().vertex) + ": " + fr.failures.front().reason);
      for (size_t i = 0; i < fr.failures.size() && i < 20; ++i)
        rep.add("vertex " + c.name(fr.failures[i].vertex), false, fr.failures[i].reason);
      return emit(cat0_c, rep);
    };
  });

  auto* rq = check->add_subcommand("rq", "Restriction quotient characterisation on random hyperplane subsets");
  Common rq_c;
  std::string rq_graph;
  int rq_radius = 2, rq_instances = 20;
  bool rq_exploded = false, rq_folding = false;
  rq->add_option("--graph", rq_graph, "Graph JSON");
  rq->add_option("--radius", rq_radius, "Ball radius");
  rq->add_option("--instances", rq_instances, "Number of random hyperplane subsets");
  rq->add_flag("--exploded", rq_exploded, "Use the exploded Salvetti complex");
  rq->add_flag("--folding", rq_folding, "Also run the folding counterexample");
  add_common(rq, rq_c);
  rq->callback([&] {
    action = [&] {
      require(!rq_graph.empty() || rq_folding, "give --graph or --folding");
      require(rq_radius >= 1 && rq_instances >= 0, "invalid radius or instance count");
      Report rep;
      rep.command = "check rq";
      auto flags = [](const RqReport& r) {
        ojson j;
        j["cubical"] = r.cubical;
        j["vertex-preimages-convex"] = r.vertex_preimages_convex;
        j["point-preimages-convex"] = r.point_preimages_convex;
        j["convex-preimages-convex"] = r.convex_preimages_convex;
        j["hyperplane-preimages"] = r.hyperplane_preimages;
        j["matches-rebuilt-quotient"] = r.matches_rebuilt_quotient;
        return j;
      };
      if (!rq_graph.empty()) {
        Raag G(parse_graph(read_file(rq_graph)));
        CubeComplex c = rq_exploded ? ball_Xe(G, rq_radius, 1).complex : ball_X(G, rq_radius, 1).complex;
        HyperplaneSet hs(c);
        std::mt19937_64 rng(rq_c.seed);
        ojson inst = ojson::array();
        for (int i = 0; i < rq_instances; ++i) {
          std::vector<int> K;
          for (size_t k = 0; k < hs.walls().size(); ++k)
            if (rng() % 2) K.push_back(static_cast<int>(k));
          auto q = restriction_quotient(hs, K);
          auto r = verify_rq_characterization(c, q.target, q.vertex_map, rng(), 20);
          ojson j = flags(r);
          j["walls"] = K.size();
          inst.push_back(j);
          bool all = r.cubical && r.vertex_preimages_convex && r.point_preimages_convex && r.convex_preimages_convex &&
                     r.hyperplane_preimages && r.matches_rebuilt_quotient;
          rep.add("instance-" + std::to_string(i), all && r.agree(), r.witnesses.empty() ? "" : r.witnesses.front());
        }
        rep.result["instances"] = inst;
      }
      if (rq_folding) {
        auto ex = folding_example();
        auto r = verify_rq_characterization(ex.source, ex.target, ex.map, rq_c.seed, 20);
        rep.result["folding"] = flags(r);
        rep.add("folding-rejected", !r.vertex_preimages_convex && !r.hyperplane_preimages,
                r.witnesses.empty() ? "" : r.witnesses.front());
      }
      return emit(rq_c, rep);
    };
  });

  // blowup
  auto* blow = app.add_subcommand("blowup", "Blow-up of the building from blow-up data");
  Common blow_c;
  std::string blow_graph, blow_data = "identity";
  BlowUpWindow bwin;
  bwin.davis.base_length = 3;
  bwin.fiber_bound = 5;
  int spread = 3;
  blow->add_option("--graph", blow_graph, "Graph JSON")->required();
  blow->add_option("--data", blow_data, "identity, floor-half, double, random, or a data JSON path");
  blow->add_option("--radius", bwin.davis.base_length, "Longest residue base word");
  blow->add_option("--max-exponent", bwin.davis.max_exponent, "Bound on syllable exponents (box window)");
  blow->add_option("--fiber-bound", bwin.fiber_bound, "Bound on fiber coordinates");
  blow->add_option("--depth", bwin.radius, "Breadth-first radius from the base vertex (-1 for none)");
  blow->add_option("--spread", spread, "Value range of random data");
  add_common(blow, blow_c);
  blow->callback([&] {
    action = [&] {
      require(bwin.davis.base_length >= 1 && bwin.fiber_bound >= 1, "radius and fiber bound must be at least 1");
      Raag G(parse_graph(read_file(blow_graph)));
      auto data = make_data(G, blow_data, blow_c.seed, spread);
      auto Y = blowup_complex(data, bwin);
      Report rep;
      rep.command = "blowup";
      rep.result["data"] = data.description();
      rep.result["complex"] = complex_json(Y.complex);
      auto F = build_fiber_functor(data, Y.davis);
      rep.add("fiber-functor", F.functorial, F.witnesses.empty() ? "" : F.witnesses.front());
      rep.add("one-determined", F.one_determined);
      auto od = one_data(Y);
      int mism = 0, total = 0;
      for (const auto& [c, t] : od.tables())
        for (auto [n, v] : t) {
          ++total;
          if (data.value(c, n) != v) ++mism;
        }
      rep.add("one-data-round-trip", mism == 0, std::to_string(total) + " entries, " + std::to_string(mism) + " mismatches");
      rep.checks.push_back(flag_check("flag-links", Y.complex));
      return emit(blow_c, rep, Y.complex.to_dot());
    };
  });

  // dual
  auto* dual = app.add_subcommand("dual", "Dual cube complex of a wallspace, or the Sageev round trip of a ball");
  Common dual_c;
  std::string dual_ws, dual_graph;
  int dual_radius = 2;
  dual->add_option("--wallspace", dual_ws, "Wallspace JSON");
  dual->add_option("--graph", dual_graph, "Graph JSON: use the hyperplanes of the radius ball of X(Γ)");
  dual->add_option("--radius", dual_radius, "Ball radius with --graph");
  add_common(dual, dual_c);
  dual->callback([&] {
    action = [&] {
      require(dual_ws.empty() != dual_graph.empty(), "give exactly one of --wallspace and --graph");
      require(dual_radius >= 1, "radius must be at least 1");
      Report rep;
      rep.command = "dual";
      Wallspace ws;
      DualComplex d;
      if (!dual_ws.empty()) {
        ws = Wallspace::from_json(read_file(dual_ws));
        d = dual_cube_complex(ws);
      } else {
        Raag G(parse_graph(read_file(dual_graph)));
        auto rt = sageev_round_trip(G, dual_radius);
        ws = rt.wallspace;
        d = rt.dual;
        rep.add("sageev-round-trip", rt.isomorphic, std::to_string(rt.span.vertex_count()) + " span vertices");
      }
      int dim = dual_dimension(ws);
      auto mc = maximal_cubes(ws, d);
      rep.result["walls"] = ws.walls.size();
      rep.result["zero-cubes"] = d.complex.vertex_count();
      rep.result["dimension"] = dim;
      rep.result["maximal-families"] = mc.families;
      rep.result["complex"] = complex_json(d.complex);
      rep.add("dimension-matches-cubes", dim == mc.max_cube_dimension,
              std::to_string(dim) + " vs " + std::to_string(mc.max_cube_dimension));
      rep.add("maximal-cube-correspondence", mc.bijective,
              std::to_string(mc.families.size()) + " families, " + std::to_string(mc.maximal_cubes) + " cubes");
      return emit(dual_c, rep, d.complex.to_dot());
    };
  });

  // semiconj
  auto* semi = app.add_subcommand("semiconj", "Semiconjugate an action on Z to an isometric action");
  Common semi_c;
  std::string semi_action;
  int semi_window = -1;
  SemiconjugacyParams sp;
  semi->add_option("--action", semi_action, "Action JSON")->required();
  semi->add_option("--window", semi_window, "Restrict the tables to [-window, window]");
  semi->add_option("--B", sp.B, "Word length bound for the supremum metric");
  semi->add_option("--R", sp.R, "Rips scale (default 3(L+A))");
  semi->add_option("--w-max", sp.w_max, "Track weight budget (default 4(L R + A))");
  add_common(semi, semi_c);
  semi->callback([&] {
    action = [&] {
      require(sp.B >= 1, "B must be at least 1");
      auto spec = ZActionSpec::from_json(read_file(semi_action));
      if (semi_window >= 0) {
        require(semi_window >= 1 && semi_window <= spec.window, "window must lie in [1, table window]");
        spec = restrict_window(spec, semi_window);
      }
      auto v = validate_action(spec, 4);
      auto r = semiconjugate(spec, sp);
      Report rep;
      rep.command = "semiconj";
      rep.result = ojson::parse(r.to_json());
      rep.add("action-valid", v.ok(), v.witnesses.empty() ? "" : v.witnesses.front());
      rep.add("equivariant", r.equivariant, r.witnesses.empty() ? "" : r.witnesses.front());
      rep.add("isometric", r.isometric);
      std::set<int> tip_ids;
      for (auto [x, t] : r.tip_map) tip_ids.insert(t);
      rep.add("tips-bijective", r.tip_map.size() == r.block_map.size() && tip_ids.size() == r.tip_map.size(),
              std::to_string(r.tip_map.size()) + " points, " + std::to_string(tip_ids.size()) + " tips");
      return emit(semi_c, rep);
    };
  });

  // verify all
  auto* verify = app.add_subcommand("verify", "Acceptance suites");
  verify->require_subcommand(1);
  auto* all = verify->add_subcommand("all", "Run the acceptance criteria and graph checks");
  Common all_c;
  std::string all_graph;
  std::vector<int> only;
  all->add_option("--graph", all_graph, "Also run the graph-specific checks on this graph");
  all->add_option("--only", only, "Run only these criteria");
  add_common(all, all_c);
  all->callback([&] {
    action = [&] {
      Report rep;
      rep.command = "verify all";
      std::optional<DefiningGraph> g;
      if (!all_graph.empty()) g = parse_graph(read_file(all_graph));
      for (const auto& r : run_acceptance(all_c.seed, only, thread_budget())) {
        std::fprintf(stderr, "%s criterion %d: %s (%.2fs)\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
        rep.add("criterion-" + std::to_string(r.id) + ": " + r.name, r.pass, r.witness);
      }
      if (g)
        for (auto& c : graph_checks(*g, all_c.seed)) rep.checks.push_back(c);
      return emit(all_c, rep);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kBadParameters;
  }
  try {
    return action ? action() : kBadParameters;
  } catch (const PathError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadPath;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadParameters;
  } catch (const GraphError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const ActionSpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const WallspaceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const ComplexError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const WordError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
