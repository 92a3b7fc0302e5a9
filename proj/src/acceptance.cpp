#include "cubikit/acceptance.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "cubikit/blowup.hpp"
#include "cubikit/building.hpp"
#include "cubikit/cube_complex.hpp"
#include "cubikit/isomorphism.hpp"
#include "cubikit/raag.hpp"
#include "cubikit/semiconjugacy.hpp"

namespace cubikit {

namespace {

// Pinned limits.
constexpr double kFlagSecondsPerCase = 10;
constexpr double kRqSeconds = 60;
constexpr double kSageevSeconds = 60;
constexpr double kBlowupIsoSeconds = 30;
constexpr double kSemiconjSeconds = 120;
constexpr double kDefaultSeconds = 300;
constexpr int kRqInstances = 100;
constexpr int kRandomDataSets = 50;
constexpr int kRandomWallspaces = 200;
constexpr int kMaxWalls = 12;
constexpr double kQiLipschitz = 4;
constexpr int kQiAdditive = 4;
constexpr int kQiWindow = 32;
constexpr int kSemiconjWindow = 64;
constexpr int kSemiconjB = 8;
constexpr int kSemiconjR = 6;
constexpr int kDensityBound = 2;

struct Named {
  std::string name;
  DefiningGraph graph;
};

std::vector<Named> flag_graphs() {
  return {{"K2", graphs::complete(2)}, {"C5", graphs::cycle(5)}, {"P3", graphs::path(3)}, {"D2", graphs::discrete(2)}};
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
};

std::string fmt(double x) {
  std::ostringstream o;
  o.precision(4);
  o << x;
  return o.str();
}

CriterionOutcome flag_links(std::uint64_t) {
  CriterionOutcome out{1, "flag links of ball_X and ball_Xe interiors", true, "", 0, kFlagSecondsPerCase};
  std::ostringstream w;
  for (const auto& [name, g] : flag_graphs()) {
    Raag G(g);
    for (int r = 1; r <= 3; ++r) {
      Timer t;
      auto x = check_flag_links(ball_X(G, r, 1).complex);
      double tx = t.seconds();
      Timer t2;
      auto xe = check_flag_links(ball_Xe(G, r, 1).complex);
      double te = t2.seconds();
      if (!x.pass || !xe.pass || tx > kFlagSecondsPerCase || te > kFlagSecondsPerCase) {
        out.pass = false;
        w << name << " r=" << r << (x.pass ? "" : " X fails") << (xe.pass ? "" : " Xe fails")
          << (tx > kFlagSecondsPerCase || te > kFlagSecondsPerCase ? " slow" : "") << "; ";
      }
    }
  }
  out.witness = out.pass ? "4 graphs x radius 1..3, X and Xe pass" : w.str();
  return out;
}

CriterionOutcome rq_equivalence(std::uint64_t seed) {
  CriterionOutcome out{2, "restriction quotient characterisation", true, "", 0, kRqSeconds};
  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::string, CubeComplex>> balls;
  for (const auto& [name, g] : flag_graphs()) {
    Raag G(g);
    balls.push_back({name + " X r2", ball_X(G, 2, 1).complex});
    balls.push_back({name + " X r3", ball_X(G, 3, 1).complex});
    balls.push_back({name + " Xe r3", ball_Xe(G, 3, 1).complex});
  }
  std::vector<HyperplaneSet> hs;
  for (const auto& b : balls) hs.emplace_back(b.second);
  int agreeing = 0;
  std::ostringstream w;
  for (int i = 0; i < kRqInstances; ++i) {
    size_t b = rng() % balls.size();
    const auto& walls = hs[b].walls();
    std::vector<int> K;
    for (size_t k = 0; k < walls.size(); ++k)
      if (rng() % 2) K.push_back(static_cast<int>(k));
    auto rq = restriction_quotient(hs[b], K);
    auto rep = verify_rq_characterization(balls[b].second, rq.target, rq.vertex_map, rng(), 20);
    bool all = rep.cubical && rep.vertex_preimages_convex && rep.point_preimages_convex &&
               rep.convex_preimages_convex && rep.hyperplane_preimages && rep.matches_rebuilt_quotient;
    if (all) {
      ++agreeing;
    } else if (out.pass) {
      out.pass = false;
      w << "instance " << i << " on " << balls[b].first << " |K|=" << K.size()
        << (rep.witnesses.empty() ? "" : ": " + rep.witnesses.front()) << "; ";
    }
  }
  auto ex = folding_example();
  auto fold = verify_rq_characterization(ex.source, ex.target, ex.map, seed, 20);
  bool fold_ok = !fold.vertex_preimages_convex && !fold.hyperplane_preimages;
  if (!fold_ok) {
    out.pass = false;
    w << "folding example not rejected; ";
  }
  out.witness = std::to_string(agreeing) + "/" + std::to_string(kRqInstances) +
                " instances all true; folding (1)=" + (fold.vertex_preimages_convex ? "true" : "false") +
                " (4)=" + (fold.hyperplane_preimages ? "true" : "false") + (out.pass ? "" : "; " + w.str());
  return out;
}

CriterionOutcome sageev(std::uint64_t) {
  CriterionOutcome out{3, "Sageev round trip at radius 2", true, "", 0, kSageevSeconds};
  std::ostringstream w;
  for (const auto& [name, g] : std::vector<Named>{{"K2", graphs::complete(2)}, {"C5", graphs::cycle(5)}}) {
    Raag G(g);
    auto rt = sageev_round_trip(G, 2);
    w << name << ": " << rt.wallspace.walls.size() << " walls, span " << rt.span.vertex_count() << ", dual "
      << rt.dual.complex.vertex_count() << (rt.isomorphic ? " isomorphic" : " NOT isomorphic") << "; ";
    out.pass = out.pass && rt.isomorphic;
  }
  out.witness = w.str();
  return out;
}

// Oracle: largest pairwise-transverse subset by scanning all subsets.
int brute_dimension(const Wallspace& ws) {
  const int k = static_cast<int>(ws.walls.size());
  std::vector<std::uint32_t> cross(k, 0);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      if (a != b && walls_transverse(ws, a, b)) cross[a] |= 1u << b;
  int best = 0;
  for (std::uint32_t s = 1; s < (1u << k); ++s) {
    int sz = __builtin_popcount(s);
    if (sz <= best) continue;
    bool ok = true;
    for (int a = 0; a < k && ok; ++a)
      if (s >> a & 1) ok = (s & ~(1u << a) & ~cross[a]) == 0;
    if (ok) best = sz;
  }
  return best;
}

CriterionOutcome dual_dimension_check(std::uint64_t seed) {
  CriterionOutcome out{4, "dual dimension and maximal cube correspondence", true, "", 0, kDefaultSeconds};
  std::mt19937_64 rng(seed ^ 0x5a5a5a5aULL);
  int checked = 0, max_dim = 0;
  std::ostringstream w;
  for (int i = 0; i < kRandomWallspaces; ++i) {
    int points = 3 + static_cast<int>(rng() % 8);
    Wallspace ws = random_wallspace(rng(), points, kMaxWalls);
    auto dual = dual_cube_complex(ws);
    int d = dual_dimension(ws);
    int brute = brute_dimension(ws);
    auto mc = maximal_cubes(ws, dual);
    // Link enumeration grows fast with dimension, so the CAT(0) cross-check stays low-dimensional.
    FlagReport flag;
    if (d <= 3) flag = check_flag_links(dual.complex);
    ++checked;
    max_dim = std::max(max_dim, d);
    if (d != brute || d != mc.max_cube_dimension || !mc.bijective || !flag.pass) {
      if (out.pass)
        w << "wallspace " << i << ": dim " << d << " brute " << brute << " cubes " << mc.max_cube_dimension
          << (mc.bijective ? "" : " not bijective") << (flag.pass ? "" : " flag fails");
      out.pass = false;
    }
  }
  out.witness = std::to_string(checked) + " wallspaces, max dimension " + std::to_string(max_dim) +
                (out.pass ? "" : "; " + w.str());
  return out;
}

CriterionOutcome davis_metric(std::uint64_t) {
  CriterionOutcome out{5, "Davis l1 distance is twice gallery distance", true, "", 0, kDefaultSeconds};
  std::ostringstream w;
  int pairs = 0;
  for (const auto& [name, g] : std::vector<Named>{{"K2", graphs::complete(2)}, {"C5", graphs::cycle(5)}}) {
    Raag G(g);
    DavisWindow win;
    win.base_length = 5;
    auto D = davis_ball(G, win);
    std::vector<int> chambers, sources;
    for (int v = 0; v < D.complex.vertex_count(); ++v) {
      const Residue& R = D.residues[v];
      if (R.type != 0 || static_cast<int>(R.base.size()) > 3) continue;
      chambers.push_back(v);
      if (R.base.size() <= 1) sources.push_back(v);
    }
    for (int s : sources) {
      auto dist = bfs_distances(D.complex, s);
      for (int t : chambers) {
        int gd = gallery_distance(G, D.residues[s].base, D.residues[t].base);
        if (gd > 3) continue;
        ++pairs;
        if (dist[t] != 2 * gd) {
          if (out.pass)
            w << name << " " << G.format(D.residues[s].base) << " to " << G.format(D.residues[t].base) << ": l1 "
              << dist[t] << " gallery " << gd;
          out.pass = false;
        }
      }
    }
  }
  out.witness = std::to_string(pairs) + " chamber pairs" + (out.pass ? "" : "; " + w.str());
  return out;
}

CriterionOutcome blowup_iso(std::uint64_t) {
  CriterionOutcome out{6, "blow-up of bijective data is the exploded ball", true, "", 0, kBlowupIsoSeconds};
  std::ostringstream w;
  for (const auto& [name, g] :
       std::vector<Named>{{"vertex", graphs::single_vertex()}, {"K2", graphs::complete(2)}, {"C5", graphs::cycle(5)}}) {
    Raag G(g);
    BlowUpWindow win;
    win.davis.base_length = 4;
    win.fiber_bound = 6;
    win.radius = 2;
    auto Y = blowup_complex(identity_data(G), win);
    auto X = ball_Xe(G, 2, 1);
    bool iso = find_isomorphism(Y.complex, X.complex).has_value();
    w << name << " " << Y.complex.vertex_count() << (iso ? " iso; " : " NOT iso; ");
    out.pass = out.pass && iso;
  }
  out.witness = w.str();
  return out;
}

CriterionOutcome one_data_round_trip(std::uint64_t seed) {
  CriterionOutcome out{7, "one_data of the blow-up returns the data", true, "", 0, kDefaultSeconds};
  std::ostringstream w;
  long entries = 0;
  for (const auto& [name, g] :
       std::vector<Named>{{"vertex", graphs::single_vertex()}, {"K2", graphs::complete(2)}, {"C5", graphs::cycle(5)}}) {
    Raag G(g);
    for (int i = 0; i < kRandomDataSets; ++i) {
      auto data = random_blowup_data(G, seed * 1000003ULL + static_cast<std::uint64_t>(i), 3);
      BlowUpWindow win;
      win.davis.base_length = G.rank() > 2 ? 2 : 3;
      win.fiber_bound = 5;
      auto Y = blowup_complex(data, win);
      auto od = one_data(Y);
      int mism = 0;
      for (const auto& [c, t] : od.tables())
        for (auto [n, v] : t) {
          ++entries;
          if (data.value(c, n) != v) ++mism;
        }
      if (mism || od.tables().empty()) {
        if (out.pass) w << name << " data set " << i << ": " << mism << " mismatches";
        out.pass = false;
      }
    }
  }
  out.witness = "3 graphs x " + std::to_string(kRandomDataSets) + " data sets, " + std::to_string(entries) +
                " table entries" + (out.pass ? "" : "; " + w.str());
  return out;
}

CriterionOutcome qi_criterion(std::uint64_t) {
  CriterionOutcome out{8, "quasi-isometry criterion for floor-half data", true, "", 0, kDefaultSeconds};
  Raag G(graphs::complete(2));
  auto data = floor_half_data(G);
  auto lf = local_finiteness_report(data, {class_of_line(G, {}, 0), class_of_line(G, {}, 1)}, kQiWindow);
  BlowUpWindow win;
  win.davis.base_length = 2 * kQiWindow;
  win.davis.max_exponent = kQiWindow;
  win.fiber_bound = kQiWindow / 2 + 1;
  auto Y = blowup_complex(data, win);
  std::vector<Word> chambers;
  for (int a = -kQiWindow / 2; a <= kQiWindow / 2; ++a)
    for (int b = -kQiWindow / 2; b <= kQiWindow / 2; ++b) chambers.push_back(G.multiply(G.letter(0, a), G.letter(1, b)));
  auto r = chamber_section_distortion(Y, chambers, kQiLipschitz, 200);
  out.pass = lf.max_preimage == 2 && lf.density == 0 && r.lipschitz <= kQiLipschitz &&
             r.co_lipschitz <= kQiLipschitz && r.additive <= kQiAdditive && r.pairs > 0;
  out.witness = "finiteness (" + std::to_string(lf.max_preimage) + ", " + std::to_string(lf.density) + "), " +
                std::to_string(r.pairs) + " pairs, L " + fmt(r.lipschitz) + ", co-L " + fmt(r.co_lipschitz) +
                ", additive " + std::to_string(r.additive);
  return out;
}

CriterionOutcome semiconj(std::uint64_t) {
  CriterionOutcome out{9, "semiconjugacy of the 2-flipping action", true, "", 0, kSemiconjSeconds};
  auto spec = flip2_action(kSemiconjWindow);
  SemiconjugacyParams p;
  p.B = kSemiconjB;
  p.R = kSemiconjR;
  auto r = semiconjugate(spec, p);
  // f agrees with s·⌊n/2⌋ + c for a line isometry.
  bool matches = false;
  for (int s : {1, -1}) {
    int c = r.block_map.at(0);
    bool ok = true;
    for (auto [x, b] : r.block_map)
      if (b != s * static_cast<int>(std::floor(x / 2.0)) + c) ok = false;
    matches = matches || ok;
  }
  const auto& a = r.isometries.at("a");
  const auto& b = r.isometries.at("b");
  bool actions = a.translation == 0 && !a.reflection && std::abs(b.translation) == 1 && !b.reflection;
  out.pass = matches && r.equivariant && r.isometric && r.min_fiber == 2 && r.max_fiber == 2 && actions;
  out.witness = std::to_string(r.block_map.size()) + " interior points, floor oracle " + (matches ? "matches" : "differs") +
                ", equivariant " + (r.equivariant ? "yes" : "no") + ", fibers " + std::to_string(r.min_fiber) + "-" +
                std::to_string(r.max_fiber) + ", a " + std::to_string(a.translation) + (a.reflection ? "R" : "") +
                ", b " + std::to_string(b.translation) + (b.reflection ? "R" : "") + ", track weight " +
                std::to_string(r.family.min_weight);
  return out;
}

CriterionOutcome transversality(std::uint64_t) {
  CriterionOutcome out{10, "wall transversality matches adjacency", true, "", 0, kDefaultSeconds};
  Raag C5(graphs::cycle(5));
  auto iws = invariant_wallspace(C5, hull_window(C5, 2),
                                 [](const ParallelClass&) { return line_resolution(-10, 10); });
  auto rep = transversality_check(C5, iws);
  out.pass = rep.mismatches == 0 && iws.duplicates == 0 && rep.pairs > 0;
  out.witness = std::to_string(iws.ws.walls.size()) + " walls, " + std::to_string(rep.pairs) + " pairs, " +
                std::to_string(rep.transverse) + " transverse, " + std::to_string(rep.mismatches) + " mismatches" +
                (rep.witnesses.empty() ? "" : "; " + rep.witnesses.front());
  return out;
}

CriterionOutcome phi(std::uint64_t) {
  CriterionOutcome out{11, "phi injective and dense", true, "", 0, kDefaultSeconds};
  std::ostringstream w;
  for (const auto& [name, g] : std::vector<Named>{{"K2", graphs::complete(2)}, {"C5", graphs::cycle(5)}}) {
    Raag G(g);
    auto iws = invariant_wallspace(G, hull_window(G, 2), [](const ParallelClass&) { return line_resolution(-10, 10); });
    auto dual = dual_cube_complex(iws.ws);
    auto rep = phi_map(G, iws, dual);
    w << name << ": " << iws.points.size() << " points, dual " << dual.complex.vertex_count()
      << (rep.injective ? ", injective" : ", NOT injective") << ", density " << rep.density << "; ";
    out.pass = out.pass && rep.injective && rep.density <= kDensityBound;
  }
  out.witness = w.str();
  return out;
}

using CriterionFn = CriterionOutcome (*)(std::uint64_t);

const std::vector<CriterionFn>& criteria() {
  static const std::vector<CriterionFn> all = {flag_links,         rq_equivalence, sageev,       dual_dimension_check,
                                               davis_metric,       blowup_iso,     one_data_round_trip,
                                               qi_criterion,       semiconj,       transversality, phi};
  return all;
}

}  // namespace

Wallspace random_wallspace(std::uint64_t seed, int points, int max_walls) {
  std::mt19937_64 rng(seed);
  Wallspace ws;
  for (int p = 0; p < points; ++p) ws.points.push_back("p" + std::to_string(p));
  std::set<std::vector<int>> seen;
  int attempts = max_walls * 4;
  const std::uint32_t full = (1u << points) - 1;
  while (attempts-- > 0 && static_cast<int>(ws.walls.size()) < max_walls) {
    std::uint32_t m = static_cast<std::uint32_t>(rng()) & full;
    if (m == 0 || m == full) continue;
    if (m & 1u) m = ~m & full;  // canonical side avoids point 0
    std::vector<int> side;
    for (int p = 0; p < points; ++p)
      if (m >> p & 1u) side.push_back(p);
    if (seen.insert(side).second) ws.walls.push_back(side);
  }
  return ws;
}

std::vector<CriterionOutcome> run_acceptance(std::uint64_t seed, const std::vector<int>& which, int threads) {
  std::vector<int> ids = which;
  if (ids.empty())
    for (int i = 1; i <= static_cast<int>(criteria().size()); ++i) ids.push_back(i);
  std::vector<CriterionOutcome> results(ids.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < ids.size(); i = next++) {
      int id = ids[i];
      Timer t;
      if (id < 1 || id > static_cast<int>(criteria().size())) {
        results[i] = {id, "unknown criterion", false, "no such criterion", 0, 0};
        continue;
      }
      try {
        results[i] = criteria()[id - 1](seed);
      } catch (const std::exception& e) {
        results[i] = {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what(), 0, kDefaultSeconds};
      }
      results[i].seconds = t.seconds();
      if (results[i].time_limit > 0 && results[i].id != 1 && results[i].seconds > results[i].time_limit) {
        results[i].pass = false;
        results[i].witness += "; over the time limit";
      }
    }
  };
  int n = std::max(1, std::min<int>(threads, static_cast<int>(ids.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return results;
}

std::vector<Check> graph_checks(const DefiningGraph& g, std::uint64_t) {
  std::vector<Check> out;
  Raag G(g);
  auto run = [&](const std::string& name, const std::function<std::pair<bool, std::string>()>& f) {
    try {
      auto [ok, w] = f();
      out.push_back({name, ok, w});
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("error: ") + e.what()});
    }
  };
  for (int r = 1; r <= 2; ++r) {
    run("flag-links-X-r" + std::to_string(r), [&] {
      auto rep = check_flag_links(ball_X(G, r, 1).complex);
      return std::make_pair(rep.pass, std::to_string(rep.checked_vertices) + " interior vertices");
    });
    run("flag-links-Xe-r" + std::to_string(r), [&] {
      auto rep = check_flag_links(ball_Xe(G, r, 1).complex);
      return std::make_pair(rep.pass, std::to_string(rep.checked_vertices) + " interior vertices");
    });
  }
  run("sageev-round-trip-r1", [&] {
    auto rt = sageev_round_trip(G, 1);
    return std::make_pair(rt.isomorphic, std::to_string(rt.wallspace.walls.size()) + " walls");
  });
  run("blowup-identity-r2", [&] {
    BlowUpWindow win;
    win.davis.base_length = 4;
    win.fiber_bound = 6;
    win.radius = 2;
    auto Y = blowup_complex(identity_data(G), win);
    bool iso = find_isomorphism(Y.complex, ball_Xe(G, 2, 1).complex).has_value();
    return std::make_pair(iso, std::to_string(Y.complex.vertex_count()) + " vertices");
  });
  run("transversality-r1", [&] {
    auto iws = invariant_wallspace(G, hull_window(G, 1), [](const ParallelClass&) { return line_resolution(-6, 6); });
    auto rep = transversality_check(G, iws);
    return std::make_pair(rep.mismatches == 0, std::to_string(rep.pairs) + " pairs");
  });
  run("phi-r1", [&] {
    auto iws = invariant_wallspace(G, hull_window(G, 1), [](const ParallelClass&) { return line_resolution(-6, 6); });
    auto dual = dual_cube_complex(iws.ws);
    auto rep = phi_map(G, iws, dual);
    int clique_max = 0;
    for (VertexSet c : cliques(G.graph())) clique_max = std::max(clique_max, popcount(c));
    bool dim_ok = dual_dimension(iws.ws) == clique_max;
    return std::make_pair(rep.injective && rep.density <= kDensityBound && dim_ok,
                          "density " + std::to_string(rep.density) + ", dimension " +
                              std::to_string(dual_dimension(iws.ws)));
  });
  return out;
}

}  // namespace cubikit
