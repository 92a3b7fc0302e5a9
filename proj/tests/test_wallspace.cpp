#include <gtest/gtest.h>

#include <random>
#include <set>

#include "cubikit/acceptance.hpp"
#include "cubikit/isomorphism.hpp"
#include "cubikit/wallspace.hpp"

using namespace cubikit;

namespace {

Wallspace make(int points, std::vector<std::vector<int>> walls) {
  Wallspace ws;
  for (int p = 0; p < points; ++p) ws.points.push_back("p" + std::to_string(p));
  ws.walls = std::move(walls);
  return ws;
}

// Orientations choosing pairwise-intersecting halfspaces, by trying all 2^n choices.
int brute_zero_cubes(const Wallspace& ws) {
  auto mask = ws.side_mask();
  const int n = static_cast<int>(ws.walls.size());
  const int m = static_cast<int>(ws.points.size());
  int count = 0;
  for (std::uint32_t o = 0; o < (1u << n); ++o) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = a + 1; b < n && ok; ++b) {
        bool meet = false;
        for (int p = 0; p < m && !meet; ++p)
          meet = (mask[a][p] == ((o >> a) & 1)) && (mask[b][p] == ((o >> b) & 1));
        ok = meet;
      }
    count += ok;
  }
  return count;
}

const Resolver kLines = [](const ParallelClass&) { return line_resolution(-10, 10); };

}  // namespace

TEST(Dual, Tripod) {
  auto ws = make(3, {{0}, {1}, {2}});
  EXPECT_FALSE(walls_transverse(ws, 0, 1));
  auto d = dual_cube_complex(ws);
  EXPECT_EQ(d.complex.vertex_count(), 4);
  EXPECT_EQ(d.complex.edge_count(), 3);
  EXPECT_EQ(d.complex.square_count(), 0);
  EXPECT_EQ(dual_dimension(ws), 1);
}

TEST(Dual, Square) {
  auto ws = make(4, {{0, 1}, {0, 2}});
  EXPECT_TRUE(walls_transverse(ws, 0, 1));
  auto d = dual_cube_complex(ws);
  EXPECT_EQ(d.complex.vertex_count(), 4);
  EXPECT_EQ(d.complex.square_count(), 1);
  EXPECT_EQ(dual_dimension(ws), 2);
  for (int p = 0; p < 4; ++p) EXPECT_GE(d.point_vertex[p], 0);
}

TEST(Dual, SingleWall) {
  auto d = dual_cube_complex(make(2, {{0}}));
  EXPECT_EQ(d.complex.vertex_count(), 2);
  EXPECT_EQ(d.complex.edge_count(), 1);
}

TEST(Dual, Hypercube) {
  auto ws = make(8, {{0, 1, 2, 3}, {0, 1, 4, 5}, {0, 2, 4, 6}});
  auto d = dual_cube_complex(ws);
  EXPECT_EQ(d.complex.vertex_count(), 8);
  EXPECT_EQ(d.complex.edge_count(), 12);
  EXPECT_EQ(d.complex.square_count(), 6);
  EXPECT_EQ(dual_dimension(ws), 3);
  auto mc = maximal_cubes(ws, d);
  EXPECT_EQ(mc.maximal_cubes, 1);
  EXPECT_EQ(mc.max_cube_dimension, 3);
  EXPECT_TRUE(mc.bijective);
  EXPECT_TRUE(check_flag_links(d.complex).pass);
}

TEST(Dual, ZeroCubesMatchBruteForce) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto ws = random_wallspace(seed, 6, 9);
    auto d = dual_cube_complex(ws);
    EXPECT_EQ(d.complex.vertex_count(), brute_zero_cubes(ws)) << ws.to_json();
    EXPECT_TRUE(maximal_cubes(ws, d).bijective);
  }
}

TEST(Wallspace, Validation) {
  EXPECT_THROW(make(3, {{0}, {0}}).validate(), WallspaceError);
  EXPECT_THROW(make(3, {{0}, {1, 2}}).validate(), WallspaceError);  // complementary sides
  EXPECT_THROW(make(3, {{}}).validate(), WallspaceError);
  EXPECT_THROW(make(3, {{0, 1, 2}}).validate(), WallspaceError);
  EXPECT_THROW(make(3, {{5}}).validate(), WallspaceError);
  EXPECT_NO_THROW(make(3, {{0}, {1}}).validate());
}

TEST(Wallspace, JsonRoundTrip) {
  auto ws = make(4, {{0, 1}, {0, 2}});
  ws.tags = {"x", "y"};
  auto back = Wallspace::from_json(ws.to_json());
  EXPECT_EQ(back.points, ws.points);
  EXPECT_EQ(back.walls, ws.walls);
  EXPECT_EQ(back.tag(1), "y");
  EXPECT_THROW(Wallspace::from_json("{\"points\": [\"a\"]"), WallspaceError);
}

TEST(Sageev, RoundTripOnRaagBalls) {
  for (auto g : {graphs::complete(2), graphs::path(3)}) {
    auto r = sageev_round_trip(Raag(g), 1);
    EXPECT_TRUE(r.isomorphic);
    EXPECT_EQ(r.dual.complex.vertex_count(), r.span.vertex_count());
  }
}

TEST(InvariantWallspace, TransversalityMatchesExtensionGraph) {
  Raag C5(graphs::cycle(5));
  auto iws = invariant_wallspace(C5, hull_window(C5, 1), kLines);
  EXPECT_EQ(iws.duplicates, 0);
  auto rep = transversality_check(C5, iws);
  EXPECT_GT(rep.pairs, 0);
  EXPECT_GT(rep.transverse, 0);
  EXPECT_EQ(rep.mismatches, 0);
}

TEST(InvariantWallspace, PhiInjective) {
  for (auto g : {graphs::complete(2), graphs::path(3)}) {
    Raag G(g);
    auto iws = invariant_wallspace(G, hull_window(G, 1), kLines);
    auto dual = dual_cube_complex(iws.ws);
    auto phi = phi_map(G, iws, dual);
    EXPECT_TRUE(phi.injective);
    EXPECT_LE(phi.density, 2);
    int top = 0;
    for (VertexSet c : cliques(g)) top = std::max(top, popcount(c));
    EXPECT_EQ(dual_dimension(iws.ws), top);
  }
}

TEST(InvariantWallspace, FlatEmbeddingAndSeparation) {
  Raag K2(graphs::complete(2));
  auto iws = invariant_wallspace(K2, hull_window(K2, 2), kLines);
  auto dual = dual_cube_complex(iws.ws);
  auto fe = branched_flat_embed(K2, iws, dual, flat_through(K2, {}, K2.graph().all_vertices()));
  EXPECT_TRUE(fe.valid);
  EXPECT_TRUE(fe.convex);
  EXPECT_EQ(static_cast<int>(fe.vertices.size()), fe.expected);

  auto u_line = flat_through(K2, {}, bit(0));
  EXPECT_TRUE(flats_separated(K2, iws, u_line, flat_through(K2, K2.parse("v^2"), bit(0))));
  EXPECT_FALSE(flats_separated(K2, iws, u_line, flat_through(K2, {}, bit(1))));
}

TEST(InvariantWallspace, KWalls) {
  Raag C5(graphs::cycle(5));
  auto iws = invariant_wallspace(C5, hull_window(C5, 1), kLines);
  auto k = k_walls_check(C5, iws, Word{}, C5.graph().parse_set({"a", "b"}));
  EXPECT_TRUE(k.ok);
  EXPECT_GT(k.classes_inside, 0);
}

TEST(InvariantWallspace, FlippingResolutionStaysInjective) {
  SemiconjugacyParams p;
  p.B = 8;
  p.R = 6;
  auto res = resolution_from(semiconjugate(flip2_action(64), p));
  std::set<int> tips;
  for (int x = -10; x <= 10; ++x) EXPECT_TRUE(tips.insert(res.tip_of(x)).second) << x;
  Raag K2(graphs::complete(2));
  auto iws = invariant_wallspace(K2, hull_window(K2, 1), [&](const ParallelClass&) { return res; });
  auto dual = dual_cube_complex(iws.ws);
  EXPECT_TRUE(phi_map(K2, iws, dual).injective);
}
