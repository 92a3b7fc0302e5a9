#include <gtest/gtest.h>

#include <random>

#include "cubikit/building.hpp"

using namespace cubikit;

namespace {

Word random_element(const Raag& G, std::mt19937_64& rng, int len) {
  Word w;
  for (int i = 0; i < len; ++i) w.push_back(make_letter(static_cast<int>(rng() % G.rank()), rng() % 2 ? 1 : -1));
  return G.normal_form(w);
}

}  // namespace

TEST(Gallery, Examples) {
  Raag K2(graphs::complete(2));
  EXPECT_EQ(gallery_distance(K2, Word{}, K2.parse("u^2 v")), 2);
  EXPECT_EQ(gallery_distance(K2, K2.parse("u"), K2.parse("u^5")), 1);
  Raag S(graphs::single_vertex());
  EXPECT_EQ(gallery_distance(S, Word{}, S.parse("v^5")), 1);
  EXPECT_EQ(gallery_distance(S, Word{}, Word{}), 0);
  Raag F2(graphs::discrete(2));
  EXPECT_EQ(gallery_distance(F2, Word{}, F2.parse("u^2 v^-1 u")), 3);
}

TEST(Gallery, SymmetricAndTriangle) {
  std::mt19937_64 rng(5);
  for (auto g : {graphs::cycle(5), graphs::path(3), graphs::discrete(2)}) {
    Raag G(g);
    for (int t = 0; t < 100; ++t) {
      Word a = random_element(G, rng, 5), b = random_element(G, rng, 5), c = random_element(G, rng, 5);
      int ab = gallery_distance(G, a, b);
      EXPECT_EQ(ab, gallery_distance(G, b, a));
      EXPECT_EQ(ab, static_cast<int>(w_distance(G, a, b).size()));
      EXPECT_LE(ab, gallery_distance(G, a, c) + gallery_distance(G, c, b));
      EXPECT_EQ(ab == 0, a == b);
    }
  }
}

TEST(DavisBall, ChamberDistancesAreTwiceGallery) {
  Raag K2(graphs::complete(2));
  DavisWindow w;
  w.base_length = 4;
  auto db = davis_ball(K2, w);
  EXPECT_TRUE(check_flag_links(db.complex).pass);
  int e = db.chamber_vertex(Word{});
  ASSERT_GE(e, 0);
  auto d = bfs_distances(db.complex, e);
  int checked = 0;
  for (int v = 0; v < db.complex.vertex_count(); ++v) {
    const auto& R = db.residues[v];
    if (R.type != 0 || R.base.size() > 2) continue;
    EXPECT_EQ(d[v], 2 * gallery_distance(K2, Word{}, R.base)) << K2.format(R.base);
    ++checked;
  }
  EXPECT_GT(checked, 4);
}

TEST(DavisBall, RanksRecorded) {
  Raag C5(graphs::cycle(5));
  auto db = davis_ball(C5, 2);
  for (int v = 0; v < db.complex.vertex_count(); ++v) EXPECT_EQ(db.complex.rank(v), db.residues[v].rank());
  std::vector<int> id(db.complex.vertex_count());
  for (int v = 0; v < db.complex.vertex_count(); ++v) id[v] = v;
  EXPECT_TRUE(rank_preserving_check(db.complex, id));
  int chamber = db.chamber_vertex(Word{});
  int edge = db.find(residue_of(C5, Word{}, bit(0)));
  ASSERT_GE(edge, 0);
  std::swap(id[chamber], id[edge]);
  EXPECT_FALSE(rank_preserving_check(db.complex, id));
}

TEST(Projection, Examples) {
  Raag K2(graphs::complete(2));
  Residue line = residue_of(K2, Word{}, bit(0));
  EXPECT_EQ(K2.format(proj_residue(K2, line, K2.parse("u^3 v^2"))), "u^3");
  Raag F2(graphs::discrete(2));
  Residue fl = residue_of(F2, Word{}, bit(0));
  EXPECT_TRUE(proj_residue(F2, fl, F2.parse("v u")).empty());
}

TEST(Projection, AgreesWithBruteForce) {
  std::mt19937_64 rng(9);
  for (auto g : {graphs::cycle(5), graphs::complete(2), graphs::path(3)}) {
    Raag G(g);
    auto cl = cliques(g);
    for (int t = 0; t < 40; ++t) {
      VertexSet type = cl[rng() % cl.size()];
      Residue R = residue_of(G, random_element(G, rng, 3), type);
      Word c = random_element(G, rng, 3);
      Word p = proj_residue(G, R, c);
      EXPECT_TRUE(residue_contains_chamber(G, R, p));
      EXPECT_EQ(p, proj_residue_bruteforce(G, R, c));
    }
  }
}

TEST(Residue, JsonRoundTripAndContainment) {
  Raag C5(graphs::cycle(5));
  Residue R = residue_of(C5, C5.parse("c d"), C5.graph().parse_set({"a", "b"}));
  EXPECT_EQ(residue_from_json(C5, residue_to_json(C5, R)), R);
  Residue small = residue_of(C5, C5.parse("c d a"), bit(0));
  EXPECT_TRUE(residue_contains(C5, R, small));
  EXPECT_FALSE(residue_contains(C5, small, R));
}

TEST(Parallelism, Examples) {
  Raag K2(graphs::complete(2));
  auto r = are_parallel(K2, residue_of(K2, Word{}, bit(0)), residue_of(K2, K2.parse("v^2"), bit(0)));
  EXPECT_TRUE(r.parallel);
  EXPECT_TRUE(r.by_projection);
  for (const auto& [a, b] : r.map) EXPECT_EQ(K2.multiply(a, K2.parse("v^2")), b);

  Raag C5(graphs::cycle(5));
  auto n = are_parallel(C5, residue_of(C5, Word{}, bit(0)), residue_of(C5, C5.parse("c"), bit(0)));
  EXPECT_FALSE(n.parallel);
  EXPECT_FALSE(n.by_projection);
  auto p = are_parallel(C5, residue_of(C5, Word{}, bit(0)), residue_of(C5, C5.parse("b e"), bit(0)));
  EXPECT_TRUE(p.parallel);
  EXPECT_TRUE(p.by_projection);
  // Different types are never parallel.
  EXPECT_FALSE(are_parallel(C5, residue_of(C5, Word{}, bit(0)), residue_of(C5, Word{}, bit(1))).parallel);
}

TEST(Parallelism, MutualProjectionAgrees) {
  std::mt19937_64 rng(13);
  for (auto g : {graphs::cycle(5), graphs::path(3), graphs::complete(2)}) {
    Raag G(g);
    for (int t = 0; t < 60; ++t) {
      VertexSet type = bit(static_cast<int>(rng() % G.rank()));
      Residue a = residue_of(G, random_element(G, rng, 3), type);
      Residue b = residue_of(G, random_element(G, rng, 3), type);
      auto r = are_parallel(G, a, b, 1);
      EXPECT_EQ(r.parallel, r.by_projection) << residue_name(G, a) << " " << residue_name(G, b);
    }
  }
}

TEST(ParallelSet, Type) {
  Raag C5(graphs::cycle(5));
  auto P = parallel_set(C5, residue_of(C5, C5.parse("c"), bit(0)));
  EXPECT_EQ(C5.graph().format_set(P.type), "{a,b,e}");
}

TEST(ProductDecomposition, CoordinatesRoundTrip) {
  Raag K2(graphs::complete(2));
  Residue R = residue_of(K2, Word{}, K2.graph().all_vertices());
  auto pd = product_decomposition(K2, R);
  ASSERT_EQ(pd.factors.size(), 2u);
  EXPECT_EQ(pd.directions, (std::vector<int>{0, 1}));
  Word c = K2.parse("u^2 v^-1");
  auto coords = product_coordinates(K2, R, c);
  EXPECT_EQ(coords, (std::vector<int>{2, -1}));
  EXPECT_EQ(product_chamber(K2, R, coords), c);

  Raag C5(graphs::cycle(5));
  Residue S = residue_of(C5, C5.parse("d"), C5.graph().parse_set({"a", "b"}));
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j) EXPECT_EQ(product_coordinates(C5, S, product_chamber(C5, S, {i, j})), (std::vector<int>{i, j}));
}
