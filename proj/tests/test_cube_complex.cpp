#include <gtest/gtest.h>

#include <random>

#include "cubikit/cube_complex.hpp"
#include "cubikit/isomorphism.hpp"
#include "cubikit/raag.hpp"

using namespace cubikit;

namespace {

// Grid [0,m]x[0,n] with every vertex interior.
CubeComplex grid(int m, int n) {
  CubeComplex c;
  auto name = [](int i, int j) { return std::to_string(i) + "," + std::to_string(j); };
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= n; ++j) c.add_vertex(name(i, j));
  auto id = [&](int i, int j) { return c.find_vertex(name(i, j)); };
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= n; ++j) {
      if (i < m) c.add_edge(id(i, j), id(i + 1, j), "x");
      if (j < n) c.add_edge(id(i, j), id(i, j + 1), "y");
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) c.add_square(id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
  return c;
}

std::vector<int> all_vertices(const CubeComplex& c) {
  std::vector<int> v(c.vertex_count());
  for (int i = 0; i < c.vertex_count(); ++i) v[i] = i;
  return v;
}

}  // namespace

TEST(FlagLinks, OpenCornerFails) {
  CubeComplex c;
  int o = c.add_vertex("o"), x = c.add_vertex("x"), y = c.add_vertex("y"), z = c.add_vertex("z");
  int xy = c.add_vertex("xy"), xz = c.add_vertex("xz"), yz = c.add_vertex("yz");
  c.add_edge(o, x, "x");
  c.add_edge(o, y, "y");
  c.add_edge(o, z, "z");
  c.add_edge(x, xy, "y");
  c.add_edge(y, xy, "x");
  c.add_edge(x, xz, "z");
  c.add_edge(z, xz, "x");
  c.add_edge(y, yz, "z");
  c.add_edge(z, yz, "y");
  c.add_square(o, x, xy, y);
  c.add_square(o, x, xz, z);
  c.add_square(o, y, yz, z);
  auto rep = check_flag_links(c);
  EXPECT_FALSE(rep.pass);
  ASSERT_FALSE(rep.failures.empty());
  EXPECT_EQ(rep.failures.front().vertex, o);
}

TEST(FlagLinks, Balls) {
  EXPECT_TRUE(check_flag_links(ball_X(Raag(graphs::complete(2)), 2).complex).pass);
  EXPECT_TRUE(check_flag_links(ball_X(Raag(graphs::cycle(5)), 2).complex).pass);
  EXPECT_TRUE(check_flag_links(grid(3, 3)).pass);
}

TEST(Hyperplanes, Counts) {
  EXPECT_EQ(HyperplaneSet(grid(1, 1)).walls().size(), 2u);
  EXPECT_EQ(HyperplaneSet(grid(2, 1)).walls().size(), 3u);
  // Interior of the radius-2 ball of X(K2) is the l1 ball of radius 1: two lines each way.
  EXPECT_EQ(HyperplaneSet(ball_X(Raag(graphs::complete(2)), 2).complex).walls().size(), 4u);
}

TEST(L1Distance, Examples) {
  auto sq = grid(1, 1);
  EXPECT_EQ(l1_distance(sq, sq.find_vertex("0,0"), sq.find_vertex("1,1")), 2);
  auto g = grid(3, 3);
  EXPECT_EQ(l1_distance(g, g.find_vertex("0,0"), g.find_vertex("2,1")), 3);
}

TEST(L1Distance, EqualsSeparatingHyperplanes) {
  for (auto gr : {graphs::complete(2), graphs::cycle(5), graphs::path(3), graphs::discrete(2)}) {
    Raag G(gr);
    auto ball = ball_X(G, 3);
    HyperplaneSet hs(ball.complex);
    auto in = ball.complex.interior_vertices();
    for (int x : in) {
      auto d = bfs_distances(ball.complex, x);
      for (int y : in) EXPECT_EQ(l1_distance(ball.complex, x, y), hs.separating_count(x, y));
      (void)d;
    }
  }
}

TEST(Convexity, Examples) {
  auto sq = grid(1, 1);
  std::vector<int> three = {sq.find_vertex("0,0"), sq.find_vertex("1,0"), sq.find_vertex("0,1")};
  EXPECT_FALSE(is_convex(sq, three));
  EXPECT_FALSE(is_convex_local(sq, three));
  EXPECT_TRUE(is_convex(sq, all_vertices(sq)));
}

TEST(Convexity, HalfspacesAndCarriers) {
  for (auto gr : {graphs::complete(2), graphs::cycle(5), graphs::path(3)}) {
    Raag G(gr);
    auto ball = ball_X(G, 3);
    HyperplaneSet hs(ball.complex);
    for (const auto& h : hs.walls()) {
      EXPECT_TRUE(is_convex(ball.complex, h.side_a));
      EXPECT_TRUE(is_convex(ball.complex, h.side_b));
      EXPECT_TRUE(is_convex(ball.complex, h.carrier));
      EXPECT_EQ(is_convex_local(ball.complex, h.side_a), true);
    }
  }
}

TEST(Convexity, HullIsSmallestConvexSuperset) {
  auto g = grid(3, 3);
  std::vector<int> s = {g.find_vertex("0,0"), g.find_vertex("2,1")};
  auto h = convex_hull(g, s);
  EXPECT_EQ(h.size(), 6u);
  EXPECT_TRUE(is_convex(g, h));
}

TEST(RestrictionQuotient, Examples) {
  auto g = grid(2, 1);
  HyperplaneSet hs(g);
  int long_wall = -1;
  for (size_t w = 0; w < hs.walls().size(); ++w)
    if (hs.walls()[w].edges.size() == 3) long_wall = static_cast<int>(w);
  ASSERT_GE(long_wall, 0);
  auto q = restriction_quotient(hs, {long_wall});
  EXPECT_EQ(q.target.vertex_count(), 2);
  EXPECT_EQ(q.target.edge_count(), 1);
  auto empty = restriction_quotient(hs, {});
  EXPECT_EQ(empty.target.vertex_count(), 1);
  auto full = restriction_quotient(hs, {0, 1, 2});
  EXPECT_TRUE(find_isomorphism(full.target, g, IsoOptions{false, false, false, {}}).has_value());
}

TEST(RestrictionQuotient, FiveConditionsAgreeOnConstructedQuotients) {
  std::mt19937_64 rng(11);
  for (auto gr : {graphs::complete(2), graphs::cycle(5), graphs::path(3), graphs::discrete(2)}) {
    Raag G(gr);
    auto ball = ball_X(G, 3);
    HyperplaneSet hs(ball.complex);
    for (int t = 0; t < 5; ++t) {
      std::vector<int> K;
      for (size_t k = 0; k < hs.walls().size(); ++k)
        if (rng() % 2) K.push_back(static_cast<int>(k));
      auto q = restriction_quotient(hs, K);
      auto r = verify_rq_characterization(ball.complex, q.target, q.vertex_map, rng(), 20);
      EXPECT_TRUE(r.agree());
      EXPECT_TRUE(r.vertex_preimages_convex && r.point_preimages_convex && r.convex_preimages_convex &&
                  r.hyperplane_preimages && r.matches_rebuilt_quotient);
    }
  }
}

TEST(RestrictionQuotient, IdentityAndFolding) {
  auto g = grid(2, 2);
  auto id = all_vertices(g);
  auto r = verify_rq_characterization(g, g, id);
  EXPECT_TRUE(r.vertex_preimages_convex && r.hyperplane_preimages && r.matches_rebuilt_quotient);
  auto ex = folding_example();
  auto f = verify_rq_characterization(ex.source, ex.target, ex.map);
  EXPECT_FALSE(f.vertex_preimages_convex);
  EXPECT_FALSE(f.hyperplane_preimages);
}

TEST(RestrictionQuotient, Idempotent) {
  Raag G(graphs::cycle(5));
  auto ball = ball_X(G, 3);
  HyperplaneSet hs(ball.complex);
  std::vector<int> K = {0, 2, 4};
  auto q1 = restriction_quotient(hs, K);
  HyperplaneSet ht(q1.target);
  std::vector<int> all;
  for (size_t k = 0; k < ht.walls().size(); ++k) all.push_back(static_cast<int>(k));
  auto q2 = restriction_quotient(ht, all);
  EXPECT_TRUE(find_isomorphism(q2.target, q1.target, IsoOptions{false, false, false, {}}).has_value());
}

TEST(ComplexJson, RoundTrip) {
  auto c = ball_X(Raag(graphs::cycle(5)), 2).complex;
  auto back = CubeComplex::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_NE(c.to_dot().find("graph"), std::string::npos);
}
