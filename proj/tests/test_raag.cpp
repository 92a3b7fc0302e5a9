#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "cubikit/raag.hpp"

using namespace cubikit;

namespace {

Word random_word(std::mt19937_64& rng, int rank, int len) {
  Word w;
  for (int i = 0; i < len; ++i) w.push_back(make_letter(static_cast<int>(rng() % rank), rng() % 2 ? 1 : -1));
  return w;
}

std::vector<int> sphere_sizes(const RaagBall& b) {
  std::vector<int> s(b.radius + 1, 0);
  for (const auto& w : b.elements) ++s.at(w.size());
  return s;
}

}  // namespace

TEST(NormalForm, Examples) {
  Raag k2(graphs::complete(2));
  EXPECT_EQ(k2.format(k2.parse("u v u^-1")), "v");
  Raag f2(graphs::discrete(2));
  EXPECT_EQ(f2.format(f2.parse("u v u^-1")), "u v u^-1");
  Raag c5(graphs::cycle(5));
  EXPECT_EQ(c5.format(c5.parse("b a")), "a b");
  EXPECT_THROW(c5.parse("z"), WordError);
}

TEST(NormalForm, IdempotentAndMultiplicative) {
  std::mt19937_64 rng(3);
  for (auto g : {graphs::cycle(5), graphs::path(3), graphs::discrete(2), graphs::complete(3)}) {
    Raag G(g);
    for (int i = 0; i < 200; ++i) {
      Word a = random_word(rng, G.rank(), 6), b = random_word(rng, G.rank(), 6);
      Word na = G.normal_form(a), nb = G.normal_form(b);
      EXPECT_EQ(G.normal_form(na), na);
      Word ab = a;
      ab.insert(ab.end(), b.begin(), b.end());
      EXPECT_EQ(G.normal_form(ab), G.multiply(na, nb));
      EXPECT_TRUE(G.multiply(na, G.inverse(na)).empty());
    }
  }
}

TEST(BallX, SphereSizes) {
  EXPECT_EQ(sphere_sizes(ball_X(Raag(graphs::complete(2)), 2)), (std::vector<int>{1, 4, 8}));
  EXPECT_EQ(sphere_sizes(ball_X(Raag(graphs::discrete(2)), 3)), (std::vector<int>{1, 4, 12, 36}));
  EXPECT_EQ(ball_X(Raag(graphs::cycle(5)), 1).complex.vertex_count(), 11);
}

TEST(BallX, CountMatchesRawWordEnumeration) {
  for (auto g : {graphs::cycle(5), graphs::path(3), graphs::complete(2)}) {
    Raag G(g);
    for (int R = 1; R <= 4; ++R) {
      // Independent count: distinct elements reached by raw words of length <= R.
      std::set<Word> seen{Word{}};
      std::vector<Word> frontier{Word{}};
      for (int step = 0; step < R; ++step) {
        std::vector<Word> next;
        for (const auto& w : frontier)
          for (int l = 0; l < 2 * G.rank(); ++l) {
            Word x = w;
            x.push_back(static_cast<Letter>(l));
            x = G.normal_form(x);
            if (seen.insert(x).second) next.push_back(x);
          }
        frontier = next;
      }
      EXPECT_EQ(ball_X(G, R).complex.vertex_count(), static_cast<int>(seen.size())) << g.size() << " R=" << R;
    }
  }
}

TEST(BallX, BoundaryAndSquares) {
  Raag G(graphs::complete(2));
  auto b = ball_X(G, 2, 1);
  int boundary = 0;
  for (int v = 0; v < b.complex.vertex_count(); ++v) boundary += b.complex.boundary(v);
  EXPECT_EQ(boundary, 8);
  EXPECT_EQ(b.complex.square_count(), 4);
}

TEST(BallXe, SingleVertexLineWithWhiskers) {
  Raag G(graphs::single_vertex());
  auto b = ball_Xe(G, 5, 1);
  int line = 0, whiskers = 0;
  for (int v = 0; v < b.complex.vertex_count(); ++v) (b.points[v].clique ? line : whiskers)++;
  EXPECT_GT(line, 1);
  // Each whisker vertex (n, {}) hangs off exactly one line vertex (n, {v}).
  for (int v = 0; v < b.complex.vertex_count(); ++v) {
    if (b.points[v].clique) continue;
    ASSERT_EQ(b.complex.incident(v).size(), 1u);
    int u = b.complex.incident(v).front().first;
    EXPECT_EQ(b.points[u].g, b.points[v].g);
  }
  EXPECT_TRUE(check_flag_links(b.complex).pass);
}

TEST(BallXe, HorizontalCollapseGivesGroupElements) {
  for (auto g : {graphs::complete(2), graphs::cycle(5)}) {
    Raag G(g);
    auto e = ball_Xe(G, 3);
    std::set<Word> elements;
    for (const auto& p : e.points) elements.insert(p.g);
    auto x = ball_X(G, 3);
    for (const auto& w : elements) EXPECT_GE(x.find(w), 0);
    EXPECT_TRUE(check_flag_links(e.complex).pass);
  }
}

TEST(StandardFlats, Counts) {
  Raag C5(graphs::cycle(5));
  auto ball = ball_X(C5, 2);
  int through_e = 0;
  for (const auto& f : standard_flats(C5, ball))
    if (flat_contains_element(C5, f, Word{})) ++through_e;
  // Positive-dimensional flats only: the 5 vertices and 5 edges of the pentagon.
  EXPECT_EQ(through_e, 10);
  Raag K2(graphs::complete(2));
  auto kb = ball_X(K2, 2);
  int lines = 0, twoflats = 0;
  for (const auto& f : standard_flats(K2, kb)) {
    lines += popcount(f.clique) == 1;
    twoflats += popcount(f.clique) == 2;
  }
  // u-lines v^k<u> and v-lines u^k<v> for |k| <= 2.
  EXPECT_EQ(lines, 10);
  EXPECT_EQ(twoflats, 1);
}

TEST(Projection, Examples) {
  Raag K2(graphs::complete(2));
  auto p = project_to_geodesic(K2, K2.parse("u^2 v^3"), flat_through(K2, {}, 1));
  EXPECT_EQ(K2.format(p.point), "u^2");
  EXPECT_EQ(p.height, 2);
  Raag F2(graphs::discrete(2));
  EXPECT_EQ(F2.format(project_to_geodesic(F2, F2.parse("u v u"), flat_through(F2, {}, 1)).point), "u");
  Word on = K2.parse("u^-3");
  EXPECT_EQ(project_to_geodesic(K2, on, flat_through(K2, {}, 1)).point, on);
}

TEST(VLevels, PartitionWithUnitSpacing) {
  for (auto g : {graphs::complete(2), graphs::cycle(5), graphs::discrete(2)}) {
    Raag G(g);
    auto ball = ball_X(G, 3);
    for (int v = 0; v < G.rank(); ++v) {
      auto levels = v_levels(G, class_of_line(G, {}, v), ball);
      std::map<int, int> height_of;
      size_t total = 0;
      for (const auto& L : levels) {
        total += L.vertices.size();
        for (int x : L.vertices) EXPECT_TRUE(height_of.emplace(x, L.height).second);
      }
      EXPECT_EQ(total, ball.elements.size());
      // Adjacent vertices sit in equal or consecutive levels.
      for (int e = 0; e < ball.complex.edge_count(); ++e) {
        auto a = height_of.find(ball.complex.edge(e).u), b = height_of.find(ball.complex.edge(e).v);
        if (a != height_of.end() && b != height_of.end()) EXPECT_LE(std::abs(a->second - b->second), 1);
      }
    }
  }
  Raag K2(graphs::complete(2));
  auto ball = ball_X(K2, 3);
  for (const auto& L : v_levels(K2, class_of_line(K2, {}, 0), ball))
    for (int x : L.vertices) EXPECT_EQ(K2.exponent_sum(ball.elements[x], 0), L.height);
}

TEST(ExtensionAdjacency, Examples) {
  Raag K2(graphs::complete(2));
  EXPECT_TRUE(extension_adjacent(K2, class_of_line(K2, {}, 0), class_of_line(K2, {}, 1)));
  Raag C5(graphs::cycle(5));
  const int a = 0, b = 1, c = 2;
  EXPECT_FALSE(extension_adjacent(C5, class_of_line(C5, {}, a), class_of_line(C5, {}, c)));
  EXPECT_TRUE(extension_adjacent(C5, class_of_line(C5, {}, a), class_of_line(C5, {}, b)));
  EXPECT_FALSE(extension_adjacent(C5, class_of_line(C5, {}, a), class_of_line(C5, C5.parse("d"), b)));
}

TEST(ExtensionAdjacency, AgreesWithBallScan) {
  Raag C5(graphs::cycle(5));
  auto ball = ball_X(C5, 4);
  std::set<ParallelClass> classes;
  for (const auto& w : ball_X(C5, 1).elements)
    for (int v = 0; v < 5; ++v) classes.insert(class_of_line(C5, w, v));
  for (const auto& x : classes)
    for (const auto& y : classes)
      EXPECT_EQ(extension_adjacent(C5, x, y), extension_adjacent_in_ball(C5, x, y, ball));
}

TEST(ParallelClass, IdRoundTrip) {
  Raag C5(graphs::cycle(5));
  for (const auto& w : ball_X(C5, 2).elements)
    for (int v = 0; v < 5; ++v) {
      auto c = class_of_line(C5, w, v);
      EXPECT_EQ(parse_class_id(C5, class_id(C5, c)), c);
    }
}
