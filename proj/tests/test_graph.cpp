#include <gtest/gtest.h>

#include <random>
#include <set>

#include "cubikit/graph.hpp"

using namespace cubikit;

namespace {

const char* kPentagon =
    R"({"vertices":["a","b","c","d","e"],"edges":[["a","b"],["b","c"],["c","d"],["d","e"],["e","a"]]})";

GraphError::Kind parse_error_kind(const std::string& text) {
  try {
    parse_graph(text);
  } catch (const GraphError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for " << text;
  return GraphError::Kind::MalformedJson;
}

DefiningGraph random_graph(std::mt19937_64& rng, int n) {
  std::vector<std::string> v;
  for (int i = 0; i < n; ++i) v.push_back(std::string(1, static_cast<char>('a' + i)));
  std::vector<std::pair<std::string, std::string>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng() % 2) e.push_back({v[i], v[j]});
  return DefiningGraph(v, e);
}

}  // namespace

TEST(ParseGraph, Pentagon) {
  auto g = parse_graph(kPentagon);
  EXPECT_EQ(g.size(), 5);
  EXPECT_EQ(g.edges().size(), 5u);
  EXPECT_EQ(g.label(0), "a");
  EXPECT_TRUE(g.adjacent(g.index_of("a"), g.index_of("e")));
  EXPECT_FALSE(g.adjacent(g.index_of("a"), g.index_of("c")));
}

TEST(ParseGraph, SingleVertex) {
  auto g = parse_graph(R"({"vertices":["v"],"edges":[]})");
  EXPECT_EQ(g.size(), 1);
  EXPECT_TRUE(g.edges().empty());
}

TEST(ParseGraph, DistinctErrors) {
  EXPECT_EQ(parse_error_kind(R"({"vertices":["a"],"edges":[["a","a"]]})"), GraphError::Kind::SelfLoop);
  EXPECT_EQ(parse_error_kind(R"({"vertices":["a","a"]})"), GraphError::Kind::DuplicateVertex);
  EXPECT_EQ(parse_error_kind(R"({"vertices":["a"],"edges":[["a","b"]]})"), GraphError::Kind::UnknownEndpoint);
  EXPECT_EQ(parse_error_kind(R"({"vertices":["a",)"), GraphError::Kind::MalformedJson);
}

TEST(ParseGraph, JsonRoundTrip) {
  auto g = parse_graph(kPentagon);
  EXPECT_EQ(parse_graph(graph_to_json(g)), g);
}

TEST(Cliques, Counts) {
  EXPECT_EQ(cliques(parse_graph(kPentagon)).size(), 11u);
  auto k2 = cliques(graphs::complete(2));
  ASSERT_EQ(k2.size(), 4u);
  EXPECT_EQ(k2[0], 0u);
  EXPECT_EQ(k2[3], 3u);
  EXPECT_EQ(cliques(graphs::discrete(2)).size(), 3u);
}

TEST(Cliques, SortedBySizeThenMembers) {
  auto cl = cliques(parse_graph(kPentagon));
  for (size_t i = 1; i < cl.size(); ++i) EXPECT_LE(popcount(cl[i - 1]), popcount(cl[i]));
  EXPECT_EQ(cl.front(), 0u);
}

TEST(OrthogonalComplement, Examples) {
  auto p = parse_graph(kPentagon);
  EXPECT_EQ(p.format_set(orthogonal_complement(p, p.parse_set({"a"}))), "{b,e}");
  EXPECT_EQ(orthogonal_complement(p, p.parse_set({"a", "b"})), 0u);
  auto k2 = graphs::complete(2);
  EXPECT_EQ(k2.format_set(orthogonal_complement(k2, k2.parse_set({"u"}))), "{v}");
}

TEST(JoinDecompose, Examples) {
  EXPECT_EQ(join_decompose(parse_graph(kPentagon)).size(), 1u);
  EXPECT_EQ(join_decompose(graphs::complete(2)).size(), 2u);
  auto c4 = join_decompose(graphs::cycle(4));
  ASSERT_EQ(c4.size(), 2u);
  for (VertexSet f : c4) EXPECT_EQ(popcount(f), 2);
}

TEST(GraphProperties, RandomGraphs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    auto g = random_graph(rng, 1 + static_cast<int>(rng() % 7));
    auto cl = cliques(g);
    std::set<VertexSet> cs(cl.begin(), cl.end());
    // Downward closed, and exactly the pairwise-adjacent subsets.
    for (VertexSet c : cl)
      for (int v : members(c)) EXPECT_TRUE(cs.count(c & ~bit(v)));
    int n = g.size();
    for (VertexSet s = 0; s < (VertexSet{1} << n); ++s) EXPECT_EQ(cs.count(s) == 1, g.is_clique(s));
    // Re-joining the factors gives back the graph.
    EXPECT_EQ(rejoin(g, join_decompose(g)), g);
    // Antitone complement.
    VertexSet j1 = rng() & g.all_vertices();
    VertexSet j2 = j1 | (rng() & g.all_vertices());
    VertexSet c1 = orthogonal_complement(g, j1), c2 = orthogonal_complement(g, j2);
    EXPECT_EQ(c2 & ~c1, 0u);
    EXPECT_EQ(c1 & j1, 0u);
  }
}
