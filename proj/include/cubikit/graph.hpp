#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cubikit {

// Vertex subsets of a defining graph are bitmasks over declaration indices.
using VertexSet = std::uint64_t;

inline constexpr int kMaxGraphVertices = 64;

inline VertexSet bit(int v) { return VertexSet{1} << v; }
inline bool contains(VertexSet s, int v) { return (s >> v) & 1u; }
inline int popcount(VertexSet s) { return __builtin_popcountll(s); }
std::vector<int> members(VertexSet s);

class GraphError : public std::runtime_error {
 public:
  enum class Kind {
    MalformedJson,
    DuplicateVertex,
    UnknownEndpoint,
    SelfLoop,
    DuplicateEdge,
    UnknownVertex,
    TooManyVertices,
  };
  GraphError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class DefiningGraph {
 public:
  DefiningGraph() = default;
  DefiningGraph(std::vector<std::string> vertices,
                const std::vector<std::pair<std::string, std::string>>& edges);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int v) const { return labels_.at(v); }
  const std::vector<std::string>& labels() const { return labels_; }
  int index_of(std::string_view label) const;
  bool has_vertex(std::string_view label) const;

  bool adjacent(int a, int b) const { return contains(adj_.at(a), b); }
  VertexSet neighbors(int v) const { return adj_.at(v); }
  VertexSet all_vertices() const;
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  bool is_clique(VertexSet s) const;
  std::string format_set(VertexSet s) const;  // "{a,b}"
  VertexSet parse_set(const std::vector<std::string>& labels) const;

  bool operator==(const DefiningGraph& o) const { return labels_ == o.labels_ && adj_ == o.adj_; }

 private:
  std::vector<std::string> labels_;
  std::vector<VertexSet> adj_;
  std::vector<std::pair<int, int>> edges_;
};

DefiningGraph parse_graph(std::string_view text);
std::string graph_to_json(const DefiningGraph& g);

// All cliques, the empty one first, ordered by size then by member list.
std::vector<VertexSet> cliques(const DefiningGraph& g);

VertexSet orthogonal_complement(const DefiningGraph& g, VertexSet J);

// Connected components of the complement graph, ordered by least member.
std::vector<VertexSet> join_decompose(const DefiningGraph& g);

// The join of the induced subgraphs on the factors, as a graph over the same labels.
DefiningGraph rejoin(const DefiningGraph& g, const std::vector<VertexSet>& factors);

namespace graphs {
DefiningGraph single_vertex();
DefiningGraph complete(int n);  // labels u,v for n=2, otherwise a,b,c,...
DefiningGraph discrete(int n);  // labels u,v for n=2
DefiningGraph path(int n);      // a-b-c-...
DefiningGraph cycle(int n);     // a-b-...-a
}  // namespace graphs

}  // namespace cubikit
