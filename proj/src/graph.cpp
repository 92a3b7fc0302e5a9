#include "cubikit/graph.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"

namespace cubikit {

std::vector<int> members(VertexSet s) {
  std::vector<int> out;
  while (s) {
    int v = __builtin_ctzll(s);
    out.push_back(v);
    s &= s - 1;
  }
  return out;
}

DefiningGraph::DefiningGraph(std::vector<std::string> vertices,
                             const std::vector<std::pair<std::string, std::string>>& edges)
    : labels_(std::move(vertices)) {
  if (labels_.size() > static_cast<size_t>(kMaxGraphVertices)) {
    throw GraphError(GraphError::Kind::TooManyVertices,
                     "graphs are limited to " + std::to_string(kMaxGraphVertices) + " vertices");
  }
  for (size_t i = 0; i < labels_.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (labels_[i] == labels_[j]) {
        throw GraphError(GraphError::Kind::DuplicateVertex, "duplicate vertex '" + labels_[i] + "'");
      }
    }
  }
  adj_.assign(labels_.size(), 0);
  for (const auto& [a, b] : edges) {
    if (!has_vertex(a) || !has_vertex(b)) {
      throw GraphError(GraphError::Kind::UnknownEndpoint,
                       "edge [" + a + "," + b + "] has an undeclared endpoint");
    }
    int i = index_of(a), j = index_of(b);
    if (i == j) throw GraphError(GraphError::Kind::SelfLoop, "self-loop at '" + a + "'");
    if (contains(adj_[i], j)) {
      throw GraphError(GraphError::Kind::DuplicateEdge, "duplicate edge [" + a + "," + b + "]");
    }
    adj_[i] |= bit(j);
    adj_[j] |= bit(i);
    edges_.emplace_back(std::min(i, j), std::max(i, j));
  }
  std::sort(edges_.begin(), edges_.end());
}

int DefiningGraph::index_of(std::string_view label) const {
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<int>(i);
  }
  throw GraphError(GraphError::Kind::UnknownVertex, "unknown vertex '" + std::string(label) + "'");
}

bool DefiningGraph::has_vertex(std::string_view label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

VertexSet DefiningGraph::all_vertices() const {
  return size() == 64 ? ~VertexSet{0} : (bit(size()) - 1);
}

bool DefiningGraph::is_clique(VertexSet s) const {
  for (int v : members(s)) {
    if ((s & ~bit(v)) & ~adj_[v]) return false;
  }
  return true;
}

std::string DefiningGraph::format_set(VertexSet s) const {
  std::string out = "{";
  bool first = true;
  for (int v : members(s)) {
    if (!first) out += ",";
    out += labels_[v];
    first = false;
  }
  return out + "}";
}

VertexSet DefiningGraph::parse_set(const std::vector<std::string>& labels) const {
  VertexSet s = 0;
  for (const auto& l : labels) s |= bit(index_of(l));
  return s;
}

DefiningGraph parse_graph(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw GraphError(GraphError::Kind::MalformedJson, std::string("malformed graph JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array()) {
    throw GraphError(GraphError::Kind::MalformedJson, "graph JSON needs a \"vertices\" array");
  }
  std::vector<std::string> vertices;
  for (const auto& v : j["vertices"]) {
    if (!v.is_string()) throw GraphError(GraphError::Kind::MalformedJson, "vertex labels must be strings");
    vertices.push_back(v.get<std::string>());
  }
  std::vector<std::pair<std::string, std::string>> edges;
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) throw GraphError(GraphError::Kind::MalformedJson, "\"edges\" must be an array");
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
        throw GraphError(GraphError::Kind::MalformedJson, "each edge must be a pair of labels");
      }
      edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }
  return DefiningGraph(std::move(vertices), edges);
}

std::string graph_to_json(const DefiningGraph& g) {
  nlohmann::json j;
  j["vertices"] = g.labels();
  j["edges"] = nlohmann::json::array();
  for (auto [a, b] : g.edges()) j["edges"].push_back({g.label(a), g.label(b)});
  return j.dump();
}

namespace {

bool lex_less(VertexSet a, VertexSet b) {
  if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
  auto ma = members(a), mb = members(b);
  return ma < mb;
}

void extend_cliques(const DefiningGraph& g, VertexSet current, VertexSet candidates,
                    std::vector<VertexSet>& out) {
  out.push_back(current);
  while (candidates) {
    int v = __builtin_ctzll(candidates);
    candidates &= candidates - 1;
    extend_cliques(g, current | bit(v), candidates & g.neighbors(v), out);
  }
}

}  // namespace

std::vector<VertexSet> cliques(const DefiningGraph& g) {
  std::vector<VertexSet> out;
  extend_cliques(g, 0, g.all_vertices(), out);
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

VertexSet orthogonal_complement(const DefiningGraph& g, VertexSet J) {
  if (J & ~g.all_vertices()) {
    throw GraphError(GraphError::Kind::UnknownVertex, "vertex subset mentions an unknown vertex");
  }
  VertexSet out = g.all_vertices();
  for (int j : members(J)) out &= g.neighbors(j);
  return out & ~J;
}

std::vector<VertexSet> join_decompose(const DefiningGraph& g) {
  std::vector<VertexSet> factors;
  VertexSet unseen = g.all_vertices();
  while (unseen) {
    int start = __builtin_ctzll(unseen);
    VertexSet comp = bit(start), frontier = bit(start);
    while (frontier) {
      int v = __builtin_ctzll(frontier);
      frontier &= frontier - 1;
      VertexSet non_nbrs = g.all_vertices() & ~g.neighbors(v) & ~bit(v) & ~comp;
      comp |= non_nbrs;
      frontier |= non_nbrs;
    }
    factors.push_back(comp);
    unseen &= ~comp;
  }
  return factors;
}

DefiningGraph rejoin(const DefiningGraph& g, const std::vector<VertexSet>& factors) {
  std::vector<std::pair<std::string, std::string>> edges;
  for (size_t f = 0; f < factors.size(); ++f) {
    for (int a : members(factors[f])) {
      for (int b : members(factors[f])) {
        if (a < b && g.adjacent(a, b)) edges.emplace_back(g.label(a), g.label(b));
      }
      for (size_t h = f + 1; h < factors.size(); ++h) {
        for (int b : members(factors[h])) edges.emplace_back(g.label(a), g.label(b));
      }
    }
  }
  return DefiningGraph(g.labels(), edges);
}

namespace graphs {

namespace {
std::vector<std::string> letters(int n) {
  if (n == 2) return {"u", "v"};
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
  return out;
}
}  // namespace

DefiningGraph single_vertex() { return DefiningGraph({"v"}, {}); }

DefiningGraph complete(int n) {
  auto l = letters(n);
  std::vector<std::pair<std::string, std::string>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(l[i], l[j]);
  return DefiningGraph(l, e);
}

DefiningGraph discrete(int n) { return DefiningGraph(letters(n), {}); }

DefiningGraph path(int n) {
  std::vector<std::string> l;
  for (int i = 0; i < n; ++i) l.push_back(std::string(1, static_cast<char>('a' + i)));
  std::vector<std::pair<std::string, std::string>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(l[i], l[i + 1]);
  return DefiningGraph(l, e);
}

DefiningGraph cycle(int n) {
  std::vector<std::string> l;
  for (int i = 0; i < n; ++i) l.push_back(std::string(1, static_cast<char>('a' + i)));
  std::vector<std::pair<std::string, std::string>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(l[i], l[(i + 1) % n]);
  return DefiningGraph(l, e);
}

}  // namespace graphs

}  // namespace cubikit
