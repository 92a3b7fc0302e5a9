#include "cubikit/cube_complex.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace cubikit {

namespace {

constexpr int kMaxVertices = 1 << 21;

std::uint64_t edge_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

std::uint64_t corner_key(int corner, int x, int y) {
  if (x > y) std::swap(x, y);
  return (static_cast<std::uint64_t>(corner) << 42) | (static_cast<std::uint64_t>(x) << 21) |
         static_cast<std::uint64_t>(y);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[a] = b;
  }
};

const std::string kEmpty;

}  // namespace

int CubeComplex::add_vertex(const std::string& name, bool boundary) {
  if (name_index_.count(name)) throw ComplexError("duplicate vertex name '" + name + "'");
  if (vertex_count() >= kMaxVertices) throw ComplexError("complex exceeds the vertex limit");
  int id = vertex_count();
  names_.push_back(name);
  boundary_.push_back(boundary);
  name_index_.emplace(name, id);
  adj_.emplace_back();
  return id;
}

int CubeComplex::find_vertex(const std::string& name) const {
  auto it = name_index_.find(name);
  return it == name_index_.end() ? -1 : it->second;
}

int CubeComplex::add_edge(int u, int v, const std::string& label) {
  if (u == v) throw ComplexError("edge endpoints must differ");
  if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count()) throw ComplexError("edge endpoint out of range");
  auto key = edge_key(u, v);
  if (edge_index_.count(key)) throw ComplexError("duplicate edge " + names_[u] + " -- " + names_[v]);
  int id = edge_count();
  edges_.push_back({u, v, label});
  edge_index_.emplace(key, id);
  adj_[u].emplace_back(v, id);
  adj_[v].emplace_back(u, id);
  edge_squares_.emplace_back();
  return id;
}

int CubeComplex::find_edge(int u, int v) const {
  auto it = edge_index_.find(edge_key(u, v));
  return it == edge_index_.end() ? -1 : it->second;
}

int CubeComplex::add_square(int a, int b, int c, int d) {
  std::array<int, 4> cyc{a, b, c, d};
  std::array<int, 4> es{};
  for (int i = 0; i < 4; ++i) {
    es[i] = find_edge(cyc[i], cyc[(i + 1) % 4]);
    if (es[i] < 0) throw ComplexError("square side missing between " + names_[cyc[i]] + " and " + names_[cyc[(i + 1) % 4]]);
  }
  // Existing square on the same vertex set?
  for (int s : edge_squares_[es[0]]) {
    auto sv = squares_[s];
    std::sort(sv.begin(), sv.end());
    auto cv = cyc;
    std::sort(cv.begin(), cv.end());
    if (sv == cv) return s;
  }
  int id = square_count();
  squares_.push_back(cyc);
  square_edges_.push_back(es);
  for (int e : es) edge_squares_[e].push_back(id);
  for (int i = 0; i < 4; ++i) {
    int corner = cyc[i], x = cyc[(i + 1) % 4], y = cyc[(i + 3) % 4], opp = cyc[(i + 2) % 4];
    corner_index_.emplace(corner_key(corner, x, y), opp);
  }
  return id;
}

int CubeComplex::fourth_corner(int corner, int x, int y) const {
  auto it = corner_index_.find(corner_key(corner, x, y));
  return it == corner_index_.end() ? -1 : it->second;
}

void CubeComplex::set_rank(int v, int r) {
  if (static_cast<int>(rank_.size()) < vertex_count()) rank_.resize(vertex_count(), -1);
  rank_.at(v) = r;
}

void CubeComplex::set_tag(int v, const std::string& t) {
  if (static_cast<int>(tag_.size()) < vertex_count()) tag_.resize(vertex_count());
  tag_.at(v) = t;
}

const std::string& CubeComplex::tag(int v) const {
  return v < static_cast<int>(tag_.size()) ? tag_[v] : kEmpty;
}

void CubeComplex::set_edge_kind(int e, const std::string& k) {
  if (static_cast<int>(edge_kind_.size()) < edge_count()) edge_kind_.resize(edge_count());
  edge_kind_.at(e) = k;
}

const std::string& CubeComplex::edge_kind(int e) const {
  return e < static_cast<int>(edge_kind_.size()) ? edge_kind_[e] : kEmpty;
}

std::vector<int> CubeComplex::interior_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < vertex_count(); ++v)
    if (!boundary_[v]) out.push_back(v);
  return out;
}

std::string CubeComplex::to_json() const {
  nlohmann::ordered_json j;
  j["vertices"] = nlohmann::ordered_json::array();
  for (int v = 0; v < vertex_count(); ++v) {
    nlohmann::ordered_json vj;
    vj["id"] = names_[v];
    vj["boundary"] = static_cast<bool>(boundary_[v]);
    if (rank(v) >= 0) vj["rank"] = rank(v);
    if (!tag(v).empty()) vj["clique-label"] = tag(v);
    j["vertices"].push_back(vj);
  }
  j["edges"] = nlohmann::ordered_json::array();
  bool kinds = false;
  for (int e = 0; e < edge_count(); ++e) {
    j["edges"].push_back({names_[edges_[e].u], names_[edges_[e].v], edges_[e].label});
    if (!edge_kind(e).empty()) kinds = true;
  }
  if (kinds) {
    j["edge-kind"] = nlohmann::ordered_json::array();
    for (int e = 0; e < edge_count(); ++e) j["edge-kind"].push_back(edge_kind(e));
  }
  j["squares"] = nlohmann::ordered_json::array();
  for (int s = 0; s < square_count(); ++s) {
    const auto& es = square_edges_[s];
    j["squares"].push_back({es[0], es[1], es[2], es[3]});
  }
  return j.dump();
}

CubeComplex CubeComplex::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ComplexError(std::string("malformed complex JSON: ") + e.what());
  }
  CubeComplex c;
  try {
    for (const auto& v : j.at("vertices")) {
      int id = c.add_vertex(v.at("id").get<std::string>(), v.value("boundary", false));
      if (v.contains("rank")) c.set_rank(id, v["rank"].get<int>());
      if (v.contains("clique-label")) c.set_tag(id, v["clique-label"].get<std::string>());
    }
    for (const auto& e : j.at("edges")) {
      int u = c.find_vertex(e.at(0).get<std::string>());
      int w = c.find_vertex(e.at(1).get<std::string>());
      if (u < 0 || w < 0) throw ComplexError("edge refers to an unknown vertex");
      c.add_edge(u, w, e.size() > 2 ? e.at(2).get<std::string>() : std::string());
    }
    if (j.contains("edge-kind")) {
      int e = 0;
      for (const auto& k : j["edge-kind"]) c.set_edge_kind(e++, k.get<std::string>());
    }
    for (const auto& s : j.value("squares", nlohmann::json::array())) {
      std::array<int, 4> es{};
      for (int i = 0; i < 4; ++i) es[i] = s.at(i).get<int>();
      // Recover the cyclic vertex order from consecutive edges.
      auto shared = [&](int e1, int e2) {
        const auto& a = c.edge(e1);
        const auto& b = c.edge(e2);
        if (a.u == b.u || a.u == b.v) return a.u;
        if (a.v == b.u || a.v == b.v) return a.v;
        throw ComplexError("square edges are not consecutive");
      };
      int v1 = shared(es[0], es[1]), v2 = shared(es[1], es[2]), v3 = shared(es[2], es[3]),
          v0 = shared(es[3], es[0]);
      c.add_square(v0, v1, v2, v3);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ComplexError(std::string("malformed complex JSON: ") + e.what());
  }
  return c;
}

std::string CubeComplex::to_dot(const std::vector<int>* edge_class) const {
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::ostringstream os;
  os << "graph cubikit {\n  node [shape=point];\n";
  for (int v = 0; v < vertex_count(); ++v) {
    os << "  \"" << names_[v] << "\"";
    if (boundary_[v]) os << " [color=gray]";
    os << ";\n";
  }
  for (int e = 0; e < edge_count(); ++e) {
    os << "  \"" << names_[edges_[e].u] << "\" -- \"" << names_[edges_[e].v] << "\" [label=\""
       << edges_[e].label << "\"";
    if (edge_class && (*edge_class)[e] >= 0) os << ", color=\"" << palette[(*edge_class)[e] % 10] << "\"";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::vector<int> bfs_distances(const CubeComplex& c, int source, const std::vector<char>* allowed) {
  std::vector<int> dist(c.vertex_count(), -1);
  if (allowed && !(*allowed)[source]) return dist;
  std::deque<int> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (auto [w, e] : c.incident(v)) {
      (void)e;
      if (dist[w] >= 0) continue;
      if (allowed && !(*allowed)[w]) continue;
      dist[w] = dist[v] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

std::vector<int> complete_cube(const CubeComplex& c, int corner, const std::vector<int>& nbrs) {
  const int k = static_cast<int>(nbrs.size());
  std::vector<int> vert(size_t{1} << k, -1);
  vert[0] = corner;
  for (int i = 0; i < k; ++i) vert[size_t{1} << i] = nbrs[i];
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    if (__builtin_popcount(mask) < 2) continue;
    int q = -1;
    for (int i = 0; i < k; ++i) {
      if (!(mask >> i & 1)) continue;
      for (int j = i + 1; j < k; ++j) {
        if (!(mask >> j & 1)) continue;
        unsigned bi = 1u << i, bj = 1u << j;
        int r = c.fourth_corner(vert[mask ^ bi ^ bj], vert[mask ^ bi], vert[mask ^ bj]);
        if (r < 0) return {};
        if (q < 0) q = r;
        else if (q != r) return {};
      }
    }
    vert[mask] = q;
  }
  std::vector<int> sorted = vert;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return {};
  return vert;
}

namespace {

// Partial cube built at corner: returns true if complete; sets touches_boundary when the
// construction stalled next to a truncated vertex.
bool try_cube(const CubeComplex& c, int corner, const std::vector<int>& nbrs, bool& touches_boundary) {
  touches_boundary = false;
  const int k = static_cast<int>(nbrs.size());
  std::vector<int> vert(size_t{1} << k, -1);
  vert[0] = corner;
  for (int i = 0; i < k; ++i) vert[size_t{1} << i] = nbrs[i];
  auto any_boundary = [&]() {
    for (int v : vert)
      if (v >= 0 && c.boundary(v)) return true;
    return false;
  };
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    if (__builtin_popcount(mask) < 2) continue;
    int q = -1;
    for (int i = 0; i < k; ++i) {
      if (!(mask >> i & 1)) continue;
      for (int j = i + 1; j < k; ++j) {
        if (!(mask >> j & 1)) continue;
        unsigned bi = 1u << i, bj = 1u << j;
        int r = c.fourth_corner(vert[mask ^ bi ^ bj], vert[mask ^ bi], vert[mask ^ bj]);
        if (r < 0) {
          touches_boundary = any_boundary();
          return false;
        }
        if (q < 0) q = r;
        else if (q != r) {
          touches_boundary = any_boundary();
          return false;
        }
      }
    }
    vert[mask] = q;
  }
  return true;
}

struct LinkSearch {
  const CubeComplex& c;
  int corner;
  const std::vector<int>& nbr;
  const std::vector<std::vector<char>>& linked;
  FlagReport& report;
  bool failed = false;

  void extend(std::vector<int>& clique, const std::vector<int>& candidates) {
    for (size_t idx = 0; idx < candidates.size() && !failed; ++idx) {
      int x = candidates[idx];
      clique.push_back(x);
      bool ok = true;
      if (clique.size() >= 3) {
        std::vector<int> vs;
        for (int i : clique) vs.push_back(nbr[i]);
        bool touches = false;
        if (!try_cube(c, corner, vs, touches)) {
          ok = false;
          if (!touches) {
            report.pass = false;
            report.failures.push_back({corner, "link simplex without a cube", vs});
            failed = true;
          }
        }
      }
      if (ok) {
        report.max_cube_dimension = std::max<int>(report.max_cube_dimension, static_cast<int>(clique.size()));
        std::vector<int> next;
        for (size_t j = idx + 1; j < candidates.size(); ++j)
          if (linked[x][candidates[j]]) next.push_back(candidates[j]);
        extend(clique, next);
      }
      clique.pop_back();
    }
  }
};

}  // namespace

FlagReport check_flag_links(const CubeComplex& c) {
  FlagReport report;
  for (int v = 0; v < c.vertex_count(); ++v) {
    if (c.boundary(v)) continue;
    ++report.checked_vertices;
    const auto& inc = c.incident(v);
    std::vector<int> nbr;
    std::unordered_map<int, int> local;
    for (auto [w, e] : inc) {
      (void)e;
      local.emplace(w, static_cast<int>(nbr.size()));
      nbr.push_back(w);
    }
    const int d = static_cast<int>(nbr.size());
    std::vector<std::vector<char>> linked(d, std::vector<char>(d, 0));
    std::set<std::pair<int, int>> seen_pairs;
    bool simplicial = true;
    for (auto [w, e] : inc) {
      (void)w;
      for (int s : c.squares_on_edge(e)) {
        const auto& sq = c.square(s);
        int pos = static_cast<int>(std::find(sq.begin(), sq.end(), v) - sq.begin());
        if (pos == 4) continue;
        int x = sq[(pos + 1) % 4], y = sq[(pos + 3) % 4];
        int a = local.at(x), b = local.at(y);
        if (a > b) std::swap(a, b);
        // Each square at v is seen twice (once from each of its two edges at v).
        if (c.edge(e).u != v && c.edge(e).v != v) continue;
        if (c.other_end(e, v) != sq[(pos + 1) % 4]) continue;
        if (!seen_pairs.insert({a, b}).second) {
          simplicial = false;
          report.pass = false;
          report.failures.push_back({v, "two squares share two adjacent edges", {x, y}});
        }
        linked[a][b] = linked[b][a] = 1;
      }
    }
    if (!simplicial) continue;
    if (d > 0) report.max_cube_dimension = std::max(report.max_cube_dimension, 1);
    std::vector<int> all(d);
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> clique;
    LinkSearch search{c, v, nbr, linked, report};
    search.extend(clique, all);
  }
  return report;
}

HyperplaneSet::HyperplaneSet(const CubeComplex& c) : complex_(&c) {
  const int n = c.vertex_count();
  mask_.assign(n, 0);
  for (int v = 0; v < n; ++v)
    if (!c.boundary(v)) {
      mask_[v] = 1;
      interior_.push_back(v);
    }
  edge_wall_.assign(c.edge_count(), -1);
  if (!interior_.empty()) {
    auto d = bfs_distances(c, interior_[0], &mask_);
    for (int v : interior_)
      if (d[v] < 0) connected_ = false;
  }
  UnionFind uf(c.edge_count());
  std::vector<char> edge_in(c.edge_count(), 0);
  for (int e = 0; e < c.edge_count(); ++e) edge_in[e] = mask_[c.edge(e).u] && mask_[c.edge(e).v];
  for (int s = 0; s < c.square_count(); ++s) {
    const auto& sq = c.square(s);
    bool in = true;
    for (int v : sq) in = in && mask_[v];
    if (!in) continue;
    const auto& es = c.square_edges(s);
    uf.unite(es[0], es[2]);
    uf.unite(es[1], es[3]);
  }
  std::map<int, std::vector<int>> classes;
  for (int e = 0; e < c.edge_count(); ++e)
    if (edge_in[e]) classes[uf.find(e)].push_back(e);
  for (auto& [root, edges] : classes) {
    (void)root;
    Hyperplane h;
    h.edges = edges;
    h.label = c.edge(edges[0]).label;
    std::set<int> carrier;
    std::vector<char> cut(c.edge_count(), 0);
    for (int e : edges) {
      carrier.insert(c.edge(e).u);
      carrier.insert(c.edge(e).v);
      cut[e] = 1;
    }
    h.carrier.assign(carrier.begin(), carrier.end());
    // Components of the interior after deleting the class.
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (int s : interior_) {
      if (comp[s] >= 0) continue;
      std::deque<int> q{s};
      comp[s] = ncomp;
      while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (auto [w, e] : c.incident(v)) {
          if (!mask_[w] || cut[e] || comp[w] >= 0) continue;
          comp[w] = ncomp;
          q.push_back(w);
        }
      }
      ++ncomp;
    }
    bool ok = ncomp == 2;
    for (int e : edges) ok = ok && comp[c.edge(e).u] != comp[c.edge(e).v];
    int side_a_comp = comp[c.edge(edges[0]).u];
    for (int v : interior_) (comp[v] == side_a_comp ? h.side_a : h.side_b).push_back(v);
    if (!ok) {
      truncated_.push_back(std::move(h));
      continue;
    }
    int id = static_cast<int>(walls_.size());
    std::vector<std::int8_t> side(n, -1);
    for (int v : h.side_a) side[v] = 0;
    for (int v : h.side_b) side[v] = 1;
    for (int e : edges) edge_wall_[e] = id;
    sides_.push_back(std::move(side));
    walls_.push_back(std::move(h));
  }
}

int HyperplaneSet::separating_count(int x, int y) const {
  int count = 0;
  for (size_t w = 0; w < walls_.size(); ++w)
    if (sides_[w][x] != sides_[w][y]) ++count;
  return count;
}

int l1_distance(const CubeComplex& c, int x, int y) {
  if (c.boundary(x) || c.boundary(y)) throw ComplexError("l1_distance needs interior vertices");
  std::vector<char> mask(c.vertex_count(), 0);
  for (int v = 0; v < c.vertex_count(); ++v) mask[v] = !c.boundary(v);
  auto d = bfs_distances(c, x, &mask);
  if (d[y] < 0) throw ComplexError("vertices are not connected in the interior");
  return d[y];
}

namespace {

std::vector<char> membership(const CubeComplex& c, const std::vector<int>& S) {
  std::vector<char> in(c.vertex_count(), 0);
  for (int v : S) in.at(v) = 1;
  return in;
}

// Marks every vertex lying on a geodesic from the BFS source to a marked target.
std::vector<char> geodesic_shadow(const CubeComplex& c, const std::vector<int>& dist,
                                  const std::vector<char>& targets, const std::vector<char>* allowed) {
  int maxd = 0;
  for (int d : dist) maxd = std::max(maxd, d);
  std::vector<std::vector<int>> layers(maxd + 1);
  for (int v = 0; v < c.vertex_count(); ++v)
    if (dist[v] >= 0) layers[dist[v]].push_back(v);
  std::vector<char> mark(c.vertex_count(), 0);
  for (int d = maxd; d >= 0; --d) {
    for (int z : layers[d]) {
      if (targets[z]) {
        mark[z] = 1;
        continue;
      }
      for (auto [w, e] : c.incident(z)) {
        (void)e;
        if (allowed && !(*allowed)[w]) continue;
        if (dist[w] == d + 1 && mark[w]) {
          mark[z] = 1;
          break;
        }
      }
    }
  }
  return mark;
}

}  // namespace

bool is_convex(const CubeComplex& c, const std::vector<int>& S) {
  std::vector<char> interior(c.vertex_count(), 0);
  for (int v = 0; v < c.vertex_count(); ++v) interior[v] = !c.boundary(v);
  for (int v : S)
    if (!interior.at(v)) throw ComplexError("is_convex expects interior vertices");
  auto in = membership(c, S);
  for (int x : S) {
    auto dist = bfs_distances(c, x, &interior);
    auto shadow = geodesic_shadow(c, dist, in, &interior);
    for (int v = 0; v < c.vertex_count(); ++v)
      if (shadow[v] && !in[v]) return false;
  }
  for (int s = 0; s < c.square_count(); ++s) {
    const auto& sq = c.square(s);
    for (int i = 0; i < 4; ++i) {
      if (in[sq[i]] && in[sq[(i + 1) % 4]] && in[sq[(i + 3) % 4]] && !in[sq[(i + 2) % 4]] &&
          interior[sq[(i + 2) % 4]])
        return false;
    }
  }
  return true;
}

bool is_convex_local(const CubeComplex& c, const std::vector<int>& S) {
  if (S.empty()) return true;
  auto in = membership(c, S);
  auto d = bfs_distances(c, S[0], &in);
  for (int v : S)
    if (d[v] < 0) return false;
  std::unordered_map<int, int> outside_hits;
  for (int v : S) {
    for (auto [w, e] : c.incident(v)) {
      (void)e;
      if (in[w] || c.boundary(w)) continue;
      if (++outside_hits[w] >= 2) return false;
    }
  }
  return true;
}

std::vector<int> convex_hull(const CubeComplex& c, const std::vector<int>& S) {
  auto in = membership(c, S);
  std::vector<int> members_list = S;
  std::sort(members_list.begin(), members_list.end());
  members_list.erase(std::unique(members_list.begin(), members_list.end()), members_list.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < members_list.size(); ++i) {
      int x = members_list[i];
      auto dist = bfs_distances(c, x);
      auto shadow = geodesic_shadow(c, dist, in, nullptr);
      for (int v = 0; v < c.vertex_count(); ++v) {
        if (shadow[v] && !in[v]) {
          in[v] = 1;
          members_list.push_back(v);
          changed = true;
        }
      }
    }
  }
  std::sort(members_list.begin(), members_list.end());
  return members_list;
}

CubeComplex induced_subcomplex(const CubeComplex& c, const std::vector<int>& S, std::vector<int>* old_to_new,
                               const std::vector<char>* boundary) {
  CubeComplex out;
  std::vector<int> map(c.vertex_count(), -1);
  std::vector<int> sorted = S;
  std::sort(sorted.begin(), sorted.end());
  for (int v : sorted) {
    map[v] = out.add_vertex(c.name(v), boundary ? static_cast<bool>((*boundary)[v]) : c.boundary(v));
    if (c.rank(v) >= 0) out.set_rank(map[v], c.rank(v));
    if (!c.tag(v).empty()) out.set_tag(map[v], c.tag(v));
  }
  for (int e = 0; e < c.edge_count(); ++e) {
    const auto& ed = c.edge(e);
    if (map[ed.u] < 0 || map[ed.v] < 0) continue;
    int id = out.add_edge(map[ed.u], map[ed.v], ed.label);
    if (!c.edge_kind(e).empty()) out.set_edge_kind(id, c.edge_kind(e));
  }
  for (int s = 0; s < c.square_count(); ++s) {
    const auto& sq = c.square(s);
    if (map[sq[0]] < 0 || map[sq[1]] < 0 || map[sq[2]] < 0 || map[sq[3]] < 0) continue;
    out.add_square(map[sq[0]], map[sq[1]], map[sq[2]], map[sq[3]]);
  }
  if (old_to_new) *old_to_new = map;
  return out;
}

RestrictionQuotient restriction_quotient(const HyperplaneSet& hs, const std::vector<int>& K) {
  const CubeComplex& c = hs.complex();
  std::vector<char> inK(hs.walls().size(), 0);
  for (int k : K) inK.at(k) = 1;
  UnionFind uf(c.vertex_count());
  const auto& mask = hs.interior_mask();
  for (int e = 0; e < c.edge_count(); ++e) {
    const auto& ed = c.edge(e);
    if (!mask[ed.u] || !mask[ed.v]) continue;
    int w = hs.wall_of_edge(e);
    if (w >= 0 && inK[w]) continue;
    uf.unite(ed.u, ed.v);
  }
  RestrictionQuotient rq;
  rq.wall_subset = K;
  std::sort(rq.wall_subset.begin(), rq.wall_subset.end());
  rq.vertex_map.assign(c.vertex_count(), -1);
  std::map<int, int> root_to_target;
  for (int v : hs.interior()) {
    int r = uf.find(v);
    auto it = root_to_target.find(r);
    if (it == root_to_target.end()) {
      int id = rq.target.add_vertex("[" + c.name(r) + "]");
      it = root_to_target.emplace(r, id).first;
    }
    rq.vertex_map[v] = it->second;
  }
  for (int e = 0; e < c.edge_count(); ++e) {
    const auto& ed = c.edge(e);
    if (!mask[ed.u] || !mask[ed.v]) continue;
    int w = hs.wall_of_edge(e);
    if (w < 0 || !inK[w]) continue;
    int a = rq.vertex_map[ed.u], b = rq.vertex_map[ed.v];
    if (a == b) throw ComplexError("a wall in K does not separate its own edge");
    if (rq.target.find_edge(a, b) < 0) {
      int id = rq.target.add_edge(a, b, ed.label);
      if (!c.edge_kind(e).empty()) rq.target.set_edge_kind(id, c.edge_kind(e));
    }
  }
  for (int s = 0; s < c.square_count(); ++s) {
    const auto& sq = c.square(s);
    bool in = true;
    for (int v : sq) in = in && mask[v];
    if (!in) continue;
    const auto& es = c.square_edges(s);
    int w0 = hs.wall_of_edge(es[0]), w1 = hs.wall_of_edge(es[1]);
    if (w0 < 0 || w1 < 0 || !inK[w0] || !inK[w1]) continue;
    rq.target.add_square(rq.vertex_map[sq[0]], rq.vertex_map[sq[1]], rq.vertex_map[sq[2]], rq.vertex_map[sq[3]]);
  }
  return rq;
}

bool RqReport::agree() const {
  return vertex_preimages_convex == point_preimages_convex && point_preimages_convex == convex_preimages_convex &&
         convex_preimages_convex == hyperplane_preimages && hyperplane_preimages == matches_rebuilt_quotient;
}

RqReport verify_rq_characterization(const CubeComplex& source, const CubeComplex& target_in,
                                    const std::vector<int>& q, std::uint64_t seed, int sampled_intervals) {
  RqReport rep;
  HyperplaneSet hs(source);
  const auto& mask = hs.interior_mask();
  if (static_cast<int>(q.size()) != source.vertex_count()) throw ComplexError("map size mismatch");
  CubeComplex target = target_in;
  for (int v = 0; v < target.vertex_count(); ++v) target.set_boundary(v, false);
  const int nt = target.vertex_count();

  std::vector<std::vector<int>> fiber(nt);
  for (int v : hs.interior()) {
    if (q[v] < 0 || q[v] >= nt) throw ComplexError("map undefined on interior vertex " + source.name(v));
    fiber[q[v]].push_back(v);
  }
  for (int t = 0; t < nt; ++t)
    if (fiber[t].empty()) throw ComplexError("map is not surjective onto " + target.name(t));

  // Edge images: -1 collapsed, else target edge id.
  std::vector<int> edge_image(source.edge_count(), -2);
  for (int e = 0; e < source.edge_count(); ++e) {
    const auto& ed = source.edge(e);
    if (!mask[ed.u] || !mask[ed.v]) continue;
    if (q[ed.u] == q[ed.v]) {
      edge_image[e] = -1;
      continue;
    }
    int te = target.find_edge(q[ed.u], q[ed.v]);
    if (te < 0) throw ComplexError("edge " + source.name(ed.u) + " -- " + source.name(ed.v) + " maps to a non-edge");
    edge_image[e] = te;
  }
  std::vector<int> square_image(source.square_count(), -2);
  for (int s = 0; s < source.square_count(); ++s) {
    const auto& sq = source.square(s);
    bool in = true;
    for (int v : sq) in = in && mask[v];
    if (!in) continue;
    const auto& es = source.square_edges(s);
    bool c0 = edge_image[es[0]] == -1, c1 = edge_image[es[1]] == -1, c2 = edge_image[es[2]] == -1,
         c3 = edge_image[es[3]] == -1;
    if (c0 != c2 || c1 != c3) throw ComplexError("square at " + source.name(sq[0]) + " does not map cubically");
    if (!c0 && !c1) {
      std::set<int> img{q[sq[0]], q[sq[1]], q[sq[2]], q[sq[3]]};
      int ts = -1;
      if (img.size() == 4) {
        int d = target.fourth_corner(q[sq[0]], q[sq[1]], q[sq[3]]);
        if (d == q[sq[2]]) {
          for (int t : target.squares_on_edge(edge_image[es[0]])) {
            auto tv = target.square(t);
            std::set<int> ts_set(tv.begin(), tv.end());
            if (ts_set == img) ts = t;
          }
        }
      }
      if (ts < 0) throw ComplexError("square at " + source.name(sq[0]) + " maps onto a non-square");
      square_image[s] = ts;
    } else if (!c0 || !c1) {
      square_image[s] = -1;
    }
  }

  // (1) vertex preimages.
  rep.vertex_preimages_convex = true;
  for (int t = 0; t < nt; ++t) {
    if (!is_convex_local(source, fiber[t])) {
      rep.vertex_preimages_convex = false;
      rep.witnesses.push_back("(1) fibre over " + target.name(t) + " is not convex");
      break;
    }
  }

  // (2) preimages of edge midpoints and square centres.
  rep.point_preimages_convex = rep.vertex_preimages_convex;
  {
    std::vector<std::vector<int>> over_edge(target.edge_count());
    for (int e = 0; e < source.edge_count(); ++e)
      if (edge_image[e] >= 0) over_edge[edge_image[e]].push_back(e);
    for (int te = 0; te < target.edge_count() && rep.point_preimages_convex; ++te) {
      std::set<int> walls, verts;
      for (int e : over_edge[te]) {
        walls.insert(hs.wall_of_edge(e));
        verts.insert(source.edge(e).u);
        verts.insert(source.edge(e).v);
      }
      if (walls.size() != 1 || *walls.begin() < 0 ||
          !is_convex_local(source, std::vector<int>(verts.begin(), verts.end()))) {
        rep.point_preimages_convex = false;
        rep.witnesses.push_back("(2) preimage of the midpoint of " + target.name(target.edge(te).u) + " -- " +
                                target.name(target.edge(te).v) + " is not convex");
      }
    }
    std::vector<std::vector<int>> over_square(target.square_count());
    for (int s = 0; s < source.square_count(); ++s)
      if (square_image[s] >= 0) over_square[square_image[s]].push_back(s);
    for (int ts = 0; ts < target.square_count() && rep.point_preimages_convex; ++ts) {
      std::set<std::pair<int, int>> pairs;
      std::set<int> verts;
      for (int s : over_square[ts]) {
        const auto& es = source.square_edges(s);
        int a = hs.wall_of_edge(es[0]), b = hs.wall_of_edge(es[1]);
        pairs.insert({std::min(a, b), std::max(a, b)});
        for (int v : source.square(s)) verts.insert(v);
      }
      if (pairs.size() != 1 || !is_convex_local(source, std::vector<int>(verts.begin(), verts.end()))) {
        rep.point_preimages_convex = false;
        rep.witnesses.push_back("(2) preimage of a square centre is not convex");
      }
    }
  }

  // (3) preimages of sampled convex subcomplexes of the target.
  rep.convex_preimages_convex = true;
  {
    HyperplaneSet ths(target);
    std::vector<std::vector<int>> samples;
    for (const auto& w : ths.walls()) {
      samples.push_back(w.side_a);
      samples.push_back(w.side_b);
      samples.push_back(w.carrier);
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, nt - 1);
    for (int i = 0; i < sampled_intervals; ++i) {
      int x = pick(rng), y = pick(rng);
      auto dx = bfs_distances(target, x);
      auto dy = bfs_distances(target, y);
      std::vector<int> interval;
      for (int v = 0; v < nt; ++v)
        if (dx[v] >= 0 && dy[v] >= 0 && dx[v] + dy[v] == dx[y]) interval.push_back(v);
      samples.push_back(interval);
    }
    for (const auto& sample : samples) {
      std::vector<int> pre;
      for (int t : sample) pre.insert(pre.end(), fiber[t].begin(), fiber[t].end());
      if (!is_convex_local(source, pre)) {
        rep.convex_preimages_convex = false;
        rep.witnesses.push_back("(3) preimage of a convex target subcomplex is not convex");
        break;
      }
    }
  }

  // (4) each target hyperplane pulls back to exactly one source hyperplane.
  rep.hyperplane_preimages = true;
  {
    HyperplaneSet ths(target);
    std::vector<int> target_wall_of_edge(target.edge_count(), -1);
    for (size_t w = 0; w < ths.walls().size(); ++w)
      for (int e : ths.walls()[w].edges) target_wall_of_edge[e] = static_cast<int>(w);
    std::vector<std::set<int>> source_walls(ths.walls().size());
    for (int e = 0; e < source.edge_count(); ++e)
      if (edge_image[e] >= 0 && target_wall_of_edge[edge_image[e]] >= 0)
        source_walls[target_wall_of_edge[edge_image[e]]].insert(hs.wall_of_edge(e));
    for (size_t w = 0; w < ths.walls().size() && rep.hyperplane_preimages; ++w) {
      if (source_walls[w].size() != 1 || *source_walls[w].begin() < 0) {
        rep.hyperplane_preimages = false;
        rep.witnesses.push_back("(4) a target hyperplane pulls back to " + std::to_string(source_walls[w].size()) +
                                " hyperplanes");
        break;
      }
      int sw = *source_walls[w].begin();
      for (int e : hs.walls()[sw].edges) {
        if (edge_image[e] < 0 || target_wall_of_edge[edge_image[e]] != static_cast<int>(w)) {
          rep.hyperplane_preimages = false;
          rep.witnesses.push_back("(4) a source hyperplane is only partly mapped onto its target hyperplane");
          break;
        }
      }
    }
    if (!ths.truncated().empty()) {
      rep.hyperplane_preimages = false;
      rep.witnesses.push_back("(4) target has truncated hyperplanes");
    }
  }

  // (5) fibres coincide with the classes of the rebuilt restriction quotient.
  rep.matches_rebuilt_quotient = true;
  {
    std::set<int> K;
    for (int e = 0; e < source.edge_count(); ++e)
      if (edge_image[e] >= 0 && hs.wall_of_edge(e) >= 0) K.insert(hs.wall_of_edge(e));
    auto rebuilt = restriction_quotient(hs, std::vector<int>(K.begin(), K.end()));
    std::vector<int> cls_to_t(rebuilt.target.vertex_count(), -1), t_to_cls(nt, -1);
    bool ok = true;
    for (int v : hs.interior()) {
      int r = rebuilt.vertex_map[v], t = q[v];
      if (cls_to_t[r] < 0 && t_to_cls[t] < 0) {
        cls_to_t[r] = t;
        t_to_cls[t] = r;
      } else if (cls_to_t[r] != t || t_to_cls[t] != r) {
        ok = false;
        break;
      }
    }
    if (ok && rebuilt.target.edge_count() != target.edge_count()) ok = false;
    if (ok && rebuilt.target.square_count() != target.square_count()) ok = false;
    for (int e = 0; ok && e < rebuilt.target.edge_count(); ++e) {
      const auto& ed = rebuilt.target.edge(e);
      if (target.find_edge(cls_to_t[ed.u], cls_to_t[ed.v]) < 0) ok = false;
    }
    for (int s = 0; ok && s < rebuilt.target.square_count(); ++s) {
      const auto& sq = rebuilt.target.square(s);
      if (target.fourth_corner(cls_to_t[sq[0]], cls_to_t[sq[1]], cls_to_t[sq[3]]) != cls_to_t[sq[2]]) ok = false;
    }
    rep.matches_rebuilt_quotient = ok;
    if (!ok) rep.witnesses.push_back("(5) fibres differ from the classes of the rebuilt quotient");
  }
  return rep;
}

FoldingExample folding_example() {
  FoldingExample ex;
  auto name = [](int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; };
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 1; ++j) ex.source.add_vertex(name(i, j));
  auto id = [&](int i, int j) { return ex.source.find_vertex(name(i, j)); };
  for (int i = 0; i <= 3; ++i) ex.source.add_edge(id(i, 0), id(i, 1), "y");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j <= 1; ++j) ex.source.add_edge(id(i, j), id(i + 1, j), "x");
  for (int i = 0; i < 3; ++i) ex.source.add_square(id(i, 0), id(i + 1, 0), id(i + 1, 1), id(i, 1));
  int t0 = ex.target.add_vertex("0"), t1 = ex.target.add_vertex("1");
  ex.target.add_edge(t0, t1, "x");
  ex.map.assign(ex.source.vertex_count(), -1);
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 1; ++j) ex.map[id(i, j)] = (i % 2 == 0) ? t0 : t1;
  return ex;
}

}  // namespace cubikit
