#include "cubikit/wallspace.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>

#include "cubikit/isomorphism.hpp"
#include "json.hpp"

namespace cubikit {

void Wallspace::validate() const {
  const int n = static_cast<int>(points.size());
  if (!tags.empty() && tags.size() != walls.size()) throw WallspaceError("tag count differs from wall count");
  std::map<std::vector<int>, int> seen;
  for (size_t w = 0; w < walls.size(); ++w) {
    const auto& side = walls[w];
    if (side.empty() || static_cast<int>(side.size()) >= n)
      throw WallspaceError("wall " + tag(static_cast<int>(w)) + " does not split the points");
    for (size_t i = 0; i < side.size(); ++i) {
      if (side[i] < 0 || side[i] >= n) throw WallspaceError("wall " + tag(static_cast<int>(w)) + " names an unknown point");
      if (i && side[i] <= side[i - 1]) throw WallspaceError("wall sides must be sorted without repeats");
    }
    // Store each partition by the side that holds point 0.
    std::vector<int> key = side;
    if (side[0] != 0) {
      std::vector<char> in(n, 0);
      for (int p : side) in[p] = 1;
      key.clear();
      for (int p = 0; p < n; ++p)
        if (!in[p]) key.push_back(p);
    }
    auto [it, fresh] = seen.emplace(key, static_cast<int>(w));
    if (!fresh)
      throw WallspaceError("walls " + tag(it->second) + " and " + tag(static_cast<int>(w)) + " are the same partition");
  }
}

std::string Wallspace::tag(int w) const { return tags.empty() ? "w" + std::to_string(w) : tags.at(w); }

std::vector<std::vector<char>> Wallspace::side_mask() const {
  std::vector<std::vector<char>> m(walls.size(), std::vector<char>(points.size(), 0));
  for (size_t w = 0; w < walls.size(); ++w)
    for (int p : walls[w]) m[w][p] = 1;
  return m;
}

std::string Wallspace::to_json() const {
  nlohmann::ordered_json j;
  j["points"] = points;
  j["walls"] = walls;
  if (!tags.empty()) j["tags"] = tags;
  return j.dump();
}

Wallspace Wallspace::from_json(const std::string& text) {
  Wallspace ws;
  try {
    auto j = nlohmann::json::parse(text);
    for (const auto& p : j.at("points")) ws.points.push_back(p.is_string() ? p.get<std::string>() : p.dump());
    ws.walls = j.at("walls").get<std::vector<std::vector<int>>>();
    if (j.contains("tags")) ws.tags = j.at("tags").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw WallspaceError(std::string("malformed wallspace JSON: ") + e.what());
  }
  for (auto& side : ws.walls) std::sort(side.begin(), side.end());
  ws.validate();
  return ws;
}

bool walls_transverse(const Wallspace& ws, int a, int b) {
  const int n = static_cast<int>(ws.points.size());
  std::vector<char> in_a(n, 0), in_b(n, 0);
  for (int p : ws.walls[a]) in_a[p] = 1;
  for (int p : ws.walls[b]) in_b[p] = 1;
  bool q[2][2] = {{false, false}, {false, false}};
  for (int p = 0; p < n; ++p) q[static_cast<int>(in_a[p])][static_cast<int>(in_b[p])] = true;
  return q[0][0] && q[0][1] && q[1][0] && q[1][1];
}

namespace {

std::string key_of(const std::vector<char>& o) {
  std::string s(o.size(), '0');
  for (size_t i = 0; i < o.size(); ++i) s[i] = o[i] ? '1' : '0';
  return s;
}

// compat[a][sa][b][sb]: the chosen halfspaces of walls a and b meet.
using Compat = std::vector<std::vector<std::array<std::array<char, 2>, 2>>>;

Compat compatibility(const Wallspace& ws) {
  const int k = static_cast<int>(ws.walls.size());
  const int n = static_cast<int>(ws.points.size());
  auto mask = ws.side_mask();
  Compat c(k, std::vector<std::array<std::array<char, 2>, 2>>(k));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      for (auto& row : c[a][b]) row = {0, 0};
      for (int p = 0; p < n; ++p) c[a][b][static_cast<int>(mask[a][p])][static_cast<int>(mask[b][p])] = 1;
    }
  return c;
}

std::vector<std::vector<char>> transversality_matrix(const Wallspace& ws) {
  const int k = static_cast<int>(ws.walls.size());
  std::vector<std::vector<char>> t(k, std::vector<char>(k, 0));
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) t[a][b] = t[b][a] = walls_transverse(ws, a, b);
  return t;
}

// Maximal cliques by Bron–Kerbosch with pivoting.
void bron_kerbosch(const std::vector<std::vector<char>>& adj, std::vector<int>& r, std::vector<int> p,
                   std::vector<int> x, std::vector<std::vector<int>>& out) {
  if (p.empty() && x.empty()) {
    std::vector<int> c = r;
    std::sort(c.begin(), c.end());
    out.push_back(c);
    return;
  }
  int pivot = !p.empty() ? p[0] : x[0];
  size_t best = 0;
  for (const auto* set : {&p, &x})
    for (int u : *set) {
      size_t cnt = 0;
      for (int v : p) cnt += adj[u][v];
      if (cnt >= best) best = cnt, pivot = u;
    }
  std::vector<int> candidates;
  for (int v : p)
    if (!adj[pivot][v]) candidates.push_back(v);
  for (int v : candidates) {
    std::vector<int> np, nx;
    for (int u : p)
      if (adj[v][u]) np.push_back(u);
    for (int u : x)
      if (adj[v][u]) nx.push_back(u);
    r.push_back(v);
    bron_kerbosch(adj, r, np, nx, out);
    r.pop_back();
    p.erase(std::find(p.begin(), p.end(), v));
    x.push_back(v);
  }
}

std::vector<std::vector<int>> maximal_cliques(const std::vector<std::vector<char>>& adj) {
  std::vector<std::vector<int>> out;
  std::vector<int> r, p(adj.size());
  for (size_t i = 0; i < adj.size(); ++i) p[i] = static_cast<int>(i);
  bron_kerbosch(adj, r, p, {}, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

int DualComplex::find(const std::vector<char>& o) const {
  auto it = index.find(key_of(o));
  return it == index.end() ? -1 : it->second;
}

DualComplex dual_cube_complex(const Wallspace& ws, std::size_t cap) {
  ws.validate();
  const int k = static_cast<int>(ws.walls.size());
  const int n = static_cast<int>(ws.points.size());
  Compat compat = compatibility(ws);
  auto mask = ws.side_mask();
  DualComplex dual;
  // Principal orientations first so that realised 0-cubes carry point names.
  std::map<std::string, std::string> names;
  for (int p = 0; p < n; ++p) {
    std::vector<char> o(k);
    for (int w = 0; w < k; ++w) o[w] = mask[w][p];
    names.emplace(key_of(o), ws.points[p]);
  }
  std::vector<std::vector<char>> found;
  std::vector<char> o(k, 0);
  std::function<void(int)> rec = [&](int w) {
    if (w == k) {
      if (found.size() >= cap) throw WallspaceError("0-cube enumeration exceeds the cap");
      found.push_back(o);
      return;
    }
    for (char s : {char(0), char(1)}) {
      bool ok = true;
      for (int u = 0; u < w && ok; ++u) ok = compat[u][w][static_cast<int>(o[u])][static_cast<int>(s)];
      if (!ok) continue;
      o[w] = s;
      rec(w + 1);
    }
  };
  rec(0);
  for (const auto& ori : found) {
    std::string key = key_of(ori);
    auto nm = names.find(key);
    std::string name = nm != names.end() ? nm->second : "o:" + key;
    int id = dual.complex.add_vertex(name, false);
    dual.index.emplace(key, id);
    dual.orientation.push_back(ori);
  }
  const int m = dual.complex.vertex_count();
  for (int v = 0; v < m; ++v) {
    std::vector<char> ori = dual.orientation[v];
    for (int w = 0; w < k; ++w) {
      ori[w] ^= 1;
      int u = dual.find(ori);
      ori[w] ^= 1;
      if (u > v) dual.complex.add_edge(v, u, ws.tag(w));
    }
  }
  auto trans = transversality_matrix(ws);
  for (int v = 0; v < m; ++v) {
    std::vector<char> ori = dual.orientation[v];
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) {
        if (!trans[a][b]) continue;
        ori[a] ^= 1;
        int va = dual.find(ori);
        ori[b] ^= 1;
        int vab = dual.find(ori);
        ori[a] ^= 1;
        int vb = dual.find(ori);
        ori[b] ^= 1;
        if (va >= 0 && vb >= 0 && vab >= 0) dual.complex.add_square(v, va, vab, vb);
      }
  }
  for (int p = 0; p < n; ++p) {
    std::vector<char> ori(k);
    for (int w = 0; w < k; ++w) ori[w] = mask[w][p];
    dual.point_vertex.push_back(dual.find(ori));
  }
  return dual;
}

int dual_dimension(const Wallspace& ws) {
  auto trans = transversality_matrix(ws);
  int best = ws.walls.empty() ? 0 : 1;
  for (const auto& c : maximal_cliques(trans)) best = std::max(best, static_cast<int>(c.size()));
  return ws.walls.empty() ? 0 : best;
}

CubeCorrespondence maximal_cubes(const Wallspace& ws, const DualComplex& dual) {
  CubeCorrespondence out;
  const int k = static_cast<int>(ws.walls.size());
  auto trans = transversality_matrix(ws);
  out.families = k ? maximal_cliques(trans) : std::vector<std::vector<int>>{};
  // A cube is (orientation off its walls, its wall set). Grow cubes one wall at a time.
  using CubeKey = std::pair<std::string, std::vector<int>>;
  auto corner_ok = [&](std::vector<char> ori, const std::vector<int>& S, int extra) {
    std::vector<int> all = S;
    all.push_back(extra);
    for (std::uint32_t sub = 0; sub < (1u << all.size()); ++sub) {
      std::vector<char> o = ori;
      for (size_t i = 0; i < all.size(); ++i)
        if ((sub >> i) & 1) o[all[i]] ^= 1;
      if (dual.find(o) < 0) return false;
    }
    return true;
  };
  std::set<CubeKey> cubes, maximal;
  std::vector<std::pair<std::vector<char>, std::vector<int>>> frontier;
  for (int v = 0; v < dual.complex.vertex_count(); ++v) frontier.push_back({dual.orientation[v], {}});
  while (!frontier.empty()) {
    std::vector<std::pair<std::vector<char>, std::vector<int>>> next;
    for (auto& [ori, S] : frontier) {
      bool extended = false;
      for (int w = 0; w < k; ++w) {
        if (std::find(S.begin(), S.end(), w) != S.end()) continue;
        if (!corner_ok(ori, S, w)) continue;
        extended = true;
        std::vector<int> S2 = S;
        S2.push_back(w);
        std::sort(S2.begin(), S2.end());
        std::vector<char> base = ori;
        for (int u : S2) base[u] = 0;
        if (cubes.insert({key_of(base), S2}).second) next.push_back({base, S2});
      }
      if (!extended) {
        std::vector<char> base = ori;
        for (int u : S) base[u] = 0;
        maximal.insert({key_of(base), S});
      }
      out.max_cube_dimension = std::max(out.max_cube_dimension, static_cast<int>(S.size()));
    }
    frontier = std::move(next);
  }
  out.maximal_cubes = static_cast<int>(maximal.size());
  std::map<std::vector<int>, int> per_family;
  for (const auto& [base, S] : maximal) ++per_family[S];
  bool ok = per_family.size() == out.families.size();
  for (const auto& f : out.families) {
    auto it = per_family.find(f);
    if (it == per_family.end() || it->second != 1) ok = false;
  }
  out.bijective = ok;
  return out;
}

SageevRoundTrip sageev_round_trip(const CubeComplex& c, const std::vector<int>& points) {
  SageevRoundTrip out;
  auto hull = convex_hull(c, points);
  std::vector<int> old_to_new;
  out.span = induced_subcomplex(c, hull, &old_to_new);
  for (int v = 0; v < out.span.vertex_count(); ++v) out.span.set_boundary(v, false);
  HyperplaneSet hs(out.span);
  std::vector<int> pts;
  for (int v : hull) {
    pts.push_back(old_to_new[v]);
    out.wallspace.points.push_back(c.name(v));
  }
  for (size_t w = 0; w < hs.walls().size(); ++w) {
    std::vector<int> side;
    for (size_t i = 0; i < pts.size(); ++i)
      if (hs.side(static_cast<int>(w), pts[i]) == 0) side.push_back(static_cast<int>(i));
    if (side.empty() || side.size() == pts.size()) continue;
    out.wallspace.walls.push_back(side);
    out.wallspace.tags.push_back(hs.walls()[w].label);
  }
  out.dual = dual_cube_complex(out.wallspace);
  IsoOptions opt;
  opt.vertex_tags = false;
  opt.boundary_flags = false;
  for (size_t i = 0; i < pts.size(); ++i) opt.seeds.push_back({out.dual.point_vertex[i], pts[i]});
  out.isomorphic = find_isomorphism(out.dual.complex, out.span, opt).has_value();
  return out;
}

SageevRoundTrip sageev_round_trip(const Raag& G, int R) {
  int dim = 1;
  for (VertexSet c : cliques(G.graph())) dim = std::max(dim, popcount(c));
  RaagBall big = ball_X(G, dim * R + 1, 1);
  std::vector<int> points;
  for (int v = 0; v < big.complex.vertex_count(); ++v)
    if (static_cast<int>(big.elements[v].size()) <= R) points.push_back(v);
  for (int v : convex_hull(big.complex, points))
    if (static_cast<int>(big.elements[v].size()) > dim * R) throw ComplexError("hull of the ball reaches the truncation layer");
  return sageev_round_trip(big.complex, points);
}

ClassResolution line_resolution(int lo, int hi) {
  ClassResolution r;
  r.line.lo = lo;
  r.line.hi = hi;
  for (int i = lo; i <= hi; ++i) {
    r.line.tips.push_back({i - lo});
    r.line.tip_base.push_back(i);
  }
  r.tip_of = [lo, hi](int n) {
    if (n < lo || n > hi) throw WallspaceError("level height " + std::to_string(n) + " outside the resolution window");
    return n - lo;
  };
  return r;
}

ClassResolution resolution_from(const SemiconjugacyResult& res) {
  ClassResolution r;
  r.line = res.line;
  auto tips = res.tip_map;
  r.tip_of = [tips](int n) {
    auto it = tips.find(n);
    if (it == tips.end()) throw WallspaceError("level height " + std::to_string(n) + " outside the resolution window");
    return it->second;
  };
  return r;
}

InvariantWallspace invariant_wallspace(const Raag& G, const std::vector<Word>& points, const Resolver& resolver) {
  InvariantWallspace iws;
  iws.points = points;
  for (const Word& p : points) iws.ws.points.push_back(p.empty() ? "1" : G.format(p));
  std::set<ParallelClass> classes;
  for (const Word& p : points)
    for (int v = 0; v < G.rank(); ++v) classes.insert(class_of_line(G, p, v));
  const int n = static_cast<int>(points.size());
  std::map<std::vector<int>, int> seen;  // canonical partition -> wall id
  for (const ParallelClass& c : classes) {
    ClassResolution r = resolver(c);
    std::vector<int> tip(n);
    for (int i = 0; i < n; ++i) tip[i] = r.tip_of(level_height(G, c, points[i]));
    auto sides = r.line.wall_sides();
    for (size_t k = 0; k < sides.size(); ++k) {
      std::set<int> tipset(sides[k].begin(), sides[k].end());
      std::vector<int> side;
      for (int i = 0; i < n; ++i)
        if (tipset.count(tip[i])) side.push_back(i);
      if (side.empty() || static_cast<int>(side.size()) == n) {
        ++iws.non_separating;
        continue;
      }
      std::vector<int> key = side;
      if (side[0] != 0) {
        std::vector<char> in(n, 0);
        for (int p : side) in[p] = 1;
        key.clear();
        for (int p = 0; p < n; ++p)
          if (!in[p]) key.push_back(p);
      }
      std::string tag = class_id(G, c) + "#" + std::to_string(k);
      auto it = seen.find(key);
      if (it != seen.end()) {
        // Walls of one class can coincide on a window when a tip set is empty there.
        if (!(iws.wall_class[it->second] == c)) {
          ++iws.duplicates;
          iws.duplicate_witnesses.push_back(tag + " repeats " + iws.ws.tags[it->second]);
        }
        continue;
      }
      seen.emplace(key, static_cast<int>(iws.ws.walls.size()));
      iws.ws.walls.push_back(side);
      iws.ws.tags.push_back(tag);
      iws.wall_class.push_back(c);
      iws.wall_index.push_back(static_cast<int>(k));
    }
  }
  return iws;
}

std::vector<Word> hull_window(const Raag& G, int R) {
  int dim = 0;
  for (VertexSet c : cliques(G.graph())) dim = std::max(dim, popcount(c));
  RaagBall big = ball_X(G, std::max(1, dim) * R + 1, 1);
  std::vector<int> seed;
  for (int v = 0; v < big.complex.vertex_count(); ++v)
    if (static_cast<int>(big.elements[v].size()) <= R) seed.push_back(v);
  auto hull = convex_hull(big.complex, seed);
  std::vector<Word> out;
  for (int v : hull) {
    if (big.complex.boundary(v)) throw ComplexError("hull of the ball reaches the truncation boundary");
    out.push_back(big.elements[v]);
  }
  std::sort(out.begin(), out.end(), [](const Word& a, const Word& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

TransversalityReport transversality_check(const Raag& G, const InvariantWallspace& iws) {
  TransversalityReport out;
  const int k = static_cast<int>(iws.ws.walls.size());
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      ++out.pairs;
      bool t = walls_transverse(iws.ws, a, b);
      out.transverse += t;
      const auto& ca = iws.wall_class[a];
      const auto& cb = iws.wall_class[b];
      bool expect = !(ca == cb) && extension_adjacent(G, ca, cb);
      if (t != expect) {
        ++out.mismatches;
        if (out.witnesses.size() < 10)
          out.witnesses.push_back(iws.ws.tags[a] + " / " + iws.ws.tags[b] + (t ? " transverse" : " nested"));
      }
    }
  return out;
}

FlatEmbedding branched_flat_embed(const Raag& G, const InvariantWallspace& iws, const DualComplex& dual,
                                  const StandardFlat& flat) {
  FlatEmbedding out;
  const int n = static_cast<int>(iws.points.size());
  const int k = static_cast<int>(iws.ws.walls.size());
  std::vector<int> in_flat;
  for (int p = 0; p < n; ++p)
    if (flat_contains_element(G, flat, iws.points[p])) in_flat.push_back(p);
  if (in_flat.empty()) throw WallspaceError("flat does not meet the window");
  auto classes = flat_classes(G, flat);
  std::set<ParallelClass> cls(classes.begin(), classes.end());
  auto mask = iws.ws.side_mask();
  std::vector<int> sub, other;
  std::vector<char> fixed(k, 0);
  for (int w = 0; w < k; ++w) {
    if (cls.count(iws.wall_class[w])) {
      sub.push_back(w);
      continue;
    }
    other.push_back(w);
    std::set<char> s;
    for (int p : in_flat) s.insert(mask[w][p]);
    if (s.size() != 1) {
      out.valid = false;
      out.witnesses.push_back("wall " + iws.ws.tags[w] + " cuts the flat");
    }
    fixed[w] = *s.begin();
  }
  Wallspace subws;
  subws.points = iws.ws.points;
  for (int w : sub) {
    subws.walls.push_back(iws.ws.walls[w]);
    subws.tags.push_back(iws.ws.tags[w]);
  }
  DualComplex subdual = dual_cube_complex(subws);
  for (int v = 0; v < subdual.complex.vertex_count(); ++v) {
    std::vector<char> o(k);
    for (int w : other) o[w] = fixed[w];
    for (size_t i = 0; i < sub.size(); ++i) o[sub[i]] = subdual.orientation[v][i];
    int id = dual.find(o);
    if (id < 0) {
      out.valid = false;
      if (out.witnesses.size() < 5) out.witnesses.push_back("embedded orientation is not a 0-cube");
      continue;
    }
    out.vertices.push_back(id);
  }
  std::sort(out.vertices.begin(), out.vertices.end());
  out.convex = out.valid && is_convex(dual.complex, out.vertices);
  std::map<ParallelClass, int> per_class;
  for (int w : sub) ++per_class[iws.wall_class[w]];
  out.expected = 1;
  for (const auto& c : classes) out.expected *= per_class[c] + 1;
  return out;
}

bool flats_separated(const Raag& G, const InvariantWallspace& iws, const StandardFlat& a, const StandardFlat& b) {
  const int n = static_cast<int>(iws.points.size());
  auto mask = iws.ws.side_mask();
  for (size_t w = 0; w < iws.ws.walls.size(); ++w) {
    std::set<char> sa, sb;
    for (int p = 0; p < n; ++p) {
      if (flat_contains_element(G, a, iws.points[p])) sa.insert(mask[w][p]);
      if (flat_contains_element(G, b, iws.points[p])) sb.insert(mask[w][p]);
    }
    if (sa.size() == 1 && sb.size() == 1 && *sa.begin() != *sb.begin()) return true;
  }
  return false;
}

PhiReport phi_map(const Raag& G, const InvariantWallspace& iws, const DualComplex& dual) {
  PhiReport out;
  const int n = static_cast<int>(iws.points.size());
  out.vertex_map = dual.point_vertex;
  std::set<int> image(out.vertex_map.begin(), out.vertex_map.end());
  out.injective = static_cast<int>(image.size()) == n && !image.count(-1);
  for (int s = 0; s < n; ++s) {
    auto d = bfs_distances(dual.complex, out.vertex_map[s]);
    for (int t = s + 1; t < n; ++t) {
      int dd = d[out.vertex_map[t]], dg = G.distance(iws.points[s], iws.points[t]);
      if (dd <= 0) continue;
      out.lipschitz = std::max(out.lipschitz, static_cast<double>(dd) / dg);
      out.co_lipschitz = std::max(out.co_lipschitz, static_cast<double>(dg) / dd);
    }
  }
  // Multi-source breadth-first search from the image.
  std::vector<int> dist(dual.complex.vertex_count(), -1);
  std::vector<int> queue;
  for (int v : image)
    if (v >= 0) {
      dist[v] = 0;
      queue.push_back(v);
    }
  for (size_t h = 0; h < queue.size(); ++h)
    for (const auto& [u, e] : dual.complex.incident(queue[h])) {
      (void)e;
      if (dist[u] < 0) {
        dist[u] = dist[queue[h]] + 1;
        queue.push_back(u);
      }
    }
  for (int d : dist) out.density = std::max(out.density, d);
  return out;
}

KWallsReport k_walls_check(const Raag& G, const InvariantWallspace& iws, const Word& base, VertexSet J) {
  KWallsReport out;
  const int n = static_cast<int>(iws.points.size());
  std::vector<int> inK;
  for (int p = 0; p < n; ++p)
    if (G.in_subgroup(G.multiply(G.inverse(base), iws.points[p]), J)) inK.push_back(p);
  std::set<ParallelClass> inside;
  for (int p : inK)
    for (int v : members(J)) inside.insert(class_of_line(G, iws.points[p], v));
  out.classes_inside = static_cast<int>(inside.size());
  auto mask = iws.ws.side_mask();
  std::set<ParallelClass> separating;
  for (size_t w = 0; w < iws.ws.walls.size(); ++w) {
    std::set<char> s;
    for (int p : inK) s.insert(mask[w][p]);
    if (s.size() < 2) continue;
    separating.insert(iws.wall_class[w]);
    if (!inside.count(iws.wall_class[w])) {
      out.ok = false;
      out.witnesses.push_back("wall " + iws.ws.tags[w] + " separates the subcomplex without a line in it");
    }
  }
  for (const auto& c : inside)
    if (!separating.count(c)) {
      out.ok = false;
      out.witnesses.push_back("class " + class_id(G, c) + " has a line inside but no separating wall");
    }
  return out;
}

}  // namespace cubikit
