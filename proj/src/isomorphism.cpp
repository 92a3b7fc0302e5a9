#include "cubikit/isomorphism.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace cubikit {

namespace {

std::string vertex_key(const CubeComplex& c, int v, const IsoOptions& opt) {
  std::string key;
  if (opt.vertex_tags) key += c.tag(v);
  key += '#';
  if (opt.boundary_flags) key += c.boundary(v) ? 'b' : 'i';
  return key;
}

// Joint colour refinement of both complexes so colour ids are comparable.
std::pair<std::vector<int>, std::vector<int>> refine(const CubeComplex& a, const CubeComplex& b,
                                                     const IsoOptions& opt) {
  std::map<std::string, int> start;
  std::vector<int> ca(a.vertex_count()), cb(b.vertex_count());
  auto initial = [&](const CubeComplex& c, std::vector<int>& col, bool is_a) {
    for (int v = 0; v < c.vertex_count(); ++v) {
      std::string key = vertex_key(c, v, opt);
      for (size_t i = 0; i < opt.seeds.size(); ++i) {
        int s = is_a ? opt.seeds[i].first : opt.seeds[i].second;
        if (s == v) key += "|seed" + std::to_string(i);
      }
      col[v] = start.emplace(key, static_cast<int>(start.size())).first->second;
    }
  };
  initial(a, ca, true);
  initial(b, cb, false);
  size_t classes = start.size();
  while (true) {
    std::map<std::pair<int, std::vector<std::pair<std::string, int>>>, int> sig;
    auto step = [&](const CubeComplex& c, const std::vector<int>& col) {
      std::vector<int> next(c.vertex_count());
      for (int v = 0; v < c.vertex_count(); ++v) {
        std::vector<std::pair<std::string, int>> nb;
        for (auto [w, e] : c.incident(v)) nb.emplace_back(opt.edge_labels ? c.edge(e).label : std::string(), col[w]);
        std::sort(nb.begin(), nb.end());
        auto key = std::make_pair(col[v], std::move(nb));
        next[v] = sig.emplace(std::move(key), static_cast<int>(sig.size())).first->second;
      }
      return next;
    };
    auto na = step(a, ca);
    auto nb = step(b, cb);
    ca = std::move(na);
    cb = std::move(nb);
    if (sig.size() == classes) break;
    classes = sig.size();
  }
  return {ca, cb};
}

struct Search {
  const CubeComplex& a;
  const CubeComplex& b;
  const IsoOptions& opt;
  const std::vector<int>& ca;
  const std::vector<int>& cb;
  std::vector<int> order;   // vertices of a in search order
  std::vector<int> parent;  // an earlier neighbour in the order, or -1
  std::vector<int> map, inv;
  std::vector<std::vector<int>> by_colour_b;

  bool consistent(int v, int w) const {
    if (ca[v] != cb[w] || inv[w] >= 0) return false;
    for (auto [x, e] : a.incident(v)) {
      if (map[x] < 0) continue;
      int f = b.find_edge(w, map[x]);
      if (f < 0) return false;
      if (opt.edge_labels && a.edge(e).label != b.edge(f).label) return false;
    }
    // Mapped neighbours of w must come from neighbours of v.
    for (auto [y, f] : b.incident(w)) {
      (void)f;
      if (inv[y] >= 0 && a.find_edge(v, inv[y]) < 0) return false;
    }
    return true;
  }

  bool run(size_t k) {
    if (k == order.size()) return true;
    int v = order[k];
    std::vector<int> cands;
    if (parent[k] >= 0) {
      for (auto [w, f] : b.incident(map[parent[k]])) {
        (void)f;
        cands.push_back(w);
      }
    } else {
      cands = by_colour_b[ca[v]];
    }
    for (int w : cands) {
      if (!consistent(v, w)) continue;
      map[v] = w;
      inv[w] = v;
      if (run(k + 1)) return true;
      map[v] = -1;
      inv[w] = -1;
    }
    return false;
  }
};

}  // namespace

bool is_isomorphism(const CubeComplex& a, const CubeComplex& b, const std::vector<int>& map,
                    const IsoOptions& opt) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() ||
      a.square_count() != b.square_count() || static_cast<int>(map.size()) != a.vertex_count())
    return false;
  std::vector<char> hit(b.vertex_count(), 0);
  for (int v = 0; v < a.vertex_count(); ++v) {
    int w = map[v];
    if (w < 0 || w >= b.vertex_count() || hit[w]) return false;
    hit[w] = 1;
    if (vertex_key(a, v, opt) != vertex_key(b, w, opt)) return false;
  }
  for (int e = 0; e < a.edge_count(); ++e) {
    int f = b.find_edge(map[a.edge(e).u], map[a.edge(e).v]);
    if (f < 0) return false;
    if (opt.edge_labels && a.edge(e).label != b.edge(f).label) return false;
  }
  for (int s = 0; s < a.square_count(); ++s) {
    const auto& sq = a.square(s);
    if (b.fourth_corner(map[sq[0]], map[sq[1]], map[sq[3]]) != map[sq[2]]) return false;
  }
  return true;
}

std::optional<std::vector<int>> find_isomorphism(const CubeComplex& a, const CubeComplex& b,
                                                 const IsoOptions& opt) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() ||
      a.square_count() != b.square_count())
    return std::nullopt;
  auto [ca, cb] = refine(a, b, opt);
  {
    std::vector<int> sa = ca, sb = cb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }
  const int n = a.vertex_count();
  Search s{a, b, opt, ca, cb, {}, {}, std::vector<int>(n, -1), std::vector<int>(n, -1), {}};
  int max_colour = 0;
  for (int c : cb) max_colour = std::max(max_colour, c + 1);
  for (int c : ca) max_colour = std::max(max_colour, c + 1);
  s.by_colour_b.assign(max_colour, {});
  for (int w = 0; w < n; ++w) s.by_colour_b[cb[w]].push_back(w);
  std::map<int, int> colour_size;
  for (int c : ca) ++colour_size[c];

  // Breadth-first order per component, each component rooted at a vertex of rarest colour.
  std::vector<char> seen(n, 0);
  std::vector<int> roots(n);
  for (int v = 0; v < n; ++v) roots[v] = v;
  std::stable_sort(roots.begin(), roots.end(),
                   [&](int x, int y) { return colour_size[ca[x]] < colour_size[ca[y]]; });
  for (int r : roots) {
    if (seen[r]) continue;
    std::deque<std::pair<int, int>> q{{r, -1}};
    seen[r] = 1;
    while (!q.empty()) {
      auto [v, p] = q.front();
      q.pop_front();
      s.order.push_back(v);
      s.parent.push_back(p);
      for (auto [w, e] : a.incident(v)) {
        (void)e;
        if (!seen[w]) {
          seen[w] = 1;
          q.push_back({w, v});
        }
      }
    }
  }
  if (!s.run(0)) return std::nullopt;
  if (!is_isomorphism(a, b, s.map, opt)) return std::nullopt;
  return s.map;
}

}  // namespace cubikit
