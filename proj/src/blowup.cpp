#include "cubikit/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace cubikit {

BlowUpData::BlowUpData(const Raag& G, Rule rule, std::string description)
    : G_(&G), rule_(std::move(rule)), description_(std::move(description)) {}

int BlowUpData::value(const ParallelClass& c, int n) const {
  auto it = tables_.find(c);
  if (it != tables_.end()) {
    auto jt = it->second.find(n);
    if (jt != it->second.end()) return jt->second;
  }
  if (!rule_) throw std::out_of_range("no table value for class " + class_id(*G_, c) + " at " + std::to_string(n));
  return rule_(c, n);
}

int BlowUpData::value_at(const Word& c, int j) const {
  ParallelClass cls = class_of_line(*G_, c, j);
  return value(cls, class_coordinate(*G_, cls, c));
}

void BlowUpData::set_table(const ParallelClass& c, std::map<int, int> table) { tables_[c] = std::move(table); }

std::string BlowUpData::to_json(const std::vector<ParallelClass>& classes, int window) const {
  nlohmann::ordered_json j;
  j["classes"] = nlohmann::ordered_json::array();
  for (const auto& c : classes) {
    nlohmann::ordered_json cj;
    cj["id"] = class_id(*G_, c);
    nlohmann::ordered_json table = nlohmann::ordered_json::object();
    for (int n = -window; n <= window; ++n) {
      Word chamber = G_->multiply(c.coset, G_->letter(c.direction, n));
      std::string key = chamber.empty() ? "1" : G_->format(chamber);
      table[key] = value(c, n);
    }
    cj["table"] = table;
    j["classes"].push_back(cj);
  }
  return j.dump();
}

BlowUpData BlowUpData::from_json(const Raag& G, const std::string& text) {
  BlowUpData data(G, nullptr, "tables");
  try {
    auto j = nlohmann::json::parse(text);
    for (const auto& cj : j.at("classes")) {
      ParallelClass c = parse_class_id(G, cj.at("id").get<std::string>());
      std::map<int, int> table;
      for (const auto& [key, val] : cj.at("table").items()) {
        Word chamber = G.parse(key);
        if (!G.in_subgroup(G.multiply(G.inverse(c.coset), chamber), class_support(G, c.direction)))
          throw WordError("chamber '" + key + "' is not in the parallel set of " + class_id(G, c));
        table[class_coordinate(G, c, chamber)] = val.get<int>();
      }
      data.set_table(c, std::move(table));
    }
  } catch (const nlohmann::json::exception& e) {
    throw WordError(std::string("malformed blow-up data JSON: ") + e.what());
  }
  return data;
}

BlowUpData identity_data(const Raag& G) {
  return BlowUpData(G, [](const ParallelClass&, int n) { return n; }, "identity");
}

BlowUpData floor_half_data(const Raag& G) {
  return BlowUpData(
      G, [](const ParallelClass&, int n) { return static_cast<int>(std::floor(n / 2.0)); }, "floor-half");
}

BlowUpData double_data(const Raag& G) {
  return BlowUpData(G, [](const ParallelClass&, int n) { return 2 * n; }, "double");
}

BlowUpData constant_data(const Raag& G, int value) {
  return BlowUpData(G, [value](const ParallelClass&, int) { return value; }, "constant");
}

BlowUpData random_blowup_data(const Raag& G, std::uint64_t seed, int spread) {
  return BlowUpData(
      G,
      [seed, spread](const ParallelClass& c, int n) {
        std::uint64_t h = seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(c.direction) * 0xBF58476D1CE4E5B9ull;
        for (Letter x : c.coset) h = (h ^ x) * 0x100000001B3ull;
        h ^= static_cast<std::uint64_t>(static_cast<std::int64_t>(n)) * 0x94D049BB133111EBull;
        h ^= h >> 31;
        h *= 0xD6E8FEB86659FD93ull;
        h ^= h >> 29;
        return static_cast<int>(h % static_cast<std::uint64_t>(2 * spread + 1)) - spread;
      },
      "random");
}

std::vector<ParallelClass> type_map(const Raag& G, const Residue& R) {
  std::vector<ParallelClass> out;
  for (int j : members(R.type)) out.push_back(class_of_line(G, R.base, j));
  return out;
}

FiberFunctor build_fiber_functor(const BlowUpData& data, const DavisBall& davis) {
  FiberFunctor F;
  F.davis = &davis;
  const CubeComplex& c = davis.complex;
  std::map<std::pair<int, int>, int> morphism_of;
  for (int e = 0; e < c.edge_count(); ++e) {
    int a = c.edge(e).u, b = c.edge(e).v;
    if (davis.residues[a].rank() > davis.residues[b].rank()) std::swap(a, b);
    FiberMorphism m;
    m.small = a;
    m.big = b;
    m.dropped = members(davis.residues[b].type & ~davis.residues[a].type).at(0);
    try {
      m.inserted_value = data.value_at(davis.residues[a].base, m.dropped);
    } catch (const std::exception& ex) {
      F.functorial = false;
      F.witnesses.push_back(ex.what());
      continue;
    }
    morphism_of[{a, b}] = static_cast<int>(F.morphisms.size());
    F.morphisms.push_back(m);
  }
  // Around each square the two composites insert the same pair of values, which is also
  // what makes the square's fibre the intersection of the two edge images at the top.
  for (int s = 0; s < c.square_count(); ++s) {
    auto sq = c.square(s);
    int bottom = sq[0];
    for (int v : sq)
      if (davis.residues[v].rank() < davis.residues[bottom].rank()) bottom = v;
    int pos = static_cast<int>(std::find(sq.begin(), sq.end(), bottom) - sq.begin());
    int x = sq[(pos + 1) % 4], top = sq[(pos + 2) % 4], y = sq[(pos + 3) % 4];
    auto get = [&](int a, int b) -> const FiberMorphism* {
      auto it = morphism_of.find({a, b});
      return it == morphism_of.end() ? nullptr : &F.morphisms[it->second];
    };
    auto bx = get(bottom, x), xt = get(x, top), by = get(bottom, y), yt = get(y, top);
    if (!bx || !xt || !by || !yt) continue;
    bool ok = bx->dropped == yt->dropped && by->dropped == xt->dropped && bx->inserted_value == yt->inserted_value &&
              by->inserted_value == xt->inserted_value;
    if (!ok) {
      F.functorial = false;
      F.one_determined = false;
      F.witnesses.push_back("square at " + c.name(bottom) + " does not commute");
    }
  }
  return F;
}

std::string blowup_vertex_name(const Raag& G, const Residue& R, const std::vector<int>& x) {
  std::string out = residue_name(G, R) + "@(";
  for (size_t i = 0; i < x.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(x[i]);
  }
  return out + ")";
}

int BlowUpComplex::find(const Residue& R, const std::vector<int>& x) const {
  auto it = by_name.find(blowup_vertex_name(*G, R, x));
  return it == by_name.end() ? -1 : it->second;
}

namespace {

int index_in(VertexSet type, int j) { return popcount(type & (bit(j) - 1)); }

std::vector<int> insert_coord(const std::vector<int>& x, VertexSet type, int j, int value) {
  std::vector<int> out = x;
  out.insert(out.begin() + index_in(type, j), value);
  return out;
}

std::vector<int> drop_coord(const std::vector<int>& x, VertexSet type, int j) {
  std::vector<int> out = x;
  out.erase(out.begin() + index_in(type, j));
  return out;
}

struct Neighbour {
  BlowUpVertex p;
  std::string label;
  bool vertical;
};

class YBuilder {
 public:
  YBuilder(const BlowUpData& data, const BlowUpWindow& w) : data_(data), G_(data.group()), w_(w) {}

  // Neighbours inside the window. `complete` is cleared when the untruncated complex has more.
  std::vector<Neighbour> neighbours(const BlowUpVertex& p, bool& complete) {
    std::vector<Neighbour> out;
    const Residue& R = p.residue;
    const auto& graph = G_.graph();
    auto dirs = members(R.type);
    for (size_t i = 0; i < dirs.size(); ++i) {
      for (int s : {1, -1}) {
        std::vector<int> x = p.x;
        x[i] += s;
        if (std::abs(x[i]) > w_.fiber_bound) {
          complete = false;
          continue;
        }
        out.push_back({{R, x}, graph.label(dirs[i]), true});
      }
    }
    for (size_t i = 0; i < dirs.size(); ++i) {
      int j = dirs[i];
      const Down& d = down(R, j);
      if (d.cut.count(p.x[i])) complete = false;
      auto it = d.admitted.find(p.x[i]);
      if (it == d.admitted.end()) continue;
      for (const Residue& Rs : it->second)
        out.push_back({{Rs, drop_coord(p.x, R.type, j)}, horizontal_label(graph.label(j)), false});
    }
    for (int j = 0; j < G_.rank(); ++j) {
      if (contains(R.type, j) || !graph.is_clique(R.type | bit(j))) continue;
      Residue up = residue_of(G_, R.base, R.type | bit(j));
      int h = data_.value_at(R.base, j);
      if (!davis_admits(G_, up, w_.davis) || std::abs(h) > w_.fiber_bound) {
        complete = false;
        continue;
      }
      out.push_back({{up, insert_coord(p.x, up.type, j, h)}, horizontal_label(graph.label(j)), false});
    }
    return out;
  }

 private:
  // Sub-residues of R dropping j, grouped by table value. `cut` holds values with a
  // preimage whose residue falls outside the window.
  struct Down {
    std::map<int, std::vector<Residue>> admitted;
    std::set<int> cut;
  };

  const Down& down(const Residue& R, int j) {
    std::string key = residue_name(G_, R) + "/" + std::to_string(j);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Down d;
    VertexSet sub = R.type & ~bit(j);
    ParallelClass cls = class_of_line(G_, R.base, j);
    int n0 = class_coordinate(G_, cls, R.base);
    int reach = w_.davis.base_length + static_cast<int>(R.base.size()) + 1;
    if (w_.davis.max_exponent >= 0) reach = std::min(reach, w_.davis.max_exponent + static_cast<int>(R.base.size()) + 1);
    // Scanning past the admissible range detects fibre points whose sub-residues leave the window.
    int scan = 2 * reach + 2 * w_.fiber_bound + 4;
    for (int k = -scan; k <= scan; ++k) {
      int h = data_.value(cls, n0 + k);
      Residue Rs = residue_of(G_, G_.multiply(R.base, G_.letter(j, k)), sub);
      if (std::abs(k) <= reach && davis_admits(G_, Rs, w_.davis))
        d.admitted[h].push_back(Rs);
      else
        d.cut.insert(h);
    }
    return cache_.emplace(key, std::move(d)).first->second;
  }

  const BlowUpData& data_;
  const Raag& G_;
  BlowUpWindow w_;
  std::unordered_map<std::string, Down> cache_;
};

}  // namespace

BlowUpComplex blowup_complex(const BlowUpData& data, const BlowUpWindow& window) {
  const Raag& G = data.group();
  BlowUpComplex Y;
  Y.G = &G;
  Y.window = window;
  YBuilder builder(data, window);
  std::vector<char> complete;
  auto add = [&](const BlowUpVertex& p, int depth) {
    std::string name = blowup_vertex_name(G, p.residue, p.x);
    int id = Y.complex.add_vertex(name, false);
    Y.complex.set_rank(id, p.residue.rank());
    Y.complex.set_tag(id, G.graph().format_set(p.residue.type));
    Y.points.push_back(p);
    Y.depth.push_back(depth);
    Y.by_name.emplace(name, id);
    complete.push_back(1);
    return id;
  };
  add({Residue{Word{}, 0}, {}}, 0);
  std::vector<std::vector<Neighbour>> nbrs;
  for (size_t head = 0; head < Y.points.size(); ++head) {
    bool full = true;
    auto ns = builder.neighbours(Y.points[head], full);
    complete[head] = full ? 1 : 0;
    if (window.radius < 0 || Y.depth[head] < window.radius) {
      for (const auto& nb : ns)
        if (Y.find(nb.p.residue, nb.p.x) < 0) add(nb.p, Y.depth[head] + 1);
    }
    nbrs.push_back(std::move(ns));
  }
  const int n = static_cast<int>(Y.points.size());
  for (int id = 0; id < n; ++id) {
    for (const auto& nb : nbrs[id]) {
      int other = Y.find(nb.p.residue, nb.p.x);
      if (other < 0) {
        complete[id] = 0;
        continue;
      }
      if (Y.complex.find_edge(id, other) >= 0) continue;
      int e = Y.complex.add_edge(id, other, nb.label);
      Y.complex.set_edge_kind(e, nb.vertical ? "vertical" : "horizontal");
    }
  }
  // A median graph has no K_{2,3}, so every 4-cycle bounds a square.
  for (int p = 0; p < n; ++p) {
    const auto& inc = Y.complex.incident(p);
    for (size_t i = 0; i < inc.size(); ++i)
      for (size_t k = i + 1; k < inc.size(); ++k) {
        int a = inc[i].first, b = inc[k].first;
        for (const auto& [c, e] : Y.complex.incident(a)) {
          (void)e;
          if (c == p || Y.complex.find_edge(c, b) < 0) continue;
          Y.complex.add_square(p, a, c, b);
        }
      }
  }
  Y.davis = davis_ball(G, window.davis);
  Y.q.assign(n, -1);
  for (int id = 0; id < n; ++id) {
    Y.q[id] = Y.davis.find(Y.points[id].residue);
    Y.complex.set_boundary(id, !complete[id]);
  }
  return Y;
}

void restrict_to_hull(CubeComplex& c, int base, int radius) {
  auto d = bfs_distances(c, base);
  std::vector<int> seed;
  for (int v = 0; v < c.vertex_count(); ++v)
    if (d[v] >= 0 && d[v] <= radius) seed.push_back(v);
  auto hull = convex_hull(c, seed);
  std::vector<char> in(c.vertex_count(), 0);
  for (int v : hull) {
    if (c.boundary(v)) throw ComplexError("convex hull reaches the truncation boundary");
    in[v] = 1;
  }
  for (int v = 0; v < c.vertex_count(); ++v) c.set_boundary(v, !in[v]);
}

CubeComplex quotient_target(const BlowUpComplex& Y, std::vector<int>* q_out) {
  std::set<int> image;
  for (int v = 0; v < Y.complex.vertex_count(); ++v)
    if (!Y.complex.boundary(v)) {
      if (Y.q[v] < 0) throw ComplexError("interior vertex of Y lies over a residue outside the Davis window");
      image.insert(Y.q[v]);
    }
  std::vector<int> old_to_new;
  std::vector<char> flags(Y.davis.complex.vertex_count(), 0);
  CubeComplex target =
      induced_subcomplex(Y.davis.complex, std::vector<int>(image.begin(), image.end()), &old_to_new, &flags);
  if (q_out) {
    q_out->assign(Y.complex.vertex_count(), -1);
    for (int v = 0; v < Y.complex.vertex_count(); ++v)
      if (!Y.complex.boundary(v)) (*q_out)[v] = old_to_new[Y.q[v]];
  }
  return target;
}

BlowUpData one_data(const BlowUpComplex& Y) {
  const Raag& G = *Y.G;
  BlowUpData out(G, nullptr, "1-data");
  std::map<ParallelClass, std::map<int, int>> tables;
  for (int v = 0; v < Y.complex.vertex_count(); ++v) {
    const BlowUpVertex& p = Y.points[v];
    if (p.residue.rank() != 1) continue;
    int j = members(p.residue.type)[0];
    for (const auto& [w, e] : Y.complex.incident(v)) {
      (void)e;
      const BlowUpVertex& c = Y.points[w];
      if (c.residue.rank() != 0) continue;
      ParallelClass cls = class_of_line(G, c.residue.base, j);
      int n = class_coordinate(G, cls, c.residue.base);
      auto [it, fresh] = tables[cls].emplace(n, p.x[0]);
      if (!fresh && it->second != p.x[0])
        throw std::logic_error("chamber " + G.format(c.residue.base) + " is attached to two fibre points of " +
                               class_id(G, cls));
    }
  }
  for (auto& [cls, t] : tables) out.set_table(cls, std::move(t));
  return out;
}

std::vector<std::string> exploded_names(const BlowUpComplex& Y) {
  const Raag& G = *Y.G;
  std::vector<std::string> out;
  for (const auto& p : Y.points) {
    auto dirs = members(p.residue.type);
    std::vector<int> offsets;
    for (size_t i = 0; i < dirs.size(); ++i) {
      ParallelClass cls = class_of_line(G, p.residue.base, dirs[i]);
      offsets.push_back(p.x[i] - class_coordinate(G, cls, p.residue.base));
    }
    out.push_back(exploded_name(G, product_chamber(G, p.residue, offsets), p.residue.type));
  }
  return out;
}

LocalFiniteness local_finiteness_report(const BlowUpData& data, const std::vector<ParallelClass>& classes,
                                        int window) {
  LocalFiniteness out;
  for (const auto& c : classes) {
    std::map<int, int> count;
    for (int n = -window; n <= window; ++n) ++count[data.value(c, n)];
    // Values reached from the middle half have all nearby preimages inside the window.
    int inner = window / 2;
    std::set<int> image;
    for (int n = -inner; n <= inner; ++n) image.insert(data.value(c, n));
    for (int y : image) out.max_preimage = std::max(out.max_preimage, count[y]);
    if (image.empty()) continue;
    auto all = std::set<int>();
    for (const auto& [y, k] : count) {
      (void)k;
      all.insert(y);
    }
    for (int y = *image.begin(); y <= *image.rbegin(); ++y) {
      auto hi = all.lower_bound(y);
      int d = std::numeric_limits<int>::max();
      if (hi != all.end()) d = *hi - y;
      if (hi != all.begin()) d = std::min(d, y - *std::prev(hi));
      out.density = std::max(out.density, d);
    }
  }
  return out;
}

bool downward_complex_check(const BlowUpComplex& Y, const BlowUpData& data, const Residue& R) {
  const Raag& G = *Y.G;
  auto dirs = members(R.type);
  const int k = static_cast<int>(dirs.size());
  // Factor j of the mapping-cylinder product: line points (0, x) and tips (1, m).
  using Coord = std::pair<int, int>;
  std::map<std::vector<Coord>, int> tuple_of;
  std::vector<int> vs;
  std::vector<std::vector<Coord>> tuples;
  for (int v = 0; v < Y.complex.vertex_count(); ++v) {
    const BlowUpVertex& p = Y.points[v];
    if (!residue_contains(G, R, p.residue)) continue;
    auto coords = product_coordinates(G, R, p.residue.base);
    std::vector<Coord> t(k);
    for (int i = 0; i < k; ++i) {
      if (contains(p.residue.type, dirs[i]))
        t[i] = {0, p.x[index_in(p.residue.type, dirs[i])]};
      else
        t[i] = {1, coords[i]};
    }
    if (!tuple_of.emplace(t, v).second) return false;
    vs.push_back(v);
    tuples.push_back(t);
  }
  auto tip_value = [&](int i, int m) {
    Word c = G.multiply(R.base, G.letter(dirs[i], m));
    return data.value_at(c, dirs[i]);
  };
  auto cylinder_edge = [&](int i, Coord a, Coord b) {
    if (a.first == 0 && b.first == 0) return std::abs(a.second - b.second) == 1;
    if (a.first == 1 && b.first == 1) return false;
    if (a.first == 0) std::swap(a, b);
    return b.second == tip_value(i, a.second);
  };
  std::set<int> in_set(vs.begin(), vs.end());
  for (size_t a = 0; a < vs.size(); ++a) {
    for (const auto& [w, e] : Y.complex.incident(vs[a])) {
      (void)e;
      if (!in_set.count(w)) continue;
      const auto& ta = tuples[a];
      const auto& tb = tuples[std::lower_bound(vs.begin(), vs.end(), w) - vs.begin()];
      int diff = -1, count = 0;
      for (int i = 0; i < k; ++i)
        if (ta[i] != tb[i]) diff = i, ++count;
      if (count != 1 || !cylinder_edge(diff, ta[diff], tb[diff])) return false;
    }
  }
  // Every product edge between image tuples is present, and interior tuples span a product set.
  for (size_t a = 0; a < vs.size(); ++a)
    for (size_t b = a + 1; b < vs.size(); ++b) {
      int diff = -1, count = 0;
      for (int i = 0; i < k; ++i)
        if (tuples[a][i] != tuples[b][i]) diff = i, ++count;
      if (count == 1 && cylinder_edge(diff, tuples[a][diff], tuples[b][diff]) &&
          Y.complex.find_edge(vs[a], vs[b]) < 0)
        return false;
    }
  std::vector<std::set<Coord>> factor(k);
  for (size_t a = 0; a < vs.size(); ++a)
    if (!Y.complex.boundary(vs[a]))
      for (int i = 0; i < k; ++i) factor[i].insert(tuples[a][i]);
  std::vector<Coord> t(k);
  std::function<bool(int)> rec = [&](int i) {
    if (i == k) return tuple_of.count(t) > 0;
    for (const Coord& c : factor[i]) {
      t[i] = c;
      if (!rec(i + 1)) return false;
    }
    return true;
  };
  return rec(0);
}

EtaReport eta_quasi_morphism(const BlowUpComplex& YA, const BlowUpComplex& YB,
                             const std::function<int(const ParallelClass&, int)>& f, int max_sources) {
  const Raag& G = *YA.G;
  EtaReport out;
  const int n = YA.complex.vertex_count();
  out.vertex_map.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    const BlowUpVertex& p = YA.points[v];
    auto dirs = members(p.residue.type);
    std::vector<int> x(dirs.size());
    for (size_t i = 0; i < dirs.size(); ++i) x[i] = f(class_of_line(G, p.residue.base, dirs[i]), p.x[i]);
    out.vertex_map[v] = YB.find(p.residue, x);
  }
  auto interior = YA.complex.interior_vertices();
  std::set<int> images;
  bool injective = true;
  for (int v : interior) {
    if (out.vertex_map[v] < 0 || YB.complex.boundary(out.vertex_map[v])) injective = false;
    else if (!images.insert(out.vertex_map[v]).second) injective = false;
  }
  bool edges_to_edges = true;
  for (int e = 0; e < YA.complex.edge_count(); ++e) {
    int a = YA.complex.edge(e).u, b = YA.complex.edge(e).v;
    if (YA.complex.boundary(a) || YA.complex.boundary(b)) continue;
    int fa = out.vertex_map[a], fb = out.vertex_map[b];
    if (fa < 0 || fb < 0) continue;
    if (fa == fb) {
      edges_to_edges = false;
      continue;
    }
    if (YB.complex.find_edge(fa, fb) < 0) out.cubical = false, edges_to_edges = false;
  }
  int interior_b = static_cast<int>(YB.complex.interior_vertices().size());
  out.isomorphism = injective && edges_to_edges && out.cubical && static_cast<int>(images.size()) == interior_b;
  int step = std::max<int>(1, static_cast<int>(interior.size()) / std::max(1, max_sources));
  for (size_t s = 0; s < interior.size(); s += step) {
    int src = interior[s];
    if (out.vertex_map[src] < 0) continue;
    auto dA = bfs_distances(YA.complex, src);
    auto dB = bfs_distances(YB.complex, out.vertex_map[src]);
    for (int v : interior) {
      if (v == src || out.vertex_map[v] < 0 || dA[v] < 0) continue;
      int b = dB[out.vertex_map[v]];
      if (b < 0) continue;
      ++out.pairs;
      out.lipschitz = std::max(out.lipschitz, static_cast<double>(b) / dA[v]);
      if (b > 0)
        out.co_lipschitz = std::max(out.co_lipschitz, static_cast<double>(dA[v]) / b);
      else
        out.additive = std::max(out.additive, dA[v]);
    }
  }
  return out;
}

SectionDistortion chamber_section_distortion(const BlowUpComplex& Y, const std::vector<Word>& chambers, double L,
                                             int max_sources) {
  const Raag& G = *Y.G;
  SectionDistortion out;
  std::vector<int> ids;
  for (const Word& c : chambers) {
    int id = Y.find(Residue{c, 0}, {});
    if (id < 0) throw ComplexError("chamber " + G.format(c) + " is not in the blow-up window");
    ids.push_back(id);
  }
  const int n = static_cast<int>(ids.size());
  int step = std::max(1, n / std::max(1, max_sources));
  for (int s = 0; s < n; s += step) {
    auto d = bfs_distances(Y.complex, ids[s]);
    for (int t = 0; t < n; ++t) {
      if (t == s) continue;
      int dy = d[ids[t]], dg = G.distance(chambers[s], chambers[t]);
      if (dy < 0) throw ComplexError("blow-up window is disconnected");
      ++out.pairs;
      out.lipschitz = std::max(out.lipschitz, static_cast<double>(dy) / dg);
      out.co_lipschitz = std::max(out.co_lipschitz, static_cast<double>(dg) / dy);
      double excess = std::max(dy - L * dg, dg - L * dy);
      out.additive = std::max(out.additive, static_cast<int>(std::ceil(excess)));
    }
  }
  return out;
}

namespace {

struct OrbitLookup {
  const OrbitResolution* resolution;
  ActionWord word;
};

}  // namespace

BlowUpData equivariant_data(const GroupAction& A, const std::vector<OrbitResolution>& resolutions) {
  auto lookup = std::make_shared<std::map<ParallelClass, OrbitLookup>>();
  for (const auto& r : resolutions)
    for (size_t i = 0; i < r.orbit.members.size(); ++i) (*lookup)[r.orbit.members[i]] = {&r, r.orbit.words[i]};
  const GroupAction* act = &A;
  return BlowUpData(
      A.group(),
      [act, lookup](const ParallelClass& c, int n) {
        auto it = lookup->find(c);
        if (it == lookup->end())
          throw std::out_of_range("class " + class_id(act->group(), c) + " is not covered by any orbit");
        auto [rep, m] = transport(*act, inverse_word(it->second.word), c, n);
        if (!(rep == it->second.resolution->orbit.representative))
          throw std::logic_error("orbit word does not return to the representative");
        return it->second.resolution->block_map(m);
      },
      "equivariant");
}

EquivariantBlowUp equivariant_blowup(const GroupAction& A, const std::vector<OrbitResolution>& resolutions,
                                     const BlowUpWindow& window, int preimage_window) {
  const Raag& G = A.group();
  EquivariantBlowUp out;
  BlowUpData data = equivariant_data(A, resolutions);
  out.Y = blowup_complex(data, window);
  const BlowUpComplex& Y = out.Y;
  const int n = Y.complex.vertex_count();
  auto interior = Y.complex.interior_vertices();
  out.checked_vertices = static_cast<int>(interior.size());
  for (int gen = 0; gen < A.size(); ++gen) {
    std::vector<int> map(n, -1);
    for (int v : interior) {
      const BlowUpVertex& p = Y.points[v];
      Residue img;
      try {
        img = image_residue(A, 2 * gen, p.residue);
      } catch (const std::exception& ex) {
        out.well_defined = false;
        out.witnesses.push_back(ex.what());
        continue;
      }
      auto dirs = members(p.residue.type);
      std::vector<int> x(dirs.size());
      std::vector<std::pair<int, int>> placed;
      bool ok = true;
      for (size_t i = 0; i < dirs.size(); ++i) {
        ParallelClass cls = class_of_line(G, p.residue.base, dirs[i]);
        ParallelClass target = image_class(A, 2 * gen, cls);
        std::optional<int> value;
        int base = class_coordinate(G, cls, p.residue.base);
        for (int m = base - preimage_window; m <= base + preimage_window; ++m) {
          if (data.value(cls, m) != p.x[i]) continue;
          auto [c2, m2] = transport(A, ActionWord{2 * gen}, cls, m);
          int y = data.value(c2, m2);
          if (value && *value != y) {
            out.well_defined = false;
            out.witnesses.push_back("fibre map of " + A.generator(gen).name + " is not well defined at " +
                                    Y.complex.name(v));
          }
          value = y;
        }
        if (!value) {
          ok = false;
          break;
        }
        placed.emplace_back(target.direction, *value);
      }
      if (!ok) continue;
      std::sort(placed.begin(), placed.end());
      for (size_t i = 0; i < placed.size(); ++i) x[i] = placed[i].second;
      map[v] = Y.find(img, x);
      if (map[v] >= 0 && Y.q[map[v]] != Y.davis.find(img)) out.commutes_with_q = false;
    }
    for (int e = 0; e < Y.complex.edge_count(); ++e) {
      int a = Y.complex.edge(e).u, b = Y.complex.edge(e).v;
      if (map[a] < 0 || map[b] < 0) continue;
      if (Y.complex.find_edge(map[a], map[b]) < 0) {
        out.edges_preserved = false;
        out.witnesses.push_back(A.generator(gen).name + " breaks edge " + Y.complex.name(a) + " - " +
                                Y.complex.name(b));
      }
    }
    out.generator_maps.push_back(std::move(map));
  }
  return out;
}

}  // namespace cubikit
