#include "cubikit/building.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace cubikit {

bool Residue::operator<(const Residue& o) const {
  if (type != o.type) return type < o.type;
  if (base.size() != o.base.size()) return base.size() < o.base.size();
  return base < o.base;
}

Residue residue_of(const Raag& G, const Word& chamber, VertexSet type) {
  return {G.min_coset_rep(chamber, type), type};
}

bool residue_contains_chamber(const Raag& G, const Residue& R, const Word& c) {
  return G.in_subgroup(G.multiply(G.inverse(R.base), c), R.type);
}

bool residue_contains(const Raag& G, const Residue& big, const Residue& small) {
  return (small.type & ~big.type) == 0 && residue_contains_chamber(G, big, small.base);
}

std::string residue_name(const Raag& G, const Residue& R) { return exploded_name(G, R.base, R.type); }

std::string residue_to_json(const Raag& G, const Residue& R) {
  nlohmann::ordered_json j;
  j["base"] = G.format(R.base);
  std::vector<std::string> labels;
  for (int v : members(R.type)) labels.push_back(G.graph().label(v));
  j["type"] = labels;
  return j.dump();
}

Residue residue_from_json(const Raag& G, const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    VertexSet type = G.graph().parse_set(j.at("type").get<std::vector<std::string>>());
    return residue_of(G, G.parse(j.at("base").get<std::string>()), type);
  } catch (const nlohmann::json::exception& e) {
    throw WordError(std::string("malformed residue JSON: ") + e.what());
  }
}

namespace {

int max_syllable(const Word& w) {
  int best = 0;
  size_t i = 0;
  while (i < w.size()) {
    size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    best = std::max(best, static_cast<int>(j - i));
    i = j;
  }
  return best;
}

}  // namespace

bool davis_admits(const Raag& G, const Residue& R, const DavisWindow& w) {
  (void)G;
  if (static_cast<int>(R.base.size()) > w.base_length) return false;
  if (w.max_exponent >= 0 && max_syllable(R.base) > w.max_exponent) return false;
  return true;
}

DavisBall davis_ball(const Raag& G, int radius, int margin) {
  DavisWindow w;
  w.base_length = radius;
  w.margin = margin;
  return davis_ball(G, w);
}

DavisBall davis_ball(const Raag& G, const DavisWindow& window) {
  if (window.base_length < 0) throw std::invalid_argument("radius must be non-negative");
  DavisBall ball;
  ball.window = window;
  const auto& graph = G.graph();
  auto cs = cliques(graph);
  RaagBall chambers = ball_X(G, window.base_length, 0);
  auto boundary = [&](const Residue& R) {
    if (static_cast<int>(R.base.size()) > window.base_length - window.margin) return true;
    return window.max_exponent >= 0 && max_syllable(R.base) > window.max_exponent - window.margin;
  };
  for (const Word& c : chambers.elements) {
    for (VertexSet J : cs) {
      Residue R = residue_of(G, c, J);
      if (ball.index.count(R) || !davis_admits(G, R, window)) continue;
      int id = ball.complex.add_vertex(residue_name(G, R), boundary(R));
      ball.complex.set_rank(id, R.rank());
      ball.complex.set_tag(id, graph.format_set(J));
      ball.residues.push_back(R);
      ball.index.emplace(R, id);
    }
  }
  const int n = static_cast<int>(ball.residues.size());
  for (int id = 0; id < n; ++id) {
    const Residue small = ball.residues[id];
    for (int j = 0; j < G.rank(); ++j) {
      if (contains(small.type, j) || !graph.is_clique(small.type | bit(j))) continue;
      int big = ball.find(residue_of(G, small.base, small.type | bit(j)));
      if (big >= 0) ball.complex.add_edge(id, big, graph.label(j));
    }
  }
  for (int id = 0; id < n; ++id) {
    const Residue small = ball.residues[id];
    for (int a = 0; a < G.rank(); ++a)
      for (int b = a + 1; b < G.rank(); ++b) {
        VertexSet top = small.type | bit(a) | bit(b);
        if (contains(small.type, a) || contains(small.type, b) || !graph.is_clique(top)) continue;
        int ra = ball.find(residue_of(G, small.base, small.type | bit(a)));
        int rb = ball.find(residue_of(G, small.base, small.type | bit(b)));
        int rab = ball.find(residue_of(G, small.base, top));
        if (ra >= 0 && rb >= 0 && rab >= 0) ball.complex.add_square(id, ra, rab, rb);
      }
  }
  return ball;
}

std::vector<int> w_distance(const Raag& G, const Word& c1, const Word& c2) {
  return G.coxeter_image(G.multiply(G.inverse(c1), c2));
}

int gallery_distance(const Raag& G, const Word& c1, const Word& c2) {
  return static_cast<int>(w_distance(G, c1, c2).size());
}

std::string format_coxeter(const Raag& G, const std::vector<int>& w) {
  std::string out;
  for (int g : w) {
    if (!out.empty()) out += ' ';
    out += G.graph().label(g);
  }
  return out;
}

Word proj_residue(const Raag& G, const Residue& R, const Word& c) {
  Word x = G.multiply(G.inverse(R.base), c);
  return G.multiply(R.base, G.prefix_split(x, R.type).first);
}

Word product_chamber(const Raag& G, const Residue& R, const std::vector<int>& coords) {
  auto dirs = members(R.type);
  if (coords.size() != dirs.size()) throw std::invalid_argument("coordinate count differs from residue rank");
  Word z;
  for (size_t i = 0; i < dirs.size(); ++i) {
    Word step = G.letter(dirs[i], coords[i]);
    z.insert(z.end(), step.begin(), step.end());
  }
  return G.multiply(R.base, G.normal_form(z));
}

std::vector<int> product_coordinates(const Raag& G, const Residue& R, const Word& c) {
  Word x = G.multiply(G.inverse(R.base), c);
  if (!G.in_subgroup(x, R.type)) throw std::invalid_argument("chamber is not in the residue");
  std::vector<int> out;
  for (int j : members(R.type)) out.push_back(G.exponent_sum(x, j));
  return out;
}

Word proj_residue_bruteforce(const Raag& G, const Residue& R, const Word& c) {
  auto dirs = members(R.type);
  const int M = G.distance(R.base, c) + 1;
  std::vector<int> coords(dirs.size(), -M);
  int best = -1, count = 0;
  Word best_c;
  while (true) {
    Word cand = product_chamber(G, R, coords);
    int d = gallery_distance(G, cand, c);
    if (best < 0 || d < best) {
      best = d;
      best_c = cand;
      count = 1;
    } else if (d == best) {
      ++count;
    }
    size_t i = 0;
    while (i < coords.size() && coords[i] == M) coords[i++] = -M;
    if (i == coords.size()) break;
    ++coords[i];
  }
  if (count != 1) throw std::logic_error("residue projection is not unique on the window");
  return best_c;
}

ParallelismResult are_parallel(const Raag& G, const Residue& R1, const Residue& R2, int window) {
  ParallelismResult out;
  if (R1.type != R2.type) return out;
  VertexSet J = R1.type;
  VertexSet big = J | orthogonal_complement(G.graph(), J);
  out.parallel = G.in_subgroup(G.multiply(G.inverse(R1.base), R2.base), big);
  // Each projection is a residue; it is all of the target exactly when every direction moves it.
  auto full = [&](const Residue& from, const Residue& to) {
    Word p0 = proj_residue(G, to, from.base);
    for (int j : members(J))
      if (proj_residue(G, to, G.multiply(from.base, G.letter(j, 1))) == p0) return false;
    return true;
  };
  out.by_projection = full(R1, R2) && full(R2, R1);
  if (out.parallel) {
    auto dirs = members(J);
    std::vector<int> coords(dirs.size(), -window);
    while (true) {
      Word c1 = product_chamber(G, R1, coords);
      out.map.emplace_back(c1, proj_residue(G, R2, c1));
      size_t i = 0;
      while (i < coords.size() && coords[i] == window) coords[i++] = -window;
      if (i == coords.size()) break;
      ++coords[i];
    }
  }
  return out;
}

Residue parallel_set(const Raag& G, const Residue& R) {
  VertexSet big = R.type | orthogonal_complement(G.graph(), R.type);
  return residue_of(G, R.base, big);
}

ProductDecomposition product_decomposition(const Raag& G, const Residue& R) {
  ProductDecomposition out;
  for (int j : members(R.type)) {
    out.factors.push_back(residue_of(G, R.base, bit(j)));
    out.directions.push_back(j);
  }
  return out;
}

bool rank_preserving_check(const CubeComplex& c, const std::vector<int>& vertex_map) {
  for (int v = 0; v < c.vertex_count(); ++v) {
    if (c.boundary(v)) continue;
    int w = vertex_map.at(v);
    if (w < 0 || c.rank(w) != c.rank(v)) return false;
  }
  return true;
}

}  // namespace cubikit
