#include "cubikit/raag.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace cubikit {

Raag::Raag(DefiningGraph g) : graph_(std::move(g)) {}

void Raag::append_reduced(Word& w, Letter x) const {
  for (size_t i = w.size(); i-- > 0;) {
    Letter y = w[i];
    if (y == inverse_letter(x)) {
      w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
      return;
    }
    if (!commute(gen_of(y), gen_of(x))) break;
  }
  w.push_back(x);
}

// Greedy lexicographic minimum among all shuffles of a reduced word: at each step take the
// smallest letter that commutes past everything still in front of it.
Word Raag::lex_shuffle(const Word& w) const {
  Word rest = w, out;
  out.reserve(w.size());
  while (!rest.empty()) {
    size_t best = 0;
    std::vector<int> before;
    for (size_t i = 0; i < rest.size(); ++i) {
      int g = gen_of(rest[i]);
      bool movable = true;
      for (int b : before)
        if (!commute(b, g)) {
          movable = false;
          break;
        }
      if (movable && (i == 0 || rest[i] < rest[best])) best = i;
      before.push_back(g);
    }
    out.push_back(rest[best]);
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

Word Raag::normal_form(const Word& raw) const {
  Word w;
  for (Letter x : raw) {
    if (gen_of(x) >= rank()) throw WordError("letter refers to an unknown generator");
    append_reduced(w, x);
  }
  return lex_shuffle(w);
}

Word Raag::multiply(const Word& a, const Word& b) const {
  Word w = a;
  for (Letter x : b) append_reduced(w, x);
  return lex_shuffle(w);
}

Word Raag::inverse(const Word& a) const {
  Word w(a.rbegin(), a.rend());
  for (auto& x : w) x = inverse_letter(x);
  return lex_shuffle(w);
}

Word Raag::letter(int gen, int exp) const {
  if (gen < 0 || gen >= rank()) throw WordError("unknown generator index");
  return Word(static_cast<size_t>(std::abs(exp)), make_letter(gen, exp));
}

Word Raag::parse(std::string_view text) const {
  Word raw;
  size_t i = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '*' || c == '\t' || c == '\n'; };
  while (i < text.size()) {
    while (i < text.size() && is_sep(text[i])) ++i;
    if (i >= text.size()) break;
    size_t j = i;
    while (j < text.size() && !is_sep(text[j])) ++j;
    std::string token(text.substr(i, j - i));
    i = j;
    std::string label = token;
    long exp = 1;
    auto caret = token.find('^');
    if (caret != std::string::npos) {
      label = token.substr(0, caret);
      std::string e = token.substr(caret + 1);
      if (!e.empty() && e.front() == '{') {
        if (e.back() != '}') throw WordError("unbalanced braces in '" + token + "'");
        e = e.substr(1, e.size() - 2);
      }
      if (e.empty()) throw WordError("missing exponent in '" + token + "'");
      size_t used = 0;
      try {
        exp = std::stol(e, &used);
      } catch (const std::exception&) {
        throw WordError("bad exponent in '" + token + "'");
      }
      if (used != e.size()) throw WordError("bad exponent in '" + token + "'");
      if (std::abs(exp) > 1000000) throw WordError("exponent too large in '" + token + "'");
    }
    if (!graph_.has_vertex(label)) {
      if (label == "1" && caret == std::string::npos) continue;
      throw WordError("unknown generator '" + label + "'");
    }
    int g = graph_.index_of(label);
    for (long k = 0; k < std::abs(exp); ++k) raw.push_back(make_letter(g, exp < 0 ? -1 : 1));
  }
  return normal_form(raw);
}

std::string Raag::format(const Word& w) const {
  std::string out;
  size_t i = 0;
  while (i < w.size()) {
    size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    long exp = static_cast<long>(j - i) * sign_of(w[i]);
    if (!out.empty()) out += ' ';
    out += graph_.label(gen_of(w[i]));
    if (exp != 1) out += "^" + std::to_string(exp);
    i = j;
  }
  return out;
}

int Raag::distance(const Word& a, const Word& b) const {
  return static_cast<int>(multiply(inverse(a), b).size());
}

int Raag::exponent_sum(const Word& w, int gen) const {
  int s = 0;
  for (Letter x : w)
    if (gen_of(x) == gen) s += sign_of(x);
  return s;
}

bool Raag::in_subgroup(const Word& w, VertexSet J) const {
  for (Letter x : w)
    if (!contains(J, gen_of(x))) return false;
  return true;
}

std::pair<Word, Word> Raag::suffix_split(const Word& x, VertexSet J) const {
  std::vector<char> removed(x.size(), 0);
  std::vector<int> kept_after;  // generators of kept letters to the right
  for (size_t i = x.size(); i-- > 0;) {
    int g = gen_of(x[i]);
    bool movable = contains(J, g);
    for (int k : kept_after)
      if (!movable || !commute(k, g)) {
        movable = false;
        break;
      }
    if (movable) removed[i] = 1;
    else kept_after.push_back(g);
  }
  Word rest, suffix;
  for (size_t i = 0; i < x.size(); ++i) (removed[i] ? suffix : rest).push_back(x[i]);
  return {lex_shuffle(rest), lex_shuffle(suffix)};
}

std::pair<Word, Word> Raag::prefix_split(const Word& x, VertexSet J) const {
  std::vector<char> removed(x.size(), 0);
  std::vector<int> kept_before;
  for (size_t i = 0; i < x.size(); ++i) {
    int g = gen_of(x[i]);
    bool movable = contains(J, g);
    for (int k : kept_before)
      if (!movable || !commute(k, g)) {
        movable = false;
        break;
      }
    if (movable) removed[i] = 1;
    else kept_before.push_back(g);
  }
  Word prefix, rest;
  for (size_t i = 0; i < x.size(); ++i) (removed[i] ? prefix : rest).push_back(x[i]);
  return {lex_shuffle(prefix), lex_shuffle(rest)};
}

Word Raag::min_coset_rep(const Word& g, VertexSet J) const { return suffix_split(g, J).first; }

bool Raag::in_double_coset(const Word& x, VertexSet J1, VertexSet J2) const {
  Word cur = x;
  while (true) {
    auto [p, r] = prefix_split(cur, J1);
    auto [r2, s] = suffix_split(r, J2);
    if (r2.empty()) return true;
    if (p.empty() && s.empty()) return false;
    cur = r2;
  }
}

std::vector<int> Raag::coxeter_image(const Word& w) const {
  std::vector<int> red;
  for (Letter x : w) {
    int g = gen_of(x);
    // In a reduced word, equal generators that meet through commuting letters form one
    // syllable, and a whole syllable maps to a single reflection.
    bool merged = false;
    for (size_t i = red.size(); i-- > 0;) {
      if (red[i] == g) {
        merged = true;
        break;
      }
      if (!commute(red[i], g)) break;
    }
    if (!merged) red.push_back(g);
  }
  std::vector<int> out;
  while (!red.empty()) {
    size_t best = 0;
    for (size_t i = 0; i < red.size(); ++i) {
      bool movable = true;
      for (size_t k = 0; k < i; ++k)
        if (!commute(red[k], red[i])) {
          movable = false;
          break;
        }
      if (movable && (i == 0 || red[i] < red[best])) best = i;
    }
    out.push_back(red[best]);
    red.erase(red.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

namespace {

std::string element_name(const Raag& G, const Word& g) {
  return g.empty() ? std::string("1") : G.format(g);
}

}  // namespace

RaagBall ball_X(const Raag& G, int radius, int margin) {
  if (radius < 0) throw std::invalid_argument("radius must be non-negative");
  RaagBall ball;
  ball.radius = radius;
  ball.margin = margin;
  auto add = [&](const Word& g) {
    int id = ball.complex.add_vertex(element_name(G, g), static_cast<int>(g.size()) > radius - margin);
    ball.elements.push_back(g);
    ball.index.emplace(g, id);
    return id;
  };
  add(Word{});
  for (size_t head = 0; head < ball.elements.size(); ++head) {
    Word h = ball.elements[head];
    if (static_cast<int>(h.size()) >= radius) continue;
    for (int g = 0; g < G.rank(); ++g)
      for (int s : {1, -1}) {
        Word hx = G.multiply(h, G.letter(g, s));
        if (hx.size() == h.size() + 1 && ball.find(hx) < 0) add(hx);
      }
  }
  const int n = static_cast<int>(ball.elements.size());
  for (int id = 0; id < n; ++id) {
    for (int g = 0; g < G.rank(); ++g) {
      Word hx = G.multiply(ball.elements[id], G.letter(g, 1));
      int other = ball.find(hx);
      if (other >= 0) ball.complex.add_edge(id, other, G.graph().label(g));
    }
  }
  for (int id = 0; id < n; ++id) {
    const Word& h = ball.elements[id];
    for (int a = 0; a < G.rank(); ++a)
      for (int b = a + 1; b < G.rank(); ++b) {
        if (!G.commute(a, b)) continue;
        for (int s : {1, -1})
          for (int t : {1, -1}) {
            int p = ball.find(G.multiply(h, G.letter(a, s)));
            int q = ball.find(G.multiply(h, G.letter(b, t)));
            int r = ball.find(G.multiply(G.multiply(h, G.letter(a, s)), G.letter(b, t)));
            if (p >= 0 && q >= 0 && r >= 0) ball.complex.add_square(id, p, r, q);
          }
      }
  }
  return ball;
}

std::string exploded_name(const Raag& G, const Word& g, VertexSet clique) {
  return element_name(G, g) + "|" + G.graph().format_set(clique);
}

std::string horizontal_label(const std::string& gen_label) { return "~" + gen_label; }

int ExplodedBall::find(const Word& g, VertexSet clique) const {
  for (size_t i = 0; i < points.size(); ++i)
    if (points[i].clique == clique && points[i].g == g) return static_cast<int>(i);
  return -1;
}

ExplodedBall ball_Xe(const Raag& G, int radius, int margin) {
  if (radius < 0) throw std::invalid_argument("radius must be non-negative");
  ExplodedBall ball;
  ball.radius = radius;
  ball.margin = margin;
  const auto& graph = G.graph();
  auto lookup = [&](const Word& g, VertexSet c) {
    auto it = ball.by_name.find(exploded_name(G, g, c));
    return it == ball.by_name.end() ? -1 : it->second;
  };
  auto add = [&](const Word& g, VertexSet c, int depth) {
    int id = ball.complex.add_vertex(exploded_name(G, g, c), depth > radius - margin);
    ball.complex.set_rank(id, popcount(c));
    ball.complex.set_tag(id, graph.format_set(c));
    ball.points.push_back({g, c});
    ball.depth.push_back(depth);
    ball.by_name.emplace(ball.complex.name(id), id);
    return id;
  };
  // Neighbours in the implicit graph, each with the move that produced it.
  struct Move {
    int gen;
    int sign;  // 0 for a horizontal toggle
  };
  auto apply = [&](const ExplodedVertex& p, Move m) -> ExplodedVertex {
    if (m.sign == 0) return {p.g, p.clique ^ bit(m.gen)};
    return {G.multiply(p.g, G.letter(m.gen, m.sign)), p.clique};
  };
  auto moves = [&](const ExplodedVertex& p) {
    std::vector<Move> out;
    for (int v = 0; v < G.rank(); ++v) {
      if (contains(p.clique, v)) {
        out.push_back({v, 1});
        out.push_back({v, -1});
        out.push_back({v, 0});
      } else if (graph.is_clique(p.clique | bit(v))) {
        out.push_back({v, 0});
      }
    }
    return out;
  };
  add(Word{}, 0, 0);
  for (size_t head = 0; head < ball.points.size(); ++head) {
    if (ball.depth[head] >= radius) continue;
    ExplodedVertex p = ball.points[head];
    for (Move m : moves(p)) {
      ExplodedVertex q = apply(p, m);
      if (lookup(q.g, q.clique) < 0) add(q.g, q.clique, ball.depth[head] + 1);
    }
  }
  const int n = static_cast<int>(ball.points.size());
  for (int id = 0; id < n; ++id) {
    ExplodedVertex p = ball.points[id];
    for (Move m : moves(p)) {
      ExplodedVertex q = apply(p, m);
      int other = lookup(q.g, q.clique);
      if (other < 0 || ball.complex.find_edge(id, other) >= 0) continue;
      const std::string& lab = graph.label(m.gen);
      int e = ball.complex.add_edge(id, other, m.sign == 0 ? horizontal_label(lab) : lab);
      ball.complex.set_edge_kind(e, m.sign == 0 ? "horizontal" : "vertical");
    }
  }
  for (int id = 0; id < n; ++id) {
    ExplodedVertex p = ball.points[id];
    auto ms = moves(p);
    for (size_t i = 0; i < ms.size(); ++i)
      for (size_t j = i + 1; j < ms.size(); ++j) {
        Move a = ms[i], b = ms[j];
        if (a.gen == b.gen) continue;
        ExplodedVertex pa = apply(p, a), pb = apply(p, b);
        // The second move must still be legal after the first.
        if (b.sign == 0 && !graph.is_clique(pa.clique ^ bit(b.gen))) continue;
        if (b.sign != 0 && !contains(pa.clique, b.gen)) continue;
        if (a.sign != 0 && !contains(pb.clique, a.gen)) continue;
        if (a.sign == 0 && !graph.is_clique(pb.clique ^ bit(a.gen))) continue;
        ExplodedVertex pab = apply(pa, b);
        int ia = lookup(pa.g, pa.clique), ib = lookup(pb.g, pb.clique), iab = lookup(pab.g, pab.clique);
        if (ia >= 0 && ib >= 0 && iab >= 0) ball.complex.add_square(id, ia, iab, ib);
      }
  }
  return ball;
}

bool StandardFlat::operator<(const StandardFlat& o) const {
  if (clique != o.clique) return clique < o.clique;
  return base < o.base;
}

StandardFlat flat_through(const Raag& G, const Word& g, VertexSet clique) {
  return {G.min_coset_rep(g, clique), clique};
}

bool flat_contains_element(const Raag& G, const StandardFlat& f, const Word& x) {
  return G.in_subgroup(G.multiply(G.inverse(f.base), x), f.clique);
}

bool flat_contains(const Raag& G, const StandardFlat& big, const StandardFlat& small) {
  return (small.clique & ~big.clique) == 0 && flat_contains_element(G, big, small.base);
}

std::vector<StandardFlat> standard_flats(const Raag& G, const RaagBall& ball) {
  std::set<StandardFlat> out;
  auto cs = cliques(G.graph());
  for (const Word& g : ball.elements)
    for (VertexSet c : cs)
      if (c) out.insert(flat_through(G, g, c));
  return {out.begin(), out.end()};
}

Projection project_to_geodesic(const Raag& G, const Word& x, const StandardFlat& line) {
  if (popcount(line.clique) != 1) throw std::invalid_argument("projection target must be a standard geodesic");
  int v = members(line.clique)[0];
  int M = G.distance(line.base, x) + 1;
  int best = -1, best_n = 0, count = 0;
  Word best_point;
  for (int n = -M; n <= M; ++n) {
    Word p = G.multiply(line.base, G.letter(v, n));
    int d = G.distance(p, x);
    if (best < 0 || d < best) {
      best = d;
      best_n = n;
      best_point = p;
      count = 1;
    } else if (d == best) {
      ++count;
    }
  }
  if (count != 1) throw std::logic_error("projection onto a geodesic is not unique");
  return {best_point, best_n};
}

bool ParallelClass::operator<(const ParallelClass& o) const {
  if (direction != o.direction) return direction < o.direction;
  if (coset.size() != o.coset.size()) return coset.size() < o.coset.size();
  return coset < o.coset;
}

VertexSet class_support(const Raag& G, int direction) {
  return bit(direction) | orthogonal_complement(G.graph(), bit(direction));
}

ParallelClass class_of_line(const Raag& G, const Word& g, int direction) {
  return {direction, G.min_coset_rep(g, class_support(G, direction))};
}

StandardFlat class_line(const ParallelClass& c) { return {c.coset, bit(c.direction)}; }

std::string class_id(const Raag& G, const ParallelClass& c) {
  return G.graph().label(c.direction) + "@" + element_name(G, c.coset);
}

ParallelClass parse_class_id(const Raag& G, std::string_view id) {
  auto at = id.find('@');
  if (at == std::string_view::npos) throw WordError("class id needs the form label@word");
  std::string label(id.substr(0, at));
  if (!G.graph().has_vertex(label)) throw WordError("unknown generator '" + label + "'");
  int v = G.graph().index_of(label);
  return class_of_line(G, G.parse(id.substr(at + 1)), v);
}

int class_coordinate(const Raag& G, const ParallelClass& c, const Word& x) {
  return G.exponent_sum(G.multiply(G.inverse(c.coset), x), c.direction);
}

int level_height(const Raag& G, const ParallelClass& c, const Word& x) {
  Word y = G.multiply(G.inverse(c.coset), x);
  auto [prefix, rest] = G.prefix_split(y, class_support(G, c.direction));
  (void)rest;
  return G.exponent_sum(prefix, c.direction);
}

std::vector<VLevel> v_levels(const Raag& G, const ParallelClass& c, const RaagBall& ball) {
  std::map<int, std::vector<int>> by_height;
  for (size_t i = 0; i < ball.elements.size(); ++i)
    by_height[level_height(G, c, ball.elements[i])].push_back(static_cast<int>(i));
  std::vector<VLevel> out;
  for (auto& [h, vs] : by_height) out.push_back({h, std::move(vs)});
  return out;
}

std::vector<ParallelClass> flat_classes(const Raag& G, const StandardFlat& f) {
  std::vector<ParallelClass> out;
  for (int v : members(f.clique)) out.push_back(class_of_line(G, f.base, v));
  return out;
}

bool extension_adjacent(const Raag& G, const ParallelClass& a, const ParallelClass& b) {
  if (!G.commute(a.direction, b.direction)) return false;
  Word x = G.multiply(G.inverse(a.coset), b.coset);
  return G.in_double_coset(x, class_support(G, a.direction), class_support(G, b.direction));
}

bool extension_adjacent_in_ball(const Raag& G, const ParallelClass& a, const ParallelClass& b,
                                const RaagBall& ball) {
  if (!G.commute(a.direction, b.direction)) return false;
  VertexSet sa = class_support(G, a.direction), sb = class_support(G, b.direction);
  Word ia = G.inverse(a.coset), ib = G.inverse(b.coset);
  for (const Word& x : ball.elements)
    if (G.in_subgroup(G.multiply(ia, x), sa) && G.in_subgroup(G.multiply(ib, x), sb)) return true;
  return false;
}

}  // namespace cubikit
