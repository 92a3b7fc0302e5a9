#include "cubikit/action.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace cubikit {

int GroupAction::add_generator(std::string name, ChamberMap forward, ChamberMap backward) {
  gens_.push_back({std::move(name), std::move(forward), std::move(backward)});
  return size() - 1;
}

int GroupAction::find(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (gens_[i].name == name) return i;
  return -1;
}

Word GroupAction::apply_letter(int letter, const Word& x) const {
  const auto& g = gens_.at(letter / 2);
  return (letter % 2 == 0) ? g.forward(x) : g.backward(x);
}

Word GroupAction::apply(const ActionWord& w, const Word& x) const {
  Word y = x;
  for (size_t i = w.size(); i-- > 0;) y = apply_letter(w[i], y);
  return y;
}

std::string GroupAction::format(const ActionWord& w) const {
  std::string out;
  for (int l : w) {
    if (!out.empty()) out += ' ';
    out += gens_.at(l / 2).name;
    if (l % 2) out += "^-1";
  }
  return out;
}

ActionWord inverse_word(const ActionWord& w) {
  ActionWord out(w.rbegin(), w.rend());
  for (auto& l : out) l ^= 1;
  return out;
}

ActionWord concat(const ActionWord& a, const ActionWord& b) {
  ActionWord out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

GroupAction translation_action(const Raag& G) {
  GroupAction A(G);
  for (int v = 0; v < G.rank(); ++v) {
    Word fw = G.letter(v, 1), bw = G.letter(v, -1);
    A.add_generator(G.graph().label(v), [&G, fw](const Word& x) { return G.multiply(fw, x); },
                    [&G, bw](const Word& x) { return G.multiply(bw, x); });
  }
  return A;
}

Word doubled_theta(const Raag& G, int u, const Word& k) {
  if (G.exponent_sum(k, u) % 2 != 0) throw std::invalid_argument("element is not in the kernel of the parity map");
  VertexSet star = bit(u) | G.graph().neighbors(u);
  Word raw;
  int state = 0;  // parity of the u-exponent read so far
  for (Letter x : k) {
    int g = gen_of(x);
    if (g == u) {
      // Schreier generators for u-letters are 1 or u^{±2}; θ fixes both.
      if ((sign_of(x) > 0) == (state == 1)) {
        raw.push_back(x);
        raw.push_back(x);
      }
      state ^= 1;
    } else if (contains(star, g)) {
      raw.push_back(x);
    } else if (state == 0) {
      // v (first copy) goes to u v u^{-1}.
      raw.push_back(make_letter(u, 1));
      raw.push_back(x);
      raw.push_back(make_letter(u, -1));
    } else {
      // u v u^{-1} (second copy) goes to v.
      raw.push_back(x);
    }
  }
  return G.normal_form(raw);
}

Word doubled_alpha(const Raag& G, int u, const Word& x) {
  if (G.exponent_sum(x, u) % 2 == 0) return G.multiply(doubled_theta(G, u, x), G.letter(u, 1));
  return doubled_theta(G, u, G.multiply(x, G.letter(u, -1)));
}

GroupAction doubled_involution_action(const Raag& G, int u) {
  GroupAction A(G);
  VertexSet star = bit(u) | G.graph().neighbors(u);
  auto left = [&G](const Word& g) {
    Word gi = G.inverse(g);
    return std::make_pair(ChamberMap([&G, g](const Word& x) { return G.multiply(g, x); }),
                          ChamberMap([&G, gi](const Word& x) { return G.multiply(gi, x); }));
  };
  const auto& lab = G.graph();
  for (int v = 0; v < G.rank(); ++v) {
    if (contains(star, v)) continue;
    auto [f, b] = left(G.letter(v, 1));
    A.add_generator(lab.label(v), f, b);
    Word conj = G.multiply(G.multiply(G.letter(u, 1), G.letter(v, 1)), G.letter(u, -1));
    auto [f2, b2] = left(conj);
    A.add_generator(lab.label(u) + lab.label(v) + lab.label(u) + "'", f2, b2);
  }
  for (int w : members(G.graph().neighbors(u))) {
    auto [f, b] = left(G.letter(w, 1));
    A.add_generator(lab.label(w), f, b);
  }
  {
    auto [f, b] = left(G.letter(u, 2));
    A.add_generator(lab.label(u) + "2", f, b);
  }
  auto alpha = [&G, u](const Word& x) { return doubled_alpha(G, u, x); };
  A.add_generator("alpha", alpha, alpha);
  return A;
}

namespace {

// Direction of the standard geodesic through two chambers of one rank-1 residue.
int line_direction(const Raag& G, const Word& y0, const Word& y1) {
  Word d = G.multiply(G.inverse(y0), y1);
  if (d.empty()) throw std::logic_error("action collapses a standard geodesic");
  int g = gen_of(d[0]);
  for (Letter x : d)
    if (gen_of(x) != g) throw std::logic_error("action does not preserve standard geodesics");
  return g;
}

}  // namespace

ParallelClass image_class(const GroupAction& A, int letter, const ParallelClass& c) {
  const Raag& G = A.group();
  Word x0 = c.coset, x1 = G.multiply(c.coset, G.letter(c.direction, 1));
  Word y0 = A.apply_letter(letter, x0), y1 = A.apply_letter(letter, x1);
  return class_of_line(G, y0, line_direction(G, y0, y1));
}

std::pair<ParallelClass, int> transport(const GroupAction& A, const ActionWord& w, const ParallelClass& c, int n) {
  const Raag& G = A.group();
  ParallelClass cur = c;
  int coord = n;
  for (size_t i = w.size(); i-- > 0;) {
    ParallelClass next = image_class(A, w[i], cur);
    Word x = G.multiply(cur.coset, G.letter(cur.direction, coord));
    coord = class_coordinate(G, next, A.apply_letter(w[i], x));
    cur = next;
  }
  return {cur, coord};
}

Residue image_residue(const GroupAction& A, int letter, const Residue& R) {
  const Raag& G = A.group();
  Word y0 = A.apply_letter(letter, R.base);
  VertexSet type = 0;
  for (int j : members(R.type)) {
    Word yj = A.apply_letter(letter, G.multiply(R.base, G.letter(j, 1)));
    type |= bit(line_direction(G, y0, yj));
  }
  if (popcount(type) != R.rank()) throw std::logic_error("action does not preserve residue rank");
  return residue_of(G, y0, type);
}

std::vector<ClassOrbit> class_orbits(const GroupAction& A, std::vector<ParallelClass> classes, int search_length) {
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  std::set<ParallelClass> wanted(classes.begin(), classes.end());
  std::set<ParallelClass> assigned;
  std::vector<ClassOrbit> out;
  for (const auto& start : classes) {
    if (assigned.count(start)) continue;
    ClassOrbit orbit;
    orbit.representative = start;
    std::map<ParallelClass, ActionWord> seen{{start, {}}};
    std::deque<ParallelClass> queue{start};
    while (!queue.empty()) {
      ParallelClass c = queue.front();
      queue.pop_front();
      if (wanted.count(c) && !assigned.count(c)) {
        assigned.insert(c);
        orbit.members.push_back(c);
        orbit.words.push_back(seen[c]);
      }
      for (int l = 0; l < 2 * A.size(); ++l) {
        ParallelClass d = image_class(A, l, c);
        if (static_cast<int>(d.coset.size()) > search_length || seen.count(d)) continue;
        seen[d] = concat(ActionWord{l}, seen[c]);
        queue.push_back(d);
      }
    }
    out.push_back(std::move(orbit));
  }
  return out;
}

std::vector<ActionWord> stabilizer_words(const GroupAction& A, const ClassOrbit& orbit) {
  std::map<ParallelClass, size_t> pos;
  for (size_t i = 0; i < orbit.members.size(); ++i) pos[orbit.members[i]] = i;
  std::vector<ActionWord> out;
  std::set<ActionWord> seen;
  for (size_t i = 0; i < orbit.members.size(); ++i) {
    for (int l = 0; l < 2 * A.size(); ++l) {
      auto it = pos.find(image_class(A, l, orbit.members[i]));
      if (it == pos.end()) continue;
      ActionWord w = concat(inverse_word(orbit.words[it->second]), concat(ActionWord{l}, orbit.words[i]));
      if (seen.insert(w).second) out.push_back(w);
    }
  }
  return out;
}

FactorActionSpec extract_factor_action(const GroupAction& A, const ParallelClass& cls,
                                       const std::vector<std::pair<std::string, ActionWord>>& stabilizers,
                                       int window) {
  FactorActionSpec spec;
  spec.cls = cls;
  spec.window = window;
  for (const auto& [name, w] : stabilizers) {
    auto& table = spec.tables[name];
    for (int n = -window; n <= window; ++n) {
      auto [img, m] = transport(A, w, cls, n);
      if (!(img == cls)) throw std::invalid_argument("word '" + name + "' does not stabilise the class");
      table[n] = m;
    }
  }
  return spec;
}

}  // namespace cubikit
