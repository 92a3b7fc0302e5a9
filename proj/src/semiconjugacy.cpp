#include "cubikit/semiconjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

#include "json.hpp"

namespace cubikit {

namespace {

std::pair<std::string, bool> parse_letter(const std::string& s) {
  if (s.size() > 3 && s.compare(s.size() - 3, 3, "^-1") == 0) return {s.substr(0, s.size() - 3), true};
  return {s, false};
}

}  // namespace

const std::map<int, int>& ZActionSpec::inverse_table(const std::string& gen) const {
  auto it = inverse_cache_.find(gen);
  if (it != inverse_cache_.end()) return it->second;
  std::map<int, int> inv;
  for (const auto& [x, y] : generators.at(gen)) inv[y] = x;
  return inverse_cache_.emplace(gen, std::move(inv)).first->second;
}

std::optional<int> ZActionSpec::apply(const std::string& gen, bool inverse, int x) const {
  auto g = generators.find(gen);
  if (g == generators.end()) throw ActionSpecError("unknown generator '" + gen + "'");
  const auto& table = inverse ? inverse_table(gen) : g->second;
  auto it = table.find(x);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::optional<int> ZActionSpec::apply_word(const std::vector<std::string>& word, int x) const {
  std::optional<int> y = x;
  for (size_t i = word.size(); i-- > 0 && y;) {
    auto [gen, inv] = parse_letter(word[i]);
    y = apply(gen, inv, *y);
  }
  return y;
}

int ZActionSpec::max_displacement() const {
  int m = 0;
  for (const auto& [name, table] : generators)
    for (const auto& [x, y] : table) m = std::max(m, std::abs(y - x));
  return m;
}

std::string ZActionSpec::to_json() const {
  nlohmann::ordered_json j;
  j["window"] = window;
  j["L"] = L;
  j["A"] = A;
  nlohmann::ordered_json gens = nlohmann::ordered_json::object();
  for (const auto& [name, table] : generators) {
    nlohmann::ordered_json t = nlohmann::ordered_json::object();
    for (const auto& [x, y] : table) t[std::to_string(x)] = y;
    gens[name] = t;
  }
  j["generators"] = gens;
  j["relations"] = relations;
  return j.dump();
}

ZActionSpec ZActionSpec::from_json(const std::string& text) {
  ZActionSpec spec;
  try {
    auto j = nlohmann::json::parse(text);
    spec.window = j.at("window").get<int>();
    if (spec.window < 1) throw ActionSpecError("window must be positive");
    spec.L = j.value("L", 1.0);
    spec.A = j.value("A", 0.0);
    for (const auto& [name, table] : j.at("generators").items()) {
      auto& out = spec.generators[name];
      for (const auto& [key, val] : table.items()) {
        size_t used = 0;
        int x = std::stoi(key, &used);
        if (used != key.size()) throw ActionSpecError("table key '" + key + "' is not an integer");
        out[x] = val.get<int>();
      }
    }
    if (j.contains("relations"))
      spec.relations = j.at("relations").get<std::vector<std::vector<std::string>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ActionSpecError(std::string("malformed action JSON: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ActionSpecError("malformed action JSON: table keys must be integers");
  }
  for (const auto& rel : spec.relations)
    for (const auto& l : rel)
      if (!spec.generators.count(parse_letter(l).first))
        throw ActionSpecError("relation uses unknown generator '" + l + "'");
  return spec;
}

ZActionSpec flip2_action(int window) {
  ZActionSpec s;
  s.window = window;
  s.L = 1;
  s.A = 2;
  for (int x = -window; x <= window; ++x) {
    int y = (x % 2 == 0) ? x + 1 : x - 1;
    if (std::abs(y) <= window) s.generators["a"][x] = y;
    if (std::abs(x + 2) <= window) s.generators["b"][x] = x + 2;
  }
  s.relations = {{"a", "a"}, {"b^-1", "a", "b", "a"}};
  return s;
}

ZActionSpec translation_z_action(int window) {
  ZActionSpec s;
  s.window = window;
  for (int x = -window; x < window; ++x) s.generators["t"][x] = x + 1;
  return s;
}

ZActionSpec reflection_z_action(int window) {
  ZActionSpec s;
  s.window = window;
  for (int x = -window; x <= window; ++x) s.generators["r"][x] = -x;
  s.relations = {{"r", "r"}};
  return s;
}

ZActionSpec identity_z_action(int window) {
  ZActionSpec s;
  s.window = window;
  for (int x = -window; x <= window; ++x) s.generators["e"][x] = x;
  return s;
}

SpecValidation validate_action(const ZActionSpec& spec, int margin) {
  SpecValidation out;
  const int lo = -spec.window + margin, hi = spec.window - margin;
  for (const auto& [name, table] : spec.generators) {
    std::set<int> images;
    for (const auto& [x, y] : table) {
      if (std::abs(x) > spec.window || std::abs(y) > spec.window) {
        out.bijective = false;
        out.witnesses.push_back(name + " leaves the window at " + std::to_string(x));
      }
      if (!images.insert(y).second) {
        out.bijective = false;
        out.witnesses.push_back(name + " is not injective at " + std::to_string(x));
      }
    }
    for (int x = lo; x <= hi; ++x) {
      if (!table.count(x)) {
        out.bijective = false;
        out.witnesses.push_back(name + " is undefined at interior point " + std::to_string(x));
        continue;
      }
      for (int y = x + 1; y <= hi; ++y) {
        if (!table.count(y)) continue;
        double d = y - x, e = std::abs(table.at(y) - table.at(x));
        if (e > spec.L * d + spec.A + 1e-9 || e < d / spec.L - spec.A - 1e-9) {
          out.quasi_isometric = false;
          out.witnesses.push_back(name + " violates the quasi-isometry constants at (" + std::to_string(x) + "," +
                                  std::to_string(y) + ")");
          break;
        }
      }
    }
  }
  for (const auto& rel : spec.relations)
    for (int x = lo; x <= hi; ++x) {
      auto y = spec.apply_word(rel, x);
      if (y && *y != x) {
        out.relations_hold = false;
        out.witnesses.push_back("relation fails at " + std::to_string(x));
        break;
      }
    }
  return out;
}

int DbarTable::at(int x, int y) const {
  if (x == y) return 0;
  if (x > y) std::swap(x, y);
  auto it = values.find({x, y});
  if (it == values.end()) throw std::out_of_range("d-bar pair outside the stored range");
  return it->second;
}

DbarTable dbar(const ZActionSpec& spec, int B, int cap) {
  DbarTable t;
  t.B = B;
  t.cap = cap;
  std::vector<std::pair<std::string, bool>> letters;
  for (const auto& [name, table] : spec.generators) {
    (void)table;
    letters.push_back({name, false});
    letters.push_back({name, true});
  }
  // Points where every word of length <= B is defined, then the interval around 0 inside them.
  std::set<int> ok;
  for (int x = -spec.window; x <= spec.window; ++x) ok.insert(x);
  for (int k = 0; k < B; ++k) {
    std::set<int> next;
    for (int x : ok) {
      bool all = true;
      for (const auto& [name, inv] : letters) {
        auto y = spec.apply(name, inv, x);
        if (!y || !ok.count(*y)) {
          all = false;
          break;
        }
      }
      if (all) next.insert(x);
    }
    ok = std::move(next);
  }
  if (!ok.count(0)) throw ActionSpecError("window exhausted before depth " + std::to_string(B));
  t.lo = 0;
  t.hi = 0;
  while (ok.count(t.lo - 1)) --t.lo;
  while (ok.count(t.hi + 1)) ++t.hi;
  for (int x = t.lo; x <= t.hi; ++x)
    for (int y = x + 1; y <= std::min(t.hi, x + cap); ++y) {
      std::set<std::pair<int, int>> seen{{x, y}};
      std::vector<std::pair<int, int>> frontier{{x, y}};
      int best = y - x;
      for (int depth = 0; depth < B && !frontier.empty(); ++depth) {
        std::vector<std::pair<int, int>> next;
        for (auto [a, b] : frontier)
          for (const auto& [name, inv] : letters) {
            auto ga = spec.apply(name, inv, a), gb = spec.apply(name, inv, b);
            if (!ga || !gb) throw ActionSpecError("window exhausted before depth " + std::to_string(B));
            if (seen.insert({*ga, *gb}).second) {
              best = std::max(best, std::abs(*ga - *gb));
              next.push_back({*ga, *gb});
            }
          }
        frontier = std::move(next);
      }
      t.values[{x, y}] = best;
    }
  return t;
}

Rips2Complex rips2(const DbarTable& d, int R) {
  if (R < 1) throw std::invalid_argument("Rips scale must be at least 1");
  if (R > d.cap) throw std::invalid_argument("d-bar table does not reach the Rips scale");
  Rips2Complex K;
  K.lo = d.lo;
  K.hi = d.hi;
  K.R = R;
  auto close = [&](int x, int y) { return y - x <= R && d.at(x, y) <= R; };
  for (int x = K.lo; x <= K.hi; ++x)
    for (int y = x + 1; y <= std::min(K.hi, x + R); ++y)
      if (close(x, y)) {
        K.edge_index[{x, y}] = static_cast<int>(K.edges.size());
        K.edges.push_back({x, y});
      }
  for (auto [x, y] : K.edges)
    for (int z = y + 1; z <= std::min(K.hi, x + R); ++z)
      if (K.edge_index.count({x, z}) && K.edge_index.count({y, z})) K.triangles.push_back({x, y, z});
  std::vector<int> parent(K.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> root = [&](int v) { return parent[v] == v ? v : parent[v] = root(parent[v]); };
  for (auto [x, y] : K.edges) parent[root(x - K.lo)] = root(y - K.lo);
  for (int v = 0; v < K.size(); ++v)
    if (root(v) != root(0)) K.connected = false;
  return K;
}

bool Track::operator<(const Track& o) const {
  if (from != o.from) return from < o.from;
  if (to != o.to) return to < o.to;
  return left < o.left;
}

bool Track::on_left(int x) const {
  if (x < from) return true;
  if (x > to) return false;
  return std::binary_search(left.begin(), left.end(), x);
}

namespace {

// Canonical form: `from` is the least point off the left side, `to` the greatest on it.
Track canonical(const std::vector<char>& side, int lo) {
  Track t;
  int n = static_cast<int>(side.size());
  int first_right = n, last_left = -1;
  for (int i = 0; i < n; ++i) {
    if (!side[i] && first_right == n) first_right = i;
    if (side[i]) last_left = i;
  }
  t.from = lo + first_right;
  t.to = lo + last_left;
  for (int i = first_right; i <= last_left; ++i)
    if (side[i]) t.left.push_back(lo + i);
  return t;
}

std::vector<char> sides(const Rips2Complex& K, const Track& t) {
  std::vector<char> s(K.size());
  for (int x = K.lo; x <= K.hi; ++x) s[x - K.lo] = t.on_left(x) ? 1 : 0;
  return s;
}

int cut_weight(const Rips2Complex& K, const std::vector<char>& s) {
  int w = 0;
  for (auto [x, y] : K.edges) w += s[x - K.lo] != s[y - K.lo];
  return w;
}

bool side_connected(const Rips2Complex& K, const std::vector<char>& s, char which) {
  std::vector<int> parent(K.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> root = [&](int v) { return parent[v] == v ? v : parent[v] = root(parent[v]); };
  for (auto [x, y] : K.edges)
    if (s[x - K.lo] == which && s[y - K.lo] == which) parent[root(x - K.lo)] = root(y - K.lo);
  int r = -1;
  for (int v = 0; v < K.size(); ++v)
    if (s[v] == which) {
      if (r < 0) r = root(v);
      else if (root(v) != r) return false;
    }
  return r >= 0;
}

bool curve_connected(const Rips2Complex& K, const std::vector<char>& s) {
  std::vector<int> cut;
  std::map<int, int> pos;
  for (size_t e = 0; e < K.edges.size(); ++e)
    if (s[K.edges[e].first - K.lo] != s[K.edges[e].second - K.lo]) {
      pos[static_cast<int>(e)] = static_cast<int>(cut.size());
      cut.push_back(static_cast<int>(e));
    }
  if (cut.empty()) return false;
  std::vector<int> parent(cut.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> root = [&](int v) { return parent[v] == v ? v : parent[v] = root(parent[v]); };
  for (const auto& tri : K.triangles) {
    std::vector<int> crossed;
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
      int e = K.edge_index.at({tri[i], tri[j]});
      if (pos.count(e)) crossed.push_back(pos[e]);
    }
    for (size_t k = 1; k < crossed.size(); ++k) parent[root(crossed[k])] = root(crossed[0]);
  }
  for (size_t k = 0; k < cut.size(); ++k)
    if (root(static_cast<int>(k)) != root(0)) return false;
  return true;
}

bool essential(const Rips2Complex& K, const std::vector<char>& s) {
  return s.front() == 1 && s.back() == 0 && side_connected(K, s, 1) && side_connected(K, s, 0) &&
         curve_connected(K, s);
}

// Visits every zone cut inside the search window with its weight.
template <typename F>
void for_each_zone_cut(const Rips2Complex& K, const TrackSearch& search, F&& visit) {
  const int Z = search.zone;
  if (Z < 1 || Z > 24) throw std::invalid_argument("zone width must lie in [1, 24]");
  std::vector<char> s(K.size());
  for (int p = K.lo + search.margin; p + Z - 1 <= K.hi - search.margin; ++p) {
    for (int x = K.lo; x <= K.hi; ++x) s[x - K.lo] = x < p ? 1 : 0;
    // Edges touching the zone are the only ones whose status changes with the subset.
    std::vector<std::pair<int, int>> local;
    int fixed = 0;
    for (auto [x, y] : K.edges) {
      bool touches = (x >= p && x < p + Z) || (y >= p && y < p + Z);
      if (touches) local.push_back({x - K.lo, y - K.lo});
      else fixed += s[x - K.lo] != s[y - K.lo];
    }
    for (std::uint32_t mask = 0; mask < (1u << Z); ++mask) {
      for (int i = 0; i < Z; ++i) s[p - K.lo + i] = (mask >> i) & 1;
      int w = fixed;
      for (auto [a, b] : local) w += s[a] != s[b];
      visit(s, w);
    }
  }
}

}  // namespace

std::vector<std::array<int, 3>> normal_arcs(const Rips2Complex& K, const Track& t) {
  auto s = sides(K, t);
  std::vector<std::array<int, 3>> out;
  for (const auto& tri : K.triangles) {
    int a = s[tri[0] - K.lo] != s[tri[1] - K.lo];
    int b = s[tri[1] - K.lo] != s[tri[2] - K.lo];
    int c = s[tri[0] - K.lo] != s[tri[2] - K.lo];
    // Arcs around each corner: the corner between sides a and c is tri[0], and so on.
    out.push_back({a + c - b, a + b - c, b + c - a});
  }
  return out;
}

TrackCheck check_track(const Rips2Complex& K, const Track& t) {
  TrackCheck out;
  auto s = sides(K, t);
  out.weight = cut_weight(K, s);
  for (const auto& arcs : normal_arcs(K, t))
    for (int a : arcs)
      if (a < 0 || a % 2 != 0) out.normal = false;
  out.connected = curve_connected(K, s);
  out.essential = s.front() == 1 && s.back() == 0 && side_connected(K, s, 1) && side_connected(K, s, 0);
  return out;
}

std::optional<Track> min_essential_track(const Rips2Complex& K, const TrackSearch& search) {
  std::optional<Track> best;
  for_each_zone_cut(K, search, [&](const std::vector<char>& s, int w) {
    if (w > search.w_max || (best && w > best->weight)) return;
    if (!essential(K, s)) return;
    Track t = canonical(s, K.lo);
    t.weight = w;
    if (!best || w < best->weight || t < *best) best = t;
  });
  return best;
}

std::vector<Track> tracks_of_weight(const Rips2Complex& K, const TrackSearch& search, int weight) {
  std::set<Track> found;
  for_each_zone_cut(K, search, [&](const std::vector<char>& s, int w) {
    if (w != weight || !essential(K, s)) return;
    Track t = canonical(s, K.lo);
    t.weight = w;
    found.insert(t);
  });
  return {found.begin(), found.end()};
}

namespace {

std::optional<Track> image_track(const ZActionSpec& spec, const std::string& gen, bool inv, const Rips2Complex& K,
                                 const Track& t) {
  std::vector<char> s(K.size());
  for (int x = K.lo; x <= K.hi; ++x) {
    auto pre = spec.apply(gen, !inv, x);
    if (!pre) return std::nullopt;
    s[x - K.lo] = t.on_left(*pre) ? 1 : 0;
  }
  if (s.front() == 0)
    for (auto& c : s) c = !c;
  Track out = canonical(s, K.lo);
  out.weight = cut_weight(K, s);
  return out;
}

bool subset(const Rips2Complex& K, const Track& a, const Track& b) {
  for (int x = K.lo; x <= K.hi; ++x)
    if (a.on_left(x) && !b.on_left(x)) return false;
  return true;
}

bool nested(const Rips2Complex& K, const Track& a, const Track& b) { return subset(K, a, b) || subset(K, b, a); }

bool inside(const Rips2Complex& K, const TrackSearch& search, const Track& t) {
  return t.from >= K.lo + search.margin && t.to <= K.hi - search.margin;
}

Track combine(const Rips2Complex& K, const Track& a, const Track& b, bool intersect) {
  std::vector<char> s(K.size());
  for (int x = K.lo; x <= K.hi; ++x) {
    bool l = intersect ? (a.on_left(x) && b.on_left(x)) : (a.on_left(x) || b.on_left(x));
    s[x - K.lo] = l ? 1 : 0;
  }
  Track t = canonical(s, K.lo);
  t.weight = cut_weight(K, s);
  return t;
}

int left_size(const Rips2Complex& K, const Track& t) {
  int n = 0;
  for (int x = K.lo; x <= K.hi; ++x) n += t.on_left(x);
  return n;
}

int diameter(const DbarTable& d, const std::vector<int>& pts) {
  int best = 0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) {
      int x = pts[i], y = pts[j];
      best = std::max(best, std::abs(y - x) <= d.cap ? d.at(x, y) : std::abs(y - x));
    }
  return best;
}

std::vector<std::vector<int>> blocks_of(const Rips2Complex& K, const std::vector<Track>& tracks) {
  std::vector<std::vector<int>> blocks(tracks.size() + 1);
  for (int x = K.lo; x <= K.hi; ++x) {
    int idx = 0;
    for (const auto& t : tracks) idx += !t.on_left(x);
    blocks[idx].push_back(x);
  }
  return blocks;
}

}  // namespace

TrackFamily track_family(const ZActionSpec& spec, const Rips2Complex& K, const DbarTable& d,
                         const TrackSearch& search) {
  TrackFamily fam;
  auto first = min_essential_track(K, search);
  if (!first) throw ActionSpecError("no essential track of weight at most " + std::to_string(search.w_max));
  fam.min_weight = first->weight;
  fam.d1 = 2 * fam.min_weight + 5 * K.R;
  std::set<Track> chosen{*first};
  std::deque<Track> queue{*first};
  while (!queue.empty()) {
    Track t = queue.front();
    queue.pop_front();
    for (const auto& [name, table] : spec.generators) {
      (void)table;
      for (bool inv : {false, true}) {
        auto img = image_track(spec, name, inv, K, t);
        if (!img || !inside(K, search, *img) || chosen.count(*img)) continue;
        chosen.insert(*img);
        queue.push_back(*img);
      }
    }
  }
  fam.orbit_size = static_cast<int>(chosen.size());
  std::vector<Track> tracks(chosen.begin(), chosen.end());
  // Resolve crossings by the two cut-and-paste resolutions until the family is nested.
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < tracks.size() && !changed; ++i)
      for (size_t j = i + 1; j < tracks.size() && !changed; ++j) {
        if (nested(K, tracks[i], tracks[j])) continue;
        Track a = combine(K, tracks[i], tracks[j], true), b = combine(K, tracks[i], tracks[j], false);
        if (a.weight + b.weight > tracks[i].weight + tracks[j].weight)
          throw ActionSpecError("crossing tracks admit no lighter resolution");
        tracks[i] = a;
        tracks[j] = b;
        ++fam.uncrossings;
        changed = true;
      }
    std::sort(tracks.begin(), tracks.end());
    tracks.erase(std::unique(tracks.begin(), tracks.end()), tracks.end());
    if (fam.uncrossings > 100000) throw ActionSpecError("disjointification did not terminate");
  }
  // Locally minimal tracks of the least weight that fit between the chosen ones.
  for (const Track& t : tracks_of_weight(K, search, fam.min_weight)) {
    bool ok = true;
    for (const auto& u : tracks)
      if (u == t || !nested(K, u, t)) {
        ok = false;
        break;
      }
    if (ok) tracks.push_back(t);
  }
  auto order = [&](std::vector<Track>& ts) {
    std::sort(ts.begin(), ts.end(), [&](const Track& a, const Track& b) {
      int sa = left_size(K, a), sb = left_size(K, b);
      return sa != sb ? sa < sb : a < b;
    });
  };
  order(tracks);
  // Greedy fill of wide complementary regions.
  for (int round = 0; round < K.size(); ++round) {
    auto blocks = blocks_of(K, tracks);
    int wide = -1;
    for (size_t i = 1; i + 1 < blocks.size(); ++i)
      if (diameter(d, blocks[i]) > fam.d1) {
        wide = static_cast<int>(i);
        break;
      }
    if (wide < 0) break;
    std::optional<Track> best;
    const Track& below = tracks[wide - 1];
    const Track& above = tracks[wide];
    for (int w = fam.min_weight; w <= search.w_max && !best; ++w)
      for (const Track& t : tracks_of_weight(K, search, w))
        if (subset(K, below, t) && subset(K, t, above) && !(t == below) && !(t == above)) {
          best = t;
          break;
        }
    if (!best) throw ActionSpecError("no track fits inside a wide complementary region");
    tracks.push_back(*best);
    ++fam.greedy_added;
    order(tracks);
  }
  for (size_t i = 0; i + 1 < tracks.size(); ++i)
    if (!subset(K, tracks[i], tracks[i + 1])) throw ActionSpecError("track family is not nested");
  auto blocks = blocks_of(K, tracks);
  for (size_t i = 1; i + 1 < blocks.size(); ++i) fam.max_block_diameter = std::max(fam.max_block_diameter, diameter(d, blocks[i]));
  fam.tracks = std::move(tracks);
  return fam;
}

bool BranchedLine::tip_is_base(int tip) const {
  const auto& ts = tips.at(tip_base.at(tip) - lo);
  return ts.size() == 1;
}

int BranchedLine::branching() const {
  int best = 0;
  for (int i = lo; i <= hi; ++i) {
    const auto& ts = tips[i - lo];
    int valence = (i > lo) + (i < hi) + (ts.size() >= 2 ? static_cast<int>(ts.size()) : 0);
    best = std::max(best, valence);
  }
  return best;
}

std::vector<std::vector<int>> BranchedLine::wall_sides() const {
  std::vector<std::vector<int>> out;
  std::vector<int> below;
  for (int i = lo; i <= hi; ++i) {
    const auto& ts = tips[i - lo];
    if (ts.size() >= 2)
      for (int t : ts) out.push_back({t});
    below.insert(below.end(), ts.begin(), ts.end());
    if (i < hi) {
      std::vector<int> side = below;
      std::sort(side.begin(), side.end());
      out.push_back(side);
    }
  }
  return out;
}

SemiconjugacyResult collapse(const ZActionSpec& spec, const TrackFamily& family, int lo, int hi) {
  SemiconjugacyResult res;
  res.lo = lo;
  res.hi = hi;
  res.family = family;
  const auto& tracks = family.tracks;
  if (tracks.size() < 2) throw ActionSpecError("collapse needs at least two tracks");
  auto raw = [&](int x) {
    int idx = 0;
    for (const auto& t : tracks) idx += !t.on_left(x);
    return idx;
  };
  const int last = static_cast<int>(tracks.size());
  const int shift = raw(0);
  std::map<int, std::vector<int>> block_points;
  for (int x = lo; x <= hi; ++x) {
    int r = raw(x);
    if (r == 0 || r == last) continue;  // the two unbounded ends
    res.block_map[x] = r - shift;
    block_points[r - shift].push_back(x);
  }
  for (const auto& [name, table] : spec.generators) {
    (void)table;
    std::map<int, int> image;
    bool consistent = true;
    for (const auto& [x, b] : res.block_map) {
      auto y = spec.apply(name, false, x);
      if (!y || !res.block_map.count(*y)) continue;
      auto [it, fresh] = image.emplace(b, res.block_map.at(*y));
      if (!fresh && it->second != res.block_map.at(*y)) consistent = false;
    }
    if (!consistent) {
      res.equivariant = false;
      res.witnesses.push_back(name + " does not map blocks to blocks");
    }
    BlockIsometry iso;
    std::set<int> plus, minus;
    for (auto [i, j] : image) {
      plus.insert(j - i);
      minus.insert(j + i);
    }
    if (plus.size() == 1) {
      iso.translation = *plus.begin();
    } else if (minus.size() == 1) {
      iso.reflection = true;
      iso.translation = *minus.begin();
    } else {
      res.isometric = false;
      res.witnesses.push_back(name + " does not act on blocks by an isometry");
    }
    res.isometries[name] = iso;
    for (const auto& [x, b] : res.block_map) {
      auto y = spec.apply(name, false, x);
      if (!y || !res.block_map.count(*y)) continue;
      int expect = iso.reflection ? iso.translation - b : b + iso.translation;
      if (res.block_map.at(*y) != expect) res.equivariant = false;
    }
  }
  // Interior blocks exclude the outermost ones, which the window may cut.
  res.min_fiber = std::numeric_limits<int>::max();
  int bmin = block_points.begin()->first, bmax = block_points.rbegin()->first;
  for (const auto& [b, pts] : block_points) {
    if (b == bmin || b == bmax) continue;
    res.min_fiber = std::min(res.min_fiber, static_cast<int>(pts.size()));
    res.max_fiber = std::max(res.max_fiber, static_cast<int>(pts.size()));
  }
  if (res.min_fiber == std::numeric_limits<int>::max()) res.min_fiber = 0;
  for (auto [x, fx] : res.block_map)
    for (auto [y, fy] : res.block_map) {
      if (y <= x) continue;
      int d = y - x, e = std::abs(fy - fx);
      if (e == 0) {
        res.A_measured = std::max(res.A_measured, static_cast<double>(d));
      } else {
        res.L_measured = std::max(res.L_measured, std::max(static_cast<double>(e) / d, static_cast<double>(d) / e));
      }
    }
  BranchedLine& line = res.line;
  line.lo = bmin;
  line.hi = bmax;
  line.tips.assign(bmax - bmin + 1, {});
  for (const auto& [b, pts] : block_points)
    for (int x : pts) {
      int id = line.tip_count();
      line.tip_base.push_back(b);
      line.tips[b - bmin].push_back(id);
      res.tip_map[x] = id;
    }
  return res;
}

std::string SemiconjugacyResult::to_json() const {
  nlohmann::ordered_json j;
  j["window"] = {lo, hi};
  nlohmann::ordered_json bm = nlohmann::ordered_json::object();
  for (auto [x, b] : block_map) bm[std::to_string(x)] = b;
  j["block-map"] = bm;
  nlohmann::ordered_json isos = nlohmann::ordered_json::object();
  for (const auto& [name, iso] : isometries)
    isos[name] = {{"translation", iso.translation}, {"reflection", iso.reflection}};
  j["isometries"] = isos;
  nlohmann::ordered_json bl;
  bl["base"] = {line.lo, line.hi};
  nlohmann::ordered_json tips = nlohmann::ordered_json::object();
  for (int i = line.lo; i <= line.hi; ++i) tips[std::to_string(i)] = line.tips[i - line.lo];
  bl["tips"] = tips;
  j["branched-line"] = bl;
  nlohmann::ordered_json tm = nlohmann::ordered_json::object();
  for (auto [x, t] : tip_map) tm[std::to_string(x)] = t;
  j["tip-map"] = tm;
  j["equivariant"] = equivariant;
  j["isometric"] = isometric;
  j["measured"] = {{"L", L_measured}, {"A", A_measured}, {"min-fiber", min_fiber}, {"max-fiber", max_fiber}};
  j["tracks"] = {{"count", family.tracks.size()},     {"min-weight", family.min_weight},
                 {"orbit-size", family.orbit_size},   {"greedy-added", family.greedy_added},
                 {"uncrossings", family.uncrossings}, {"D1", family.d1},
                 {"max-block-diameter", family.max_block_diameter}};
  j["parameters"] = {{"B", B}, {"R", R}};
  j["witnesses"] = witnesses;
  return j.dump(2);
}

SemiconjugacyResult semiconjugate(const ZActionSpec& spec, const SemiconjugacyParams& params) {
  const int R = params.R > 0 ? params.R : static_cast<int>(std::ceil(3 * (spec.L + spec.A)));
  const int w_max = params.w_max > 0 ? params.w_max : static_cast<int>(std::ceil(4 * (spec.L * R + spec.A)));
  DbarTable d = dbar(spec, params.B, R);
  Rips2Complex K = rips2(d, R);
  if (!K.connected) throw ActionSpecError("Rips complex is disconnected; raise R");
  TrackSearch search;
  search.zone = 2 * R + 1;
  search.margin = R;
  search.w_max = w_max;
  TrackFamily fam = track_family(spec, K, d, search);
  SemiconjugacyResult res = collapse(spec, fam, d.lo, d.hi);
  res.B = params.B;
  res.R = R;
  return res;
}

}  // namespace cubikit
