#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubikit {

class ActionSpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A group acting on Z, given by generator tables on the window [-window, window].
struct ZActionSpec {
  int window = 0;
  double L = 1, A = 0;
  std::map<std::string, std::map<int, int>> generators;
  std::vector<std::vector<std::string>> relations;  // words read right to left, "x^-1" for inverses

  // Image of x under one letter; nullopt where the table (or its inverse) is undefined.
  std::optional<int> apply(const std::string& gen, bool inverse, int x) const;
  // Right-to-left word application.
  std::optional<int> apply_word(const std::vector<std::string>& word, int x) const;
  int max_displacement() const;

  std::string to_json() const;
  static ZActionSpec from_json(const std::string& text);

 private:
  mutable std::map<std::string, std::map<int, int>> inverse_cache_;
  const std::map<int, int>& inverse_table(const std::string& gen) const;
};

// a swaps 2n and 2n+1, b adds 2.
ZActionSpec flip2_action(int window);
ZActionSpec translation_z_action(int window);
ZActionSpec reflection_z_action(int window);
ZActionSpec identity_z_action(int window);

struct SpecValidation {
  bool bijective = true;
  bool relations_hold = true;
  bool quasi_isometric = true;  // each generator is an (L, A)-quasi-isometry on the safe interior
  std::vector<std::string> witnesses;
  bool ok() const { return bijective && relations_hold && quasi_isometric; }
};

SpecValidation validate_action(const ZActionSpec& spec, int margin);

// d̄ restricted to word length <= B, on the interval [lo, hi] around 0 where every such word is defined.
struct DbarTable {
  int lo = 0, hi = -1;
  int B = 0;
  int cap = 0;  // only pairs with |x - y| <= cap are stored
  std::map<std::pair<int, int>, int> values;
  int at(int x, int y) const;  // throws for pairs outside the stored range
};

DbarTable dbar(const ZActionSpec& spec, int B, int cap);

// 2-skeleton of the Rips complex of ([lo, hi], d̄) at scale R.
struct Rips2Complex {
  int lo = 0, hi = -1;
  int R = 0;
  std::vector<std::pair<int, int>> edges;            // x < y
  std::vector<std::array<int, 3>> triangles;        // x < y < z
  std::map<std::pair<int, int>, int> edge_index;
  bool connected = true;
  int size() const { return hi - lo + 1; }
};

Rips2Complex rips2(const DbarTable& d, int R);

// A 0/1 normal track given by the vertex set on its left. Tracks stay local: `left`
// contains every point below `from` and no point above `to`.
struct Track {
  int from = 0, to = -1;
  std::vector<int> left;  // sorted points of [from, to] on the left side
  int weight = 0;
  bool operator<(const Track& o) const;
  bool operator==(const Track& o) const { return from == o.from && to == o.to && left == o.left; }
  bool on_left(int x) const;
};

struct TrackCheck {
  bool normal = true;     // per-triangle arc counts are nonnegative integers
  bool connected = true;  // the realised curve is connected
  bool essential = true;  // both complementary sides are connected and reach the window ends
  int weight = 0;
};

TrackCheck check_track(const Rips2Complex& K, const Track& t);
// Per-triangle arc counts x_ab = (a + b - c) / 2 for side weights a, b, c.
std::vector<std::array<int, 3>> normal_arcs(const Rips2Complex& K, const Track& t);

struct TrackSearch {
  int zone = 0;     // width of the window in which the left set may differ from a threshold
  int margin = 0;   // distance kept from the Rips window ends
  int w_max = 0;
};

// Least-weight essential track among zone cuts; ties go to the smallest track in canonical order.
std::optional<Track> min_essential_track(const Rips2Complex& K, const TrackSearch& search);

// Every essential zone cut of the given weight, in canonical order.
std::vector<Track> tracks_of_weight(const Rips2Complex& K, const TrackSearch& search, int weight);

struct TrackFamily {
  std::vector<Track> tracks;  // nested left sets, in increasing order
  int min_weight = 0;
  int orbit_size = 0;
  int greedy_added = 0;
  int uncrossings = 0;
  int d1 = 0;
  int max_block_diameter = 0;
};

TrackFamily track_family(const ZActionSpec& spec, const Rips2Complex& K, const DbarTable& d,
                         const TrackSearch& search);

struct BlockIsometry {
  int translation = 0;
  bool reflection = false;  // block i goes to -i + translation when set
};

struct BranchedLine {
  int lo = 0, hi = -1;                 // base integers
  std::vector<std::vector<int>> tips;  // per base integer, tip ids
  std::vector<int> tip_base;           // tip id -> base integer
  bool tip_is_base(int tip) const;     // whether the tip is the base integer itself
  int tip_count() const { return static_cast<int>(tip_base.size()); }
  int branching() const;               // max valence
  // Walls: each tree edge splits the tips; sides as sorted tip ids.
  std::vector<std::vector<int>> wall_sides() const;
};

struct SemiconjugacyResult {
  int lo = 0, hi = -1;           // interior window of the source
  std::map<int, int> block_map;  // x -> block index
  std::map<std::string, BlockIsometry> isometries;
  BranchedLine line;
  std::map<int, int> tip_map;    // x -> tip id
  bool equivariant = true;
  bool isometric = true;
  double L_measured = 0, A_measured = 0;
  int min_fiber = 0, max_fiber = 0;  // over interior blocks
  TrackFamily family;
  int B = 0, R = 0;
  std::vector<std::string> witnesses;
  std::string to_json() const;
};

struct SemiconjugacyParams {
  int B = 8;
  int R = -1;      // default 3(L+A)
  int w_max = -1;  // default 4(L R + A)
};

SemiconjugacyResult collapse(const ZActionSpec& spec, const TrackFamily& family, int lo, int hi);

// The full pipeline: d̄, Rips complex, tracks, collapse.
SemiconjugacyResult semiconjugate(const ZActionSpec& spec, const SemiconjugacyParams& params);

}  // namespace cubikit
