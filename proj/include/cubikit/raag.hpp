#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cubikit/cube_complex.hpp"
#include "cubikit/graph.hpp"

namespace cubikit {

// A letter is 2*generator + (1 if the exponent is -1). Sorting letters this way puts
// generators in declaration order with the positive letter first.
using Letter = std::uint8_t;
using Word = std::vector<Letter>;

inline int gen_of(Letter x) { return x >> 1; }
inline int sign_of(Letter x) { return (x & 1) ? -1 : 1; }
inline Letter make_letter(int gen, int sign) { return static_cast<Letter>(2 * gen + (sign < 0 ? 1 : 0)); }
inline Letter inverse_letter(Letter x) { return x ^ 1; }

struct WordHash {
  size_t operator()(const Word& w) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (Letter x : w) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h ^ (w.size() << 1));
  }
};

class WordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The right-angled Artin group G(Γ) with canonical normal forms.
class Raag {
 public:
  explicit Raag(DefiningGraph g);

  const DefiningGraph& graph() const { return graph_; }
  int rank() const { return graph_.size(); }
  bool commute(int a, int b) const { return a != b && graph_.adjacent(a, b); }

  Word normal_form(const Word& raw) const;
  Word multiply(const Word& a, const Word& b) const;
  Word inverse(const Word& a) const;
  Word letter(int gen, int exp = 1) const;  // gen^exp in normal form
  Word power(int gen, int exp) const { return letter(gen, exp); }

  Word parse(std::string_view text) const;
  std::string format(const Word& w) const;

  // Word-metric distance |a^{-1} b|.
  int distance(const Word& a, const Word& b) const;

  int exponent_sum(const Word& w, int gen) const;
  bool in_subgroup(const Word& w, VertexSet J) const;

  // Shortest element of the left coset g·G(J); lengths add: |g| = |rep| + |rep^{-1} g|.
  Word min_coset_rep(const Word& g, VertexSet J) const;
  // x = prefix·rest with prefix the largest element of G(J) that can be moved to the front.
  std::pair<Word, Word> prefix_split(const Word& x, VertexSet J) const;
  // x = rest·suffix with suffix the largest element of G(J) that can be moved to the end.
  std::pair<Word, Word> suffix_split(const Word& x, VertexSet J) const;
  // Whether x lies in G(J1)·G(J2).
  bool in_double_coset(const Word& x, VertexSet J1, VertexSet J2) const;

  // W-distance from the identity: each syllable of the normal form becomes one reflection.
  std::vector<int> coxeter_image(const Word& w) const;

 private:
  void append_reduced(Word& w, Letter x) const;
  Word lex_shuffle(const Word& w) const;

  DefiningGraph graph_;
};

// Balls in X(Γ) and X_e(Γ). Vertices carry their group data alongside the complex.
struct RaagBall {
  CubeComplex complex;
  std::vector<Word> elements;  // vertex id -> group element
  std::unordered_map<Word, int, WordHash> index;
  int radius = 0;
  int margin = 1;
  int find(const Word& w) const {
    auto it = index.find(w);
    return it == index.end() ? -1 : it->second;
  }
};

// Interior vertices are those of length at most radius - margin.
RaagBall ball_X(const Raag& G, int radius, int margin = 1);

struct ExplodedVertex {
  Word g;
  VertexSet clique = 0;
  bool operator==(const ExplodedVertex& o) const { return g == o.g && clique == o.clique; }
};

struct ExplodedBall {
  CubeComplex complex;
  std::vector<ExplodedVertex> points;
  std::vector<int> depth;  // l1 distance from the base vertex (e, {})
  int radius = 0;
  int margin = 1;
  int find(const Word& g, VertexSet clique) const;
  std::unordered_map<std::string, int> by_name;
};

// Vertical edges are labelled by the generator, horizontal edges by "~" + generator.
ExplodedBall ball_Xe(const Raag& G, int radius, int margin = 1);
std::string exploded_name(const Raag& G, const Word& g, VertexSet clique);
std::string horizontal_label(const std::string& gen_label);

struct StandardFlat {
  Word base;  // shortest coset representative
  VertexSet clique = 0;
  bool operator==(const StandardFlat& o) const { return base == o.base && clique == o.clique; }
  bool operator<(const StandardFlat& o) const;
};

StandardFlat flat_through(const Raag& G, const Word& g, VertexSet clique);
bool flat_contains(const Raag& G, const StandardFlat& big, const StandardFlat& small);
bool flat_contains_element(const Raag& G, const StandardFlat& f, const Word& x);
std::vector<StandardFlat> standard_flats(const Raag& G, const RaagBall& ball);

struct Projection {
  Word point;
  int height = 0;  // exponent of the generator relative to the flat's base
};

// Brute-force gate onto a standard geodesic; throws if the minimiser is not unique.
Projection project_to_geodesic(const Raag& G, const Word& x, const StandardFlat& line);

struct ParallelClass {
  int direction = -1;
  Word coset;  // shortest element of base·G({v} ∪ v^⊥)
  bool operator==(const ParallelClass& o) const { return direction == o.direction && coset == o.coset; }
  bool operator<(const ParallelClass& o) const;
};

struct ParallelClassHash {
  size_t operator()(const ParallelClass& c) const noexcept {
    return WordHash{}(c.coset) * 31 + static_cast<size_t>(c.direction);
  }
};

VertexSet class_support(const Raag& G, int direction);  // {v} ∪ v^⊥
ParallelClass class_of_line(const Raag& G, const Word& g, int direction);
StandardFlat class_line(const ParallelClass& c);  // the representative geodesic coset·<v>
std::string class_id(const Raag& G, const ParallelClass& c);
ParallelClass parse_class_id(const Raag& G, std::string_view id);

// Coordinate of a chamber inside the parallel set of the class.
int class_coordinate(const Raag& G, const ParallelClass& c, const Word& x);
// Height of the level containing x: the coordinate of the gate onto the representative line.
int level_height(const Raag& G, const ParallelClass& c, const Word& x);

struct VLevel {
  int height = 0;
  std::vector<int> vertices;
};

std::vector<VLevel> v_levels(const Raag& G, const ParallelClass& c, const RaagBall& ball);

// Classes of the standard geodesics contained in a flat.
std::vector<ParallelClass> flat_classes(const Raag& G, const StandardFlat& f);

bool extension_adjacent(const Raag& G, const ParallelClass& a, const ParallelClass& b);
// Same question answered by scanning the ball for a common element of the two parallel sets.
bool extension_adjacent_in_ball(const Raag& G, const ParallelClass& a, const ParallelClass& b,
                                const RaagBall& ball);

}  // namespace cubikit
