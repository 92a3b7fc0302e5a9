#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "cubikit/cube_complex.hpp"
#include "cubikit/raag.hpp"

namespace cubikit {

// The coset base·G(type). Spherical when the type is a clique.
struct Residue {
  Word base;  // shortest element of the coset
  VertexSet type = 0;
  int rank() const { return popcount(type); }
  bool operator==(const Residue& o) const { return type == o.type && base == o.base; }
  bool operator<(const Residue& o) const;
};

struct ResidueHash {
  size_t operator()(const Residue& r) const noexcept { return WordHash{}(r.base) * 131 + r.type; }
};

Residue residue_of(const Raag& G, const Word& chamber, VertexSet type);
bool residue_contains(const Raag& G, const Residue& big, const Residue& small);
bool residue_contains_chamber(const Raag& G, const Residue& R, const Word& c);
std::string residue_name(const Raag& G, const Residue& R);  // "word|{a,b}"
std::string residue_to_json(const Raag& G, const Residue& R);
Residue residue_from_json(const Raag& G, const std::string& text);

// Residues are admitted when their base is short enough; with max_exponent >= 0 every
// syllable of the base must also have exponent at most max_exponent in absolute value.
struct DavisWindow {
  int base_length = 2;
  int max_exponent = -1;
  int margin = 1;
};

bool davis_admits(const Raag& G, const Residue& R, const DavisWindow& w);

struct DavisBall {
  CubeComplex complex;
  std::vector<Residue> residues;  // vertex id -> residue
  std::unordered_map<Residue, int, ResidueHash> index;
  DavisWindow window;
  int find(const Residue& R) const {
    auto it = index.find(R);
    return it == index.end() ? -1 : it->second;
  }
  int chamber_vertex(const Word& c) const { return find(Residue{c, 0}); }
};

// Vertices are spherical residues, edges codimension-one containments, squares the
// intervals of length two. Boundary: base longer than base_length - margin.
DavisBall davis_ball(const Raag& G, int radius, int margin = 1);
DavisBall davis_ball(const Raag& G, const DavisWindow& window);

// W-distance between chambers as a reduced word of generator indices, and its length.
std::vector<int> w_distance(const Raag& G, const Word& c1, const Word& c2);
int gallery_distance(const Raag& G, const Word& c1, const Word& c2);
std::string format_coxeter(const Raag& G, const std::vector<int>& w);

// Gate of c in R: base·(largest part of base^{-1}c that lies in G(type) and moves to the front).
Word proj_residue(const Raag& G, const Residue& R, const Word& c);
// Same answer by minimising gallery distance over a box of chambers in R; throws if the
// minimiser is not unique.
Word proj_residue_bruteforce(const Raag& G, const Residue& R, const Word& c);

struct ParallelismResult {
  bool parallel = false;
  bool by_projection = false;  // the mutual projection test
  std::vector<std::pair<Word, Word>> map;  // chamber of R1 -> chamber of R2 on a window
};

ParallelismResult are_parallel(const Raag& G, const Residue& R1, const Residue& R2, int window = 3);

// The type ∪ type^⊥ residue containing R; generally not spherical.
Residue parallel_set(const Raag& G, const Residue& R);

struct ProductDecomposition {
  std::vector<Residue> factors;  // one rank-1 residue per member of the type, in index order
  std::vector<int> directions;
};

ProductDecomposition product_decomposition(const Raag& G, const Residue& R);
// Chamber coordinates of c in R: the exponents of the gates onto the factors.
std::vector<int> product_coordinates(const Raag& G, const Residue& R, const Word& c);
// Chamber of R with the given coordinates.
Word product_chamber(const Raag& G, const Residue& R, const std::vector<int>& coords);

// Whether vertex_map preserves the rank recorded on the complex, on interior vertices.
bool rank_preserving_check(const CubeComplex& c, const std::vector<int>& vertex_map);

}  // namespace cubikit
