#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace cubikit {

class ComplexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CubeEdge {
  int u = -1, v = -1;
  std::string label;
};

// A finite piece of a cube complex stored by its 2-skeleton. Higher cubes are implied
// by flag links. Boundary vertices mark where a ball was truncated.
class CubeComplex {
 public:
  int add_vertex(const std::string& name, bool boundary = false);
  int add_edge(int u, int v, const std::string& label);
  // Vertices in cyclic order; the four edges must exist. Duplicates return the old id.
  int add_square(int a, int b, int c, int d);

  int vertex_count() const { return static_cast<int>(names_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int square_count() const { return static_cast<int>(squares_.size()); }

  const std::string& name(int v) const { return names_.at(v); }
  bool boundary(int v) const { return boundary_.at(v); }
  void set_boundary(int v, bool b) { boundary_.at(v) = b; }
  int find_vertex(const std::string& name) const;

  const CubeEdge& edge(int e) const { return edges_.at(e); }
  const std::array<int, 4>& square(int s) const { return squares_.at(s); }
  const std::array<int, 4>& square_edges(int s) const { return square_edges_.at(s); }
  int find_edge(int u, int v) const;
  // The vertex opposite `corner` in a square containing edges corner-x and corner-y.
  int fourth_corner(int corner, int x, int y) const;
  const std::vector<std::pair<int, int>>& incident(int v) const { return adj_.at(v); }
  const std::vector<int>& squares_on_edge(int e) const { return edge_squares_.at(e); }
  int other_end(int e, int v) const { return edges_[e].u == v ? edges_[e].v : edges_[e].u; }

  // Optional decorations used by buildings and blow-ups.
  void set_rank(int v, int r);
  int rank(int v) const { return v < static_cast<int>(rank_.size()) ? rank_[v] : -1; }
  void set_tag(int v, const std::string& t);
  const std::string& tag(int v) const;
  void set_edge_kind(int e, const std::string& k);
  const std::string& edge_kind(int e) const;

  std::vector<int> interior_vertices() const;

  std::string to_json() const;
  static CubeComplex from_json(const std::string& text);
  // DOT export of the 1-skeleton; edge_class (optional) colours edges by class id.
  std::string to_dot(const std::vector<int>* edge_class = nullptr) const;

 private:
  std::vector<std::string> names_;
  std::vector<bool> boundary_;
  std::unordered_map<std::string, int> name_index_;
  std::vector<CubeEdge> edges_;
  std::unordered_map<std::uint64_t, int> edge_index_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
  std::vector<std::array<int, 4>> squares_;
  std::vector<std::array<int, 4>> square_edges_;
  std::vector<std::vector<int>> edge_squares_;
  std::unordered_map<std::uint64_t, int> corner_index_;  // (corner, x, y) -> fourth vertex
  std::vector<int> rank_;
  std::vector<std::string> tag_;
  std::vector<std::string> edge_kind_;
};

// Breadth-first distances; vertices outside `allowed` (when given) are not entered.
std::vector<int> bfs_distances(const CubeComplex& c, int source,
                               const std::vector<char>* allowed = nullptr);

struct FlagFailure {
  int vertex = -1;
  std::string reason;
  std::vector<int> witness;  // neighbouring vertices spanning the offending link simplex
};

struct FlagReport {
  bool pass = true;
  int checked_vertices = 0;
  int max_cube_dimension = 0;
  std::vector<FlagFailure> failures;
};

FlagReport check_flag_links(const CubeComplex& c);

// Vertices of the k-cube spanned at `corner` by the given neighbours, indexed by subset
// bitmask; empty if some face is missing.
std::vector<int> complete_cube(const CubeComplex& c, int corner, const std::vector<int>& nbrs);

struct Hyperplane {
  std::vector<int> edges;
  std::vector<int> carrier;  // sorted vertex ids
  std::string label;
  std::vector<int> side_a;  // sorted vertex ids
  std::vector<int> side_b;
};

// Hyperplanes of the interior subcomplex (interior vertices, edges and squares).
class HyperplaneSet {
 public:
  explicit HyperplaneSet(const CubeComplex& c);

  const CubeComplex& complex() const { return *complex_; }
  const std::vector<int>& interior() const { return interior_; }
  const std::vector<char>& interior_mask() const { return mask_; }
  bool connected() const { return connected_; }

  const std::vector<Hyperplane>& walls() const { return walls_; }
  const std::vector<Hyperplane>& truncated() const { return truncated_; }
  int wall_of_edge(int e) const { return edge_wall_.at(e); }  // -1 if truncated or not interior
  // 0 for side_a, 1 for side_b, -1 for non-interior vertices.
  int side(int wall, int v) const { return sides_.at(wall).at(v); }
  int separating_count(int x, int y) const;

 private:
  const CubeComplex* complex_;
  std::vector<int> interior_;
  std::vector<char> mask_;
  bool connected_ = true;
  std::vector<Hyperplane> walls_;
  std::vector<Hyperplane> truncated_;
  std::vector<int> edge_wall_;
  std::vector<std::vector<std::int8_t>> sides_;
};

int l1_distance(const CubeComplex& c, int x, int y);

// Exact test: interval-closed inside the interior graph and locally convex.
bool is_convex(const CubeComplex& c, const std::vector<int>& S);
// Connected, and no outside interior vertex has two neighbours in S. Agrees with
// is_convex on median graphs and runs in linear time.
bool is_convex_local(const CubeComplex& c, const std::vector<int>& S);

// Smallest interval-closed vertex set containing S, computed in the whole complex.
std::vector<int> convex_hull(const CubeComplex& c, const std::vector<int>& S);

// Full subcomplex on a vertex subset, with boundary flags taken from `boundary`.
CubeComplex induced_subcomplex(const CubeComplex& c, const std::vector<int>& S,
                               std::vector<int>* old_to_new = nullptr,
                               const std::vector<char>* boundary = nullptr);

struct RestrictionQuotient {
  CubeComplex target;
  std::vector<int> vertex_map;  // source vertex -> target vertex, -1 off the interior
  std::vector<int> wall_subset;
};

RestrictionQuotient restriction_quotient(const HyperplaneSet& hs, const std::vector<int>& K);

// Five tests for a restriction quotient, numbered (1)-(5) in field order; witnesses carry the number.
struct RqReport {
  bool cubical = true;
  bool vertex_preimages_convex = false;  // (1)
  bool point_preimages_convex = false;   // (2)
  bool convex_preimages_convex = false;  // (3)
  bool hyperplane_preimages = false;     // (4)
  bool matches_rebuilt_quotient = false; // (5)
  bool agree() const;
  std::vector<std::string> witnesses;
};

// q maps interior source vertices to target vertices (-1 elsewhere). The target is
// taken whole; its own boundary flags are ignored.
RqReport verify_rq_characterization(const CubeComplex& source, const CubeComplex& target,
                                    const std::vector<int>& q, std::uint64_t seed = 1,
                                    int sampled_intervals = 50);

// The strip [0,3]x[0,1] folded onto one edge by (i, j) -> i mod 2.
struct FoldingExample {
  CubeComplex source;
  CubeComplex target;
  std::vector<int> map;
};
FoldingExample folding_example();

}  // namespace cubikit
