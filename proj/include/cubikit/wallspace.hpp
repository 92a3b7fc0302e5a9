#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cubikit/cube_complex.hpp"
#include "cubikit/raag.hpp"
#include "cubikit/semiconjugacy.hpp"

namespace cubikit {

class WallspaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Finite points with walls; each wall stores one side as sorted point indices.
struct Wallspace {
  std::vector<std::string> points;
  std::vector<std::vector<int>> walls;
  std::vector<std::string> tags;  // optional, one per wall

  // Throws on improper sides and on walls that repeat a partition.
  void validate() const;
  std::string tag(int w) const;
  // side_mask()[w][p] is 1 when point p lies on the stored side of wall w.
  std::vector<std::vector<char>> side_mask() const;

  std::string to_json() const;
  static Wallspace from_json(const std::string& text);
};

bool walls_transverse(const Wallspace& ws, int a, int b);

// The dual cube complex. orientation[v][w] = 1 when 0-cube v picks the stored side of w.
struct DualComplex {
  CubeComplex complex;
  std::vector<std::vector<char>> orientation;
  std::vector<int> point_vertex;  // principal 0-cube of each point
  std::unordered_map<std::string, int> index;  // orientation bit string -> vertex
  int find(const std::vector<char>& o) const;
};

DualComplex dual_cube_complex(const Wallspace& ws, std::size_t cap = std::size_t{1} << 20);

// Largest family of pairwise transverse walls, by exact clique search.
int dual_dimension(const Wallspace& ws);

struct CubeCorrespondence {
  std::vector<std::vector<int>> families;  // maximal pairwise-transverse families, sorted
  int maximal_cubes = 0;
  int max_cube_dimension = 0;   // by enumerating cubes of the dual
  bool bijective = false;       // each family spans exactly one maximal cube and every maximal cube arises
};

CubeCorrespondence maximal_cubes(const Wallspace& ws, const DualComplex& dual);

// Wallspace cut out by the hyperplanes of `c` on the convex hull of `points`, its dual, and a
// labelled comparison with that hull.
struct SageevRoundTrip {
  Wallspace wallspace;
  CubeComplex span;
  DualComplex dual;
  bool isomorphic = false;
};

SageevRoundTrip sageev_round_trip(const CubeComplex& c, const std::vector<int>& points);
// Points are the radius-R ball of X(Γ), inside a ball of radius dim(Γ)·R + 1.
SageevRoundTrip sageev_round_trip(const Raag& G, int R);

// Branched line and the tip of each level height for one parallel class.
struct ClassResolution {
  BranchedLine line;
  std::function<int(int)> tip_of;
};

// Tips are the integers lo..hi themselves.
ClassResolution line_resolution(int lo, int hi);
// Tips and tip map from a semiconjugacy result.
ClassResolution resolution_from(const SemiconjugacyResult& r);

struct InvariantWallspace {
  Wallspace ws;
  std::vector<Word> points;
  std::vector<ParallelClass> wall_class;
  std::vector<int> wall_index;  // index into the branched line's wall list
  int duplicates = 0;           // walls dropped for repeating a partition of another class
  std::vector<std::string> duplicate_witnesses;
  int non_separating = 0;
};

using Resolver = std::function<ClassResolution(const ParallelClass&)>;

// Pull back the branched-line walls of each class through level heights. Classes are those
// of the standard geodesics through the points, which covers every wall when the points form
// a convex set.
InvariantWallspace invariant_wallspace(const Raag& G, const std::vector<Word>& points, const Resolver& resolver);

// Convex hull of the radius-R ball, computed in a ball of radius dim(Γ)·R.
std::vector<Word> hull_window(const Raag& G, int R);

struct TransversalityReport {
  int pairs = 0;
  int transverse = 0;
  int mismatches = 0;
  std::vector<std::string> witnesses;
};

// Every wall pair: set-transverse exactly when the classes differ and are adjacent in the
// extension graph.
TransversalityReport transversality_check(const Raag& G, const InvariantWallspace& iws);

struct FlatEmbedding {
  std::vector<int> vertices;  // dual vertices of the embedded subcomplex
  bool valid = true;          // every embedded orientation is a 0-cube of the full dual
  bool convex = false;
  int expected = 0;           // product of the factor sizes
  std::vector<std::string> witnesses;
};

// Sub-wallspace of the flat's classes, embedded by orienting the other walls toward the flat.
FlatEmbedding branched_flat_embed(const Raag& G, const InvariantWallspace& iws, const DualComplex& dual,
                                  const StandardFlat& flat);

// Whether some wall has the window points of the two flats on opposite sides.
bool flats_separated(const Raag& G, const InvariantWallspace& iws, const StandardFlat& a, const StandardFlat& b);

struct PhiReport {
  std::vector<int> vertex_map;  // point -> dual vertex
  bool injective = true;
  double lipschitz = 0;
  double co_lipschitz = 0;
  int density = 0;  // max distance from a dual vertex to the image
};

PhiReport phi_map(const Raag& G, const InvariantWallspace& iws, const DualComplex& dual);

// For the standard subcomplex base·G(J): a wall separates two of its window points only if
// its class has a line in it, and each such class contributes a separating wall.
struct KWallsReport {
  bool ok = true;
  int classes_inside = 0;
  std::vector<std::string> witnesses;
};

KWallsReport k_walls_check(const Raag& G, const InvariantWallspace& iws, const Word& base, VertexSet J);

}  // namespace cubikit
