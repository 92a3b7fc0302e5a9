#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cubikit/action.hpp"
#include "cubikit/building.hpp"
#include "cubikit/cube_complex.hpp"
#include "cubikit/raag.hpp"

namespace cubikit {

// Tables h_λ: Z -> Z, one per parallel class of rank-1 residues, in class coordinates.
// A rank-1 residue inherits the table of its class, so parallel residues agree by construction.
class BlowUpData {
 public:
  using Rule = std::function<int(const ParallelClass&, int)>;

  BlowUpData(const Raag& G, Rule rule, std::string description = "custom");

  const Raag& group() const { return *G_; }
  const std::string& description() const { return description_; }
  int value(const ParallelClass& c, int n) const;
  // h on a chamber c of the rank-1 residue through c in direction j.
  int value_at(const Word& c, int j) const;

  void set_table(const ParallelClass& c, std::map<int, int> table);
  const std::map<ParallelClass, std::map<int, int>>& tables() const { return tables_; }

  // {"classes":[{"id":..., "table":{"chamber-word": h, ...}}]} over coordinates [-window, window].
  std::string to_json(const std::vector<ParallelClass>& classes, int window) const;
  static BlowUpData from_json(const Raag& G, const std::string& text);

 private:
  const Raag* G_;
  Rule rule_;
  std::string description_;
  std::map<ParallelClass, std::map<int, int>> tables_;
};

BlowUpData identity_data(const Raag& G);
BlowUpData floor_half_data(const Raag& G);
BlowUpData double_data(const Raag& G);
BlowUpData constant_data(const Raag& G, int value);
// Values in [-spread, spread] from a hash of (seed, class, coordinate).
BlowUpData random_blowup_data(const Raag& G, std::uint64_t seed, int spread);

// Classes of the rank-1 factors of R.
std::vector<ParallelClass> type_map(const Raag& G, const Residue& R);

struct FiberMorphism {
  int small = -1, big = -1;  // Davis vertices, small ⊂ big with codimension one
  int dropped = -1;          // generator index in big's type but not in small's
  int inserted_value = 0;    // coordinate of the dropped factor
};

// Fibers Z^{T(R)} over a Davis ball with the codimension-one inclusion morphisms.
struct FiberFunctor {
  const DavisBall* davis = nullptr;
  std::vector<FiberMorphism> morphisms;
  bool functorial = true;   // composites around every square agree
  bool one_determined = true;
  std::vector<std::string> witnesses;
};

FiberFunctor build_fiber_functor(const BlowUpData& data, const DavisBall& davis);

struct BlowUpWindow {
  DavisWindow davis;
  int fiber_bound = 4;  // |x_j| <= fiber_bound
  int radius = -1;      // breadth-first radius from the base vertex, -1 for no limit
};

struct BlowUpVertex {
  Residue residue;
  std::vector<int> x;  // coordinates indexed by members(residue.type)
};

struct BlowUpComplex {
  const Raag* G = nullptr;
  CubeComplex complex;
  std::vector<BlowUpVertex> points;
  std::unordered_map<std::string, int> by_name;
  std::vector<int> depth;
  DavisBall davis;      // Davis ball on the same window
  std::vector<int> q;   // Y vertex -> Davis vertex
  BlowUpWindow window;
  int find(const Residue& R, const std::vector<int>& x) const;
};

std::string blowup_vertex_name(const Raag& G, const Residue& R, const std::vector<int>& x);

// Y with vertices (R, x), x in Z^{T(R)}. Vertical edges move one coordinate, horizontal edges
// join (R', x') to (R, x) when R' ⊂ R drops direction j and x_j is the table value of R'.
BlowUpComplex blowup_complex(const BlowUpData& data, const BlowUpWindow& window);

// Target of q restricted to the image of the interior, as an induced Davis subcomplex.
CubeComplex quotient_target(const BlowUpComplex& Y, std::vector<int>* q_out);

// Replace the interior by the convex hull of the vertices within `radius` of the base vertex.
// Throws if the hull meets the original boundary.
void restrict_to_hull(CubeComplex& c, int base, int radius);

// 1-data: tables read from the attachments of chambers to rank-1 fibers.
BlowUpData one_data(const BlowUpComplex& Y);

// Per-vertex name of the image in X_e under (R, x) -> (chamber of R with coordinates x, T(R));
// valid for the identity tables.
std::vector<std::string> exploded_names(const BlowUpComplex& Y);

struct LocalFiniteness {
  int max_preimage = 0;
  int density = 0;
};

LocalFiniteness local_finiteness_report(const BlowUpData& data, const std::vector<ParallelClass>& classes,
                                        int window);

// Compares the part of Y over the faces below R with the product of mapping cylinders of the
// factor tables. The product-set clause needs a window that is a box inside R (max_exponent).
bool downward_complex_check(const BlowUpComplex& Y, const BlowUpData& data, const Residue& R);

struct EtaReport {
  std::vector<int> vertex_map;  // YA -> YB, -1 outside YB
  bool cubical = true;           // edges map to edges or collapse to points
  bool isomorphism = false;      // bijective on interiors, edges to edges
  double lipschitz = 0;          // max d_B / d_A over measured pairs
  double co_lipschitz = 0;       // max d_A / d_B over pairs with d_B > 0
  int additive = 0;              // max d_A over pairs with equal images
  int pairs = 0;
};

// The vertex map (R, x) -> (R, f_λ(x_j)) with distortion measured on interior pairs.
EtaReport eta_quasi_morphism(const BlowUpComplex& YA, const BlowUpComplex& YB,
                             const std::function<int(const ParallelClass&, int)>& f, int max_sources = 200);

struct SectionDistortion {
  int pairs = 0;
  double lipschitz = 0;  // max d_Y / d_G
  double co_lipschitz = 0;  // max d_G / d_Y
  int additive = 0;       // least A with d_Y <= L d_G + A and d_G <= L d_Y + A for the given L
};

// Distances between the rank-0 vertices over the given chambers, against the word metric.
SectionDistortion chamber_section_distortion(const BlowUpComplex& Y, const std::vector<Word>& chambers, double L,
                                             int max_sources = 200);

struct OrbitResolution {
  ClassOrbit orbit;
  std::function<int(int)> block_map;  // equivariant map on the representative's coordinates
};

// H_λ = f_u ∘ (transport along g_λ)^{-1}.
BlowUpData equivariant_data(const GroupAction& A, const std::vector<OrbitResolution>& resolutions);

struct EquivariantBlowUp {
  BlowUpComplex Y;
  std::vector<std::vector<int>> generator_maps;  // per generator, Y vertex -> Y vertex (-1 outside)
  bool well_defined = true;
  bool edges_preserved = true;
  bool commutes_with_q = true;
  int checked_vertices = 0;
  std::vector<std::string> witnesses;
};

EquivariantBlowUp equivariant_blowup(const GroupAction& A, const std::vector<OrbitResolution>& resolutions,
                                     const BlowUpWindow& window, int preimage_window = 16);

}  // namespace cubikit
