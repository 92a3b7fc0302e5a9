#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubikit/cube_complex.hpp"

namespace cubikit {

struct IsoOptions {
  bool edge_labels = true;       // edges must carry equal labels
  bool vertex_tags = true;       // vertices must carry equal tags
  bool boundary_flags = true;    // boundary flags must agree
  std::vector<std::pair<int, int>> seeds;  // forced vertex pairs (a, b)
};

// A vertex bijection a -> b preserving edges (with labels) and squares, or nullopt.
// Colour refinement narrows candidates; a breadth-first backtracking search finishes.
std::optional<std::vector<int>> find_isomorphism(const CubeComplex& a, const CubeComplex& b,
                                                 const IsoOptions& opt = {});

// Whether `map` (a -> b, total) is a label-preserving bijection on vertices, edges and squares.
bool is_isomorphism(const CubeComplex& a, const CubeComplex& b, const std::vector<int>& map,
                    const IsoOptions& opt = {});

}  // namespace cubikit
