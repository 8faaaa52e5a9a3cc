#pragma once

#include <cstdint>
#include <vector>

#include "sobex/core.hpp"
#include "sobex/fn/field.hpp"

namespace sobex::fn {

// Cell-centered uniform-grid field over a box. The spacing is a binary
// rational, so cell centers are exact. An optional mask marks active cells
// (empty mask = all active).
struct GridField {
  Box box;
  double h = 1;
  int M = 1;
  std::array<int, 3> dims{1, 1, 1};
  std::vector<double> data;        // [cell * M + comp]
  std::vector<std::uint8_t> mask;  // empty or [cell]

  int n() const { return box.n; }
  std::size_t cells() const {
    return static_cast<std::size_t>(dims[0]) * dims[1] * (n() >= 3 ? dims[2] : 1);
  }
  std::size_t cell_index(int i, int j, int k = 0) const {
    return (static_cast<std::size_t>(k) * dims[1] + j) * dims[0] + i;
  }
  Pt center(int i, int j, int k = 0) const {
    Pt c = {box.lo[0] + (i + 0.5) * h, box.lo[1] + (j + 0.5) * h, 0};
    if (n() >= 3) c[2] = box.lo[2] + (k + 0.5) * h;
    return c;
  }
  bool active(std::size_t cell) const { return mask.empty() || mask[cell] != 0; }
  double value(std::size_t cell, int comp = 0) const { return data[cell * M + comp]; }
  double& at(std::size_t cell, int comp = 0) { return data[cell * M + comp]; }

  bool in_grid(int i, int j, int k = 0) const {
    return i >= 0 && i < dims[0] && j >= 0 && j < dims[1] && (n() < 3 || (k >= 0 && k < dims[2]));
  }
  // cell containing x (clamped); nullopt-free, caller checks box first
  void locate(const Pt& x, int& i, int& j, int& k) const {
    i = std::min(dims[0] - 1, std::max(0, static_cast<int>((x[0] - box.lo[0]) / h)));
    j = std::min(dims[1] - 1, std::max(0, static_cast<int>((x[1] - box.lo[1]) / h)));
    k = n() >= 3 ? std::min(dims[2] - 1, std::max(0, static_cast<int>((x[2] - box.lo[2]) / h))) : 0;
  }
};

GridField make_grid(const Box& box, double h, int M = 1);

// Sample an analytic field at cell centers.
GridField sample_field(const AnalyticField& u, const Box& box, double h);

// Central-difference partial derivative along `axis`; output active only
// where the full stencil is active.
GridField fd_axis(const GridField& g, int axis);

// Nested central differences realizing a multi-index derivative.
GridField fd_multi(const GridField& g, const MultiIdx& alpha);

// Squared Euclidean distance transform of a cell indicator (Felzenszwalb),
// in physical units. `seed` marks cells at distance 0.
std::vector<double> distance_transform(const GridField& shape, const std::vector<std::uint8_t>& seed);

}  // namespace sobex::fn
