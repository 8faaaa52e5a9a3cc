#pragma once

#include <cstdint>
#include <vector>

#include "sobex/core.hpp"

namespace sobex::geom {

// Dyadic cube addressed by (level, integer index) inside a root frame.
// Side lengths are base * 2^-level and corners are origin + index * side,
// all exactly representable binary rationals.
struct DyadicCube {
  int level = 0;
  std::array<std::int64_t, 3> idx{0, 0, 0};

  bool operator==(const DyadicCube& o) const { return level == o.level && idx == o.idx; }
  bool operator<(const DyadicCube& o) const {
    if (level != o.level) return level < o.level;
    return idx < o.idx;
  }
};

// Root frame: the root box tiled by `cells` level-0 cubes of side `base`
// per axis. Origin and base must be binary rationals so that all cube
// geometry below stays exact in double arithmetic.
struct RootFrame {
  Pt origin{0, 0, 0};
  double base = 1.0;
  std::array<std::int64_t, 3> cells{1, 1, 1};
  int n = 2;

  double side(int level) const { return std::ldexp(base, -level); }
  std::int64_t extent(int axis, int level) const { return cells[axis] << level; }

  Box cube_box(const DyadicCube& q) const {
    double s = side(q.level);
    Box b;
    b.n = n;
    for (int i = 0; i < n; ++i) {
      b.lo[i] = origin[i] + static_cast<double>(q.idx[i]) * s;
      b.hi[i] = origin[i] + static_cast<double>(q.idx[i] + 1) * s;
    }
    return b;
  }
  Pt cube_center(const DyadicCube& q) const {
    double s = side(q.level);
    Pt c{0, 0, 0};
    for (int i = 0; i < n; ++i) c[i] = origin[i] + (static_cast<double>(q.idx[i]) + 0.5) * s;
    return c;
  }
  Box root_box() const {
    Box b;
    b.n = n;
    for (int i = 0; i < n; ++i) {
      b.lo[i] = origin[i];
      b.hi[i] = origin[i] + static_cast<double>(cells[i]) * base;
    }
    return b;
  }
  std::vector<DyadicCube> children(const DyadicCube& q) const {
    std::vector<DyadicCube> out;
    int kids = 1 << n;
    out.reserve(static_cast<std::size_t>(kids));
    for (int m = 0; m < kids; ++m) {
      DyadicCube c;
      c.level = q.level + 1;
      for (int i = 0; i < n; ++i) c.idx[i] = 2 * q.idx[i] + ((m >> i) & 1);
      out.push_back(c);
    }
    return out;
  }
  DyadicCube parent(const DyadicCube& q) const {
    DyadicCube p;
    p.level = q.level - 1;
    for (int i = 0; i < n; ++i) p.idx[i] = q.idx[i] >> 1;
    return p;
  }
  // Index of the level-`level` cube containing x (clamped to the frame).
  DyadicCube locate(const Pt& x, int level) const {
    DyadicCube q;
    q.level = level;
    double s = side(level);
    for (int i = 0; i < n; ++i) {
      auto v = static_cast<std::int64_t>(std::floor((x[i] - origin[i]) / s));
      std::int64_t m = extent(i, level);
      q.idx[i] = std::max<std::int64_t>(0, std::min(m - 1, v));
    }
    return q;
  }
};

// Frame over a square root box [o, o+size]^n with size = base.
inline RootFrame square_frame(const Pt& origin, double size, int n) {
  RootFrame f;
  f.origin = origin;
  f.base = size;
  f.cells = {1, 1, 1};
  f.n = n;
  return f;
}

}  // namespace sobex::geom
