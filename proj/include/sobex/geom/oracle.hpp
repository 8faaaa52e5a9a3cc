#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sobex/core.hpp"
#include "sobex/geom/exact.hpp"

namespace sobex::geom {

struct Segment {
  Pt a, b;
};

// Membership + boundary-distance description of an open set. The distance
// is to the full topological boundary, is 1-Lipschitz, and is exact (up to
// double rounding) for the polygonal kinds, which additionally expose their
// boundary segments in Q[sqrt(3)] coordinates for exact verification.
class DomainOracle {
 public:
  virtual ~DomainOracle() = default;

  virtual bool contains(const Pt& x) const = 0;
  virtual double boundary_distance(const Pt& x) const = 0;
  // Distance from the box (as a set) to the boundary.
  virtual double cube_distance(const Box& q) const = 0;
  virtual Box bounds() const = 0;
  virtual std::string kind() const = 0;
  virtual std::optional<double> rad() const { return std::nullopt; }

  // Polygonal kinds: boundary segments (doubles mirror the exact ones).
  virtual const std::vector<Segment>* segments() const { return nullptr; }
  virtual const std::vector<QSeg>* exact_segments() const { return nullptr; }

  // Exact squared distance from a dyadic box to the boundary, when the
  // oracle supports it. `near` restricts the scan to segments whose double
  // distance does not exceed sqrt(near_bound2) * (1+1e-9); pass a negative
  // bound to scan everything.
  virtual std::optional<Q3> exact_cube_dist2(const Box& q) const;
};

using OraclePtr = std::shared_ptr<const DomainOracle>;

// Simple polygon (vertices in order, closed implicitly). Interior decided
// by crossing parity, so both convex and non-convex polygons work.
class PolygonOracle : public DomainOracle {
 public:
  PolygonOracle(std::vector<Pt> vertices, std::string kind_name);
  // Exact construction: vertices in Q[sqrt(3)]; doubles derived from them.
  PolygonOracle(std::vector<QPt> vertices, std::string kind_name);

  bool contains(const Pt& x) const override;
  double boundary_distance(const Pt& x) const override;
  double cube_distance(const Box& q) const override;
  Box bounds() const override { return bounds_; }
  std::string kind() const override { return kind_; }
  std::optional<double> rad() const override;
  const std::vector<Segment>* segments() const override { return &segs_; }
  const std::vector<QSeg>* exact_segments() const override { return exact_segs_.empty() ? nullptr : &exact_segs_; }

 private:
  void finish();
  std::vector<Pt> verts_;
  std::vector<Segment> segs_;
  std::vector<QSeg> exact_segs_;
  Box bounds_;
  std::string kind_;
};

// Axis-aligned open rectangle/box (works in 2-D and 3-D).
class RectOracle : public DomainOracle {
 public:
  explicit RectOracle(Box b);
  bool contains(const Pt& x) const override;
  double boundary_distance(const Pt& x) const override;
  double cube_distance(const Box& q) const override;
  Box bounds() const override { return box_; }
  std::string kind() const override { return "rect"; }
  std::optional<double> rad() const override;
  const std::vector<Segment>* segments() const override { return box_.n == 2 ? &segs_ : nullptr; }
  const std::vector<QSeg>* exact_segments() const override { return box_.n == 2 ? &exact_segs_ : nullptr; }

 private:
  Box box_;
  std::vector<Segment> segs_;
  std::vector<QSeg> exact_segs_;
};

// Horizontal slab {lo < y < hi}, unbounded in the other directions.
class SlabOracle : public DomainOracle {
 public:
  SlabOracle(double lo, double hi, int axis = 1, int n = 2) : lo_(lo), hi_(hi), axis_(axis), n_(n) {}
  bool contains(const Pt& x) const override { return x[axis_] > lo_ && x[axis_] < hi_; }
  double boundary_distance(const Pt& x) const override {
    return std::min(std::abs(x[axis_] - lo_), std::abs(x[axis_] - hi_));
  }
  double cube_distance(const Box& q) const override;
  Box bounds() const override;
  std::string kind() const override { return "slab"; }
  std::optional<double> rad() const override { return std::nullopt; }
  std::optional<Q3> exact_cube_dist2(const Box& q) const override;

 private:
  double lo_, hi_;
  int axis_, n_;
};

// Interior of the complement of an open set; shares the boundary.
class ComplementOracle : public DomainOracle {
 public:
  explicit ComplementOracle(OraclePtr inner, Box clip) : inner_(std::move(inner)), clip_(clip) {}
  bool contains(const Pt& x) const override {
    return !inner_->contains(x) && inner_->boundary_distance(x) > 0;
  }
  double boundary_distance(const Pt& x) const override { return inner_->boundary_distance(x); }
  double cube_distance(const Box& q) const override { return inner_->cube_distance(q); }
  Box bounds() const override { return clip_; }
  std::string kind() const override { return "complement(" + inner_->kind() + ")"; }
  const std::vector<Segment>* segments() const override { return inner_->segments(); }
  const std::vector<QSeg>* exact_segments() const override { return inner_->exact_segments(); }
  std::optional<Q3> exact_cube_dist2(const Box& q) const override { return inner_->exact_cube_dist2(q); }

 private:
  OraclePtr inner_;
  Box clip_;
};

// Union of well-separated open sets. Boundary distance is the min over
// parts, which is exact when the closures are disjoint.
class UnionOracle : public DomainOracle {
 public:
  explicit UnionOracle(std::vector<OraclePtr> parts);
  bool contains(const Pt& x) const override;
  double boundary_distance(const Pt& x) const override;
  double cube_distance(const Box& q) const override;
  Box bounds() const override { return bounds_; }
  std::string kind() const override;
  const std::vector<Segment>* segments() const override { return segs_.empty() ? nullptr : &segs_; }
  const std::vector<QSeg>* exact_segments() const override { return exact_segs_.empty() ? nullptr : &exact_segs_; }

 private:
  std::vector<OraclePtr> parts_;
  std::vector<Segment> segs_;
  std::vector<QSeg> exact_segs_;
  Box bounds_;
};

// Outward-cusp domain {0 < x1 < 1, 0 < x2 < x1^a} with a > 1. The power
// curve makes this non-polygonal; distances to the curve are computed by a
// certified bounding-box subdivision (monotone curve pieces have exact
// bounding boxes), accurate to ~1e-12.
class CuspOracle : public DomainOracle {
 public:
  explicit CuspOracle(double a);
  bool contains(const Pt& x) const override;
  double boundary_distance(const Pt& x) const override;
  double cube_distance(const Box& q) const override;
  Box bounds() const override { return box2(0, 0, 1, 1); }
  std::string kind() const override { return "cusp"; }
  std::optional<double> rad() const override;
  double exponent() const { return a_; }

 private:
  double curve_point_dist(const Pt& x) const;
  double curve_box_dist(const Box& q) const;
  double a_;
};

// Named model domains.
OraclePtr make_unit_square();
OraclePtr make_lshape();   // [0,1]^2 minus the closed upper-right quadrant
OraclePtr make_rect(const Box& b);
OraclePtr make_strip();    // {0 < y < 1}
OraclePtr make_cusp(double a);
OraclePtr make_polygon(std::vector<Pt> verts, std::string name = "polygon");
OraclePtr make_complement(OraclePtr inner, const Box& clip);
OraclePtr make_union(std::vector<OraclePtr> parts);

// An oracle for the empty set (EmptyDomain testing).
OraclePtr make_empty();

}  // namespace sobex::geom
