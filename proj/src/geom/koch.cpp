#include "sobex/geom/koch.hpp"

#include <cmath>

namespace sobex::geom {

namespace {

// rotate v by -60 degrees: (vx/2 + vy*sqrt3/2, -vx*sqrt3/2 + vy/2)
QPt rot_minus60(const QPt& v) {
  Q3 half(Rat(1, 2));
  Q3 half_sqrt3(Rat(0), Rat(1, 2));
  return {v.x * half + v.y * half_sqrt3, Q3() - v.x * half_sqrt3 + v.y * half};
}

}  // namespace

KochPrefractal koch_prefractal(int level) {
  if (level < 0 || level > 8) throw ConfigError("koch level must be in [0, 8]");
  // unit equilateral triangle, counter-clockwise; bumps then point outward
  std::vector<QPt> poly = {{Q3(0), Q3(0)}, {Q3(1), Q3(0)}, {Q3(Rat(1, 2)), Q3(Rat(0), Rat(1, 2))}};
  for (int l = 0; l < level; ++l) {
    std::vector<QPt> next;
    next.reserve(poly.size() * 4);
    std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
      QPt p = poly[i], q = poly[(i + 1) % m];
      QPt d = qsub(q, p);
      Q3 third(Rat(1, 3));
      QPt a = {p.x + d.x * third, p.y + d.y * third};
      QPt b = {p.x + d.x * third + d.x * third, p.y + d.y * third + d.y * third};
      QPt bump = rot_minus60(qsub(b, a));
      QPt mid = {a.x + bump.x, a.y + bump.y};
      next.push_back(p);
      next.push_back(a);
      next.push_back(mid);
      next.push_back(b);
    }
    poly = std::move(next);
  }

  KochPrefractal out;
  auto oracle = std::make_shared<PolygonOracle>(poly, "koch");
  out.domain = oracle;

  const auto& segs = *oracle->segments();
  out.cloud.n = 2;
  out.cloud.d = std::log(4.0) / std::log(3.0);
  double w = 1.0 / static_cast<double>(segs.size());  // 3*4^level edges, total mass 1
  for (const auto& s : segs) {
    out.cloud.points.push_back(0.5 * (s.a + s.b));
    out.cloud.weights.push_back(w);
  }
  double diam = 0;
  const auto& pts = out.cloud.points;
  // diameter over a boundary subsample (exact enough for scale metadata)
  std::size_t stride = std::max<std::size_t>(1, pts.size() / 256);
  for (std::size_t i = 0; i < pts.size(); i += stride)
    for (std::size_t j = i; j < pts.size(); j += stride) diam = std::max(diam, dist(pts[i], pts[j]));
  out.cloud.diam = diam;
  return out;
}

namespace {

class CurveComplementOracle : public DomainOracle {
 public:
  CurveComplementOracle(OraclePtr polygon, Box clip) : poly_(std::move(polygon)), clip_(clip) {}
  bool contains(const Pt& x) const override { return poly_->boundary_distance(x) > 0; }
  double boundary_distance(const Pt& x) const override { return poly_->boundary_distance(x); }
  double cube_distance(const Box& q) const override { return poly_->cube_distance(q); }
  Box bounds() const override { return clip_; }
  std::string kind() const override { return "curve-complement(" + poly_->kind() + ")"; }
  const std::vector<Segment>* segments() const override { return poly_->segments(); }
  const std::vector<QSeg>* exact_segments() const override { return poly_->exact_segments(); }
  std::optional<Q3> exact_cube_dist2(const Box& q) const override { return poly_->exact_cube_dist2(q); }

 private:
  OraclePtr poly_;
  Box clip_;
};

}  // namespace

OraclePtr make_curve_complement(OraclePtr polygon, const Box& clip) {
  return std::make_shared<CurveComplementOracle>(std::move(polygon), clip);
}

}  // namespace sobex::geom
