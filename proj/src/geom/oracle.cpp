#include "sobex/geom/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sobex::geom {

namespace {

double point_segment_dist(const Pt& p, const Segment& s) {
  Pt d = s.b - s.a;
  Pt w = p - s.a;
  double len2 = dot(d, d);
  if (len2 == 0) return norm(w);
  double t = dot(w, d) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return dist(p, s.a + t * d);
}

double seg_seg_dist(const Segment& s, const Segment& t) {
  auto orient = [](const Pt& a, const Pt& b, const Pt& c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  };
  double d1 = orient(s.a, s.b, t.a), d2 = orient(s.a, s.b, t.b);
  double d3 = orient(t.a, t.b, s.a), d4 = orient(t.a, t.b, s.b);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return 0.0;
  return std::min(std::min(point_segment_dist(t.a, s), point_segment_dist(t.b, s)),
                  std::min(point_segment_dist(s.a, t), point_segment_dist(s.b, t)));
}

double box_segment_dist(const Box& q, const Segment& s) {
  if (q.contains(s.a) || q.contains(s.b)) return 0.0;
  Pt c00 = q.lo, c11 = q.hi;
  Pt c10 = pt(q.hi[0], q.lo[1]), c01 = pt(q.lo[0], q.hi[1]);
  Segment edges[4] = {{c00, c10}, {c10, c11}, {c11, c01}, {c01, c00}};
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : edges) best = std::min(best, seg_seg_dist(e, s));
  return best;
}

double min_dist_to_segments(const Pt& x, const std::vector<Segment>& segs) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : segs) best = std::min(best, point_segment_dist(x, s));
  return best;
}

double min_dist_box_to_segments(const Box& q, const std::vector<Segment>& segs) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : segs) {
    best = std::min(best, box_segment_dist(q, s));
    if (best == 0) break;
  }
  return best;
}

bool crossing_contains(const Pt& x, const std::vector<Pt>& verts) {
  bool in = false;
  std::size_t m = verts.size();
  for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
    const Pt& a = verts[i];
    const Pt& b = verts[j];
    // points exactly on an edge belong to the boundary, not the open set
    double cross = (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]);
    if (cross == 0) {
      double t = dot(x - a, b - a);
      if (t >= 0 && t <= norm2(b - a)) return false;
    }
    if ((a[1] > x[1]) != (b[1] > x[1])) {
      double t = (x[1] - a[1]) / (b[1] - a[1]);
      double xi = a[0] + t * (b[0] - a[0]);
      if (x[0] < xi) in = !in;
    }
  }
  return in;
}

// Minimum enclosing ball over points, centers restricted to candidate set
// (simple two-pass search; used for the rad() metadata only).
double enclosing_radius(const std::vector<Pt>& pts) {
  if (pts.empty()) return 0;
  Pt c{0, 0, 0};
  for (const auto& p : pts) c = c + (1.0 / pts.size()) * p;
  // few iterations of moving toward the farthest point sharpen the bound
  for (int it = 0; it < 64; ++it) {
    double worst = -1;
    Pt far = c;
    for (const auto& p : pts) {
      double d = dist(c, p);
      if (d > worst) {
        worst = d;
        far = p;
      }
    }
    c = c + (1.0 / (it + 2.0)) * (far - c);
  }
  double r = 0;
  for (const auto& p : pts) r = std::max(r, dist(c, p));
  return r;
}

}  // namespace

std::optional<Q3> DomainOracle::exact_cube_dist2(const Box& q) const {
  const std::vector<QSeg>* ex = exact_segments();
  const std::vector<Segment>* ds = segments();
  if (!ex || !ds) return std::nullopt;
  // Prefilter with the double distance: only segments within a conservative
  // margin of the double minimum can attain the exact minimum.
  double dmin = min_dist_box_to_segments(q, *ds);
  double cutoff = dmin + 1e-9 * (1 + dmin) + q.diam() * 1e-12;
  QPt lo = qpt_of_dyadic(q.lo[0], q.lo[1]);
  QPt hi = qpt_of_dyadic(q.hi[0], q.hi[1]);
  std::optional<Q3> best;
  for (std::size_t i = 0; i < ds->size(); ++i) {
    if (box_segment_dist(q, (*ds)[i]) > cutoff) continue;
    Q3 d2 = box_segment_dist2(lo, hi, (*ex)[i]);
    if (!best || d2 < *best) best = d2;
  }
  return best;
}

// --- PolygonOracle ---

PolygonOracle::PolygonOracle(std::vector<Pt> vertices, std::string kind_name)
    : verts_(std::move(vertices)), kind_(std::move(kind_name)) {
  exact_segs_.clear();
  std::size_t m = verts_.size();
  for (std::size_t i = 0; i < m; ++i) {
    QPt a = qpt_of_dyadic(verts_[i][0], verts_[i][1]);
    QPt b = qpt_of_dyadic(verts_[(i + 1) % m][0], verts_[(i + 1) % m][1]);
    exact_segs_.push_back({a, b});
  }
  finish();
}

PolygonOracle::PolygonOracle(std::vector<QPt> vertices, std::string kind_name) : kind_(std::move(kind_name)) {
  std::size_t m = vertices.size();
  verts_.reserve(m);
  for (const auto& v : vertices) verts_.push_back(pt(v.x.to_double(), v.y.to_double()));
  for (std::size_t i = 0; i < m; ++i) exact_segs_.push_back({vertices[i], vertices[(i + 1) % m]});
  finish();
}

void PolygonOracle::finish() {
  std::size_t m = verts_.size();
  segs_.clear();
  for (std::size_t i = 0; i < m; ++i) segs_.push_back({verts_[i], verts_[(i + 1) % m]});
  bounds_ = box2(verts_[0][0], verts_[0][1], verts_[0][0], verts_[0][1]);
  for (const auto& v : verts_) {
    bounds_.lo[0] = std::min(bounds_.lo[0], v[0]);
    bounds_.lo[1] = std::min(bounds_.lo[1], v[1]);
    bounds_.hi[0] = std::max(bounds_.hi[0], v[0]);
    bounds_.hi[1] = std::max(bounds_.hi[1], v[1]);
  }
}

bool PolygonOracle::contains(const Pt& x) const { return crossing_contains(x, verts_); }

double PolygonOracle::boundary_distance(const Pt& x) const { return min_dist_to_segments(x, segs_); }

double PolygonOracle::cube_distance(const Box& q) const { return min_dist_box_to_segments(q, segs_); }

std::optional<double> PolygonOracle::rad() const { return enclosing_radius(verts_); }

// --- RectOracle ---

RectOracle::RectOracle(Box b) : box_(b) {
  if (b.n == 2) {
    Pt c00 = b.lo, c11 = b.hi, c10 = pt(b.hi[0], b.lo[1]), c01 = pt(b.lo[0], b.hi[1]);
    segs_ = {{c00, c10}, {c10, c11}, {c11, c01}, {c01, c00}};
    for (const auto& s : segs_)
      exact_segs_.push_back({qpt_of_dyadic(s.a[0], s.a[1]), qpt_of_dyadic(s.b[0], s.b[1])});
  }
}

bool RectOracle::contains(const Pt& x) const {
  for (int i = 0; i < box_.n; ++i)
    if (x[i] <= box_.lo[i] || x[i] >= box_.hi[i]) return false;
  return true;
}

double RectOracle::boundary_distance(const Pt& x) const {
  if (contains(x)) {
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < box_.n; ++i) d = std::min({d, x[i] - box_.lo[i], box_.hi[i] - x[i]});
    return d;
  }
  // outside: distance to the box surface
  double out2 = 0;
  bool outside_any = false;
  double slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < box_.n; ++i) {
    double d = std::max({box_.lo[i] - x[i], x[i] - box_.hi[i], 0.0});
    if (d > 0) outside_any = true;
    out2 += d * d;
    slack = std::min({slack, std::abs(x[i] - box_.lo[i]), std::abs(x[i] - box_.hi[i])});
  }
  if (outside_any) return std::sqrt(out2);
  return slack;  // on the boundary or inside closure
}

double RectOracle::cube_distance(const Box& q) const {
  if (box_.n == 2) return min_dist_box_to_segments(q, segs_);
  // 3-D: distance from box q to the surface of box_. If q is strictly
  // inside, min over per-face slabs; if disjoint, box-box distance; if
  // straddling, 0.
  bool inside = true, outside = false;
  for (int i = 0; i < box_.n; ++i) {
    if (q.lo[i] < box_.lo[i] || q.hi[i] > box_.hi[i]) inside = false;
    if (q.hi[i] < box_.lo[i] || q.lo[i] > box_.hi[i]) outside = true;
  }
  if (inside) {
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < box_.n; ++i) d = std::min({d, q.lo[i] - box_.lo[i], box_.hi[i] - q.hi[i]});
    return d;
  }
  if (!outside) {
    // overlaps the boundary region: could still be fully outside closure
    double d2 = 0;
    for (int i = 0; i < box_.n; ++i) {
      double d = std::max({box_.lo[i] - q.hi[i], q.lo[i] - box_.hi[i], 0.0});
      d2 += d * d;
    }
    return std::sqrt(d2);
  }
  double d2 = 0;
  for (int i = 0; i < box_.n; ++i) {
    double d = std::max({box_.lo[i] - q.hi[i], q.lo[i] - box_.hi[i], 0.0});
    d2 += d * d;
  }
  return std::sqrt(d2);
}

std::optional<double> RectOracle::rad() const {
  return 0.5 * box_.diam();
}

// --- SlabOracle ---

double SlabOracle::cube_distance(const Box& q) const {
  double a = q.lo[axis_], b = q.hi[axis_];
  if (b < lo_ || a > hi_) return std::min(std::abs(lo_ - b), std::abs(a - hi_));
  if (a > lo_ && b < hi_) return std::min(a - lo_, hi_ - b);
  return 0.0;
}

Box SlabOracle::bounds() const {
  Box b;
  b.n = n_;
  for (int i = 0; i < n_; ++i) {
    b.lo[i] = -1e30;
    b.hi[i] = 1e30;
  }
  b.lo[axis_] = lo_;
  b.hi[axis_] = hi_;
  return b;
}

std::optional<Q3> SlabOracle::exact_cube_dist2(const Box& q) const {
  Rat a = rat_of_dyadic(q.lo[axis_]), b = rat_of_dyadic(q.hi[axis_]);
  Rat l = rat_of_dyadic(lo_), h = rat_of_dyadic(hi_);
  auto sq = [](const Rat& v) { return v * v; };
  Rat d;
  if (b < l)
    d = l - b;
  else if (a > h)
    d = a - h;
  else if (a > l && b < h)
    d = std::min(a - l, h - b);
  else
    d = 0;
  return Q3(sq(d));
}

// --- UnionOracle ---

UnionOracle::UnionOracle(std::vector<OraclePtr> parts) : parts_(std::move(parts)) {
  bool all_polygonal = true;
  for (const auto& p : parts_) {
    if (!p->segments()) all_polygonal = false;
  }
  if (all_polygonal) {
    for (const auto& p : parts_) {
      const auto* s = p->segments();
      const auto* e = p->exact_segments();
      segs_.insert(segs_.end(), s->begin(), s->end());
      if (e) exact_segs_.insert(exact_segs_.end(), e->begin(), e->end());
    }
  }
  bounds_ = parts_.front()->bounds();
  for (const auto& p : parts_) {
    Box b = p->bounds();
    for (int i = 0; i < bounds_.n; ++i) {
      bounds_.lo[i] = std::min(bounds_.lo[i], b.lo[i]);
      bounds_.hi[i] = std::max(bounds_.hi[i], b.hi[i]);
    }
  }
}

bool UnionOracle::contains(const Pt& x) const {
  for (const auto& p : parts_)
    if (p->contains(x)) return true;
  return false;
}

double UnionOracle::boundary_distance(const Pt& x) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& p : parts_) d = std::min(d, p->boundary_distance(x));
  return d;
}

double UnionOracle::cube_distance(const Box& q) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& p : parts_) d = std::min(d, p->cube_distance(q));
  return d;
}

std::string UnionOracle::kind() const {
  std::string k = "union(";
  for (std::size_t i = 0; i < parts_.size(); ++i) k += (i ? "," : "") + parts_[i]->kind();
  return k + ")";
}

// --- CuspOracle ---

CuspOracle::CuspOracle(double a) : a_(a) {}

bool CuspOracle::contains(const Pt& x) const {
  return x[0] > 0 && x[0] < 1 && x[1] > 0 && x[1] < std::pow(x[0], a_);
}

namespace {
double box_seg_dist_local(const Box& q, const Pt& a, const Pt& b) {
  // distance from box to segment (2-D)
  auto pt_seg = [](const Pt& p, const Pt& sa, const Pt& sb) {
    Pt d = sb - sa;
    double len2 = dot(d, d);
    double t = len2 == 0 ? 0.0 : std::clamp(dot(p - sa, d) / len2, 0.0, 1.0);
    return dist(p, sa + t * d);
  };
  if (q.contains(a) || q.contains(b)) return 0.0;
  Pt c00 = q.lo, c11 = q.hi, c10 = pt(q.hi[0], q.lo[1]), c01 = pt(q.lo[0], q.hi[1]);
  Pt corners[5] = {c00, c10, c11, c01, c00};
  double best = std::min(pt_seg(a, c00, c10), pt_seg(a, c00, c01));
  for (int e = 0; e < 4; ++e) {
    // segment-segment via endpoint distances + crossing test
    Pt ea = corners[e], eb = corners[e + 1];
    auto orient = [](const Pt& u, const Pt& v, const Pt& w) {
      return (v[0] - u[0]) * (w[1] - u[1]) - (v[1] - u[1]) * (w[0] - u[0]);
    };
    double d1 = orient(ea, eb, a), d2 = orient(ea, eb, b);
    double d3 = orient(a, b, ea), d4 = orient(a, b, eb);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return 0.0;
    best = std::min({best, pt_seg(a, ea, eb), pt_seg(b, ea, eb), pt_seg(ea, a, b), pt_seg(eb, a, b)});
  }
  return best;
}

// Distance from a box to the curve {(t, t^a), t in [t0,t1]} by chord
// subdivision: the curve deviates from its chord by at most
// max|f''| dt^2 / 8, so chord distance +- dev brackets the true distance.
double curve_box_dist_rec(const Box& q, double a, double t0, double t1, double best, int depth) {
  double dt = t1 - t0;
  double fpp = a * (a - 1);  // sup of |f''| on [0,1]
  double dev = fpp * dt * dt / 8.0;
  Pt p0 = pt(t0, std::pow(t0, a)), p1 = pt(t1, std::pow(t1, a));
  double chord = box_seg_dist_local(q, p0, p1);
  if (chord - dev >= best) return best;
  double tm = 0.5 * (t0 + t1);
  double upper = q.distance(pt(tm, std::pow(tm, a)));  // on-curve sample
  if (upper < best) best = upper;
  if (depth >= 48 || dev <= 1e-13 + 1e-10 * best) return best;
  best = curve_box_dist_rec(q, a, t0, tm, best, depth + 1);
  best = curve_box_dist_rec(q, a, tm, t1, best, depth + 1);
  return best;
}
}  // namespace

double CuspOracle::curve_box_dist(const Box& q) const {
  // the curve is the graph of the increasing map t -> t^a on [0,1]
  double x0 = std::clamp(q.lo[0], 0.0, 1.0);
  double x1 = std::clamp(q.hi[0], 0.0, 1.0);
  if (x0 < x1 || (x0 == x1 && q.lo[0] <= x0 && q.hi[0] >= x0)) {
    double f0 = std::pow(x0, a_), f1 = std::pow(x1, a_);
    if (f0 <= q.hi[1] && f1 >= q.lo[1]) return 0.0;  // curve passes through the box
  }
  return curve_box_dist_rec(q, a_, 0.0, 1.0, std::numeric_limits<double>::infinity(), 0);
}

double CuspOracle::curve_point_dist(const Pt& x) const {
  Box q = box2(x[0], x[1], x[0], x[1]);
  return curve_box_dist(q);
}

double CuspOracle::boundary_distance(const Pt& x) const {
  Segment bottom{pt(0, 0), pt(1, 0)};
  Segment right{pt(1, 0), pt(1, 1)};
  double d = std::min(point_segment_dist(x, bottom), point_segment_dist(x, right));
  return std::min(d, curve_point_dist(x));
}

double CuspOracle::cube_distance(const Box& q) const {
  Segment bottom{pt(0, 0), pt(1, 0)};
  Segment right{pt(1, 0), pt(1, 1)};
  double d = std::min(box_segment_dist(q, bottom), box_segment_dist(q, right));
  return std::min(d, curve_box_dist(q));
}

std::optional<double> CuspOracle::rad() const {
  return 0.5 * std::sqrt(2.0);
}

// --- factories ---

OraclePtr make_unit_square() { return std::make_shared<RectOracle>(box2(0, 0, 1, 1)); }

OraclePtr make_rect(const Box& b) { return std::make_shared<RectOracle>(b); }

OraclePtr make_lshape() {
  // [0,1]^2 minus the closed quadrant [1/2,1] x [1/2,1]
  std::vector<Pt> v = {pt(0, 0), pt(1, 0), pt(1, 0.5), pt(0.5, 0.5), pt(0.5, 1), pt(0, 1)};
  return std::make_shared<PolygonOracle>(v, "lshape");
}

OraclePtr make_strip() { return std::make_shared<SlabOracle>(0.0, 1.0); }

OraclePtr make_cusp(double a) { return std::make_shared<CuspOracle>(a); }

OraclePtr make_polygon(std::vector<Pt> verts, std::string name) {
  return std::make_shared<PolygonOracle>(std::move(verts), std::move(name));
}

OraclePtr make_complement(OraclePtr inner, const Box& clip) {
  return std::make_shared<ComplementOracle>(std::move(inner), clip);
}

OraclePtr make_union(std::vector<OraclePtr> parts) { return std::make_shared<UnionOracle>(std::move(parts)); }

namespace {
class EmptyOracle : public DomainOracle {
 public:
  bool contains(const Pt&) const override { return false; }
  double boundary_distance(const Pt&) const override { return std::numeric_limits<double>::infinity(); }
  double cube_distance(const Box&) const override { return std::numeric_limits<double>::infinity(); }
  Box bounds() const override { return box2(0, 0, 0, 0); }
  std::string kind() const override { return "empty"; }
};
}  // namespace

OraclePtr make_empty() { return std::make_shared<EmptyOracle>(); }

}  // namespace sobex::geom
