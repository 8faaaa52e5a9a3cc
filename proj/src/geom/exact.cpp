#include "sobex/geom/exact.hpp"

#include <cmath>

namespace sobex::geom {

Rat rat_of_dyadic(double v) {
  if (v == 0) return Rat(0);
  int exp = 0;
  double m = std::frexp(v, &exp);  // v = m * 2^exp, 0.5 <= |m| < 1
  // m * 2^53 is an exact integer for any finite double
  long long mi = static_cast<long long>(std::ldexp(m, 53));
  exp -= 53;
  Rat r(mi);
  if (exp >= 0) {
    boost::multiprecision::cpp_int sc = boost::multiprecision::cpp_int(1) << exp;
    r *= Rat(sc);
  } else {
    boost::multiprecision::cpp_int sc = boost::multiprecision::cpp_int(1) << (-exp);
    r /= Rat(sc);
  }
  return r;
}

Q3 point_segment_dist2(const QPt& p, const QSeg& s) {
  QPt d = qsub(s.b, s.a);
  QPt w = qsub(p, s.a);
  Q3 len2 = qnorm2(d);
  if (len2.sign() == 0) return qnorm2(w);  // degenerate segment
  Q3 t = qdot(w, d);
  if (t.sign() <= 0) return qnorm2(w);
  if ((t - len2).sign() >= 0) return qnorm2(qsub(p, s.b));
  // squared distance = |w|^2 - t^2/len2; keep it in the field by clearing
  // the rational denominator len2 (len2 = a + b sqrt3 has rational inverse
  // (a - b sqrt3)/(a^2 - 3 b^2)).
  Q3 conj(len2.a, -len2.b);
  Rat den = len2.a * len2.a - 3 * len2.b * len2.b;
  Q3 inv;
  if (den != 0) {
    inv = Q3(conj.a / den, conj.b / den);
  } else {
    // len2 rational multiple impossible here unless b=0 handled by den=a^2
    inv = Q3(Rat(1) / len2.a, Rat(0));
  }
  Q3 proj = t * t * inv;
  return qnorm2(w) - proj;
}

namespace {
bool segments_intersect(const QSeg& s, const QSeg& t) {
  QPt r = qsub(s.b, s.a), q = qsub(t.b, t.a);
  Q3 d1 = qcross(r, qsub(t.a, s.a));
  Q3 d2 = qcross(r, qsub(t.b, s.a));
  Q3 d3 = qcross(q, qsub(s.a, t.a));
  Q3 d4 = qcross(q, qsub(s.b, t.a));
  int s1 = d1.sign(), s2 = d2.sign(), s3 = d3.sign(), s4 = d4.sign();
  if (((s1 > 0 && s2 < 0) || (s1 < 0 && s2 > 0)) && ((s3 > 0 && s4 < 0) || (s3 < 0 && s4 > 0))) return true;
  auto on_seg = [](const QSeg& g, const QPt& p) {
    QPt d = qsub(g.b, g.a);
    if (qcross(d, qsub(p, g.a)).sign() != 0) return false;
    Q3 t0 = qdot(qsub(p, g.a), d);
    return t0.sign() >= 0 && (t0 - qnorm2(d)).sign() <= 0;
  };
  if (s1 == 0 && on_seg(s, t.a)) return true;
  if (s2 == 0 && on_seg(s, t.b)) return true;
  if (s3 == 0 && on_seg(t, s.a)) return true;
  if (s4 == 0 && on_seg(t, s.b)) return true;
  return false;
}
}  // namespace

Q3 segment_segment_dist2(const QSeg& s, const QSeg& t) {
  if (segments_intersect(s, t)) return Q3(0);
  Q3 best = point_segment_dist2(s.a, t);
  Q3 c = point_segment_dist2(s.b, t);
  if (c < best) best = c;
  c = point_segment_dist2(t.a, s);
  if (c < best) best = c;
  c = point_segment_dist2(t.b, s);
  if (c < best) best = c;
  return best;
}

Q3 box_segment_dist2(const QPt& lo, const QPt& hi, const QSeg& s) {
  // If either endpoint is inside the box the distance is 0.
  auto inside = [&](const QPt& p) {
    return (p.x - lo.x).sign() >= 0 && (hi.x - p.x).sign() >= 0 && (p.y - lo.y).sign() >= 0 &&
           (hi.y - p.y).sign() >= 0;
  };
  if (inside(s.a) || inside(s.b)) return Q3(0);
  QPt c00 = lo, c11 = hi;
  QPt c10 = {hi.x, lo.y}, c01 = {lo.x, hi.y};
  QSeg edges[4] = {{c00, c10}, {c10, c11}, {c11, c01}, {c01, c00}};
  Q3 best = segment_segment_dist2(edges[0], s);
  for (int i = 1; i < 4; ++i) {
    Q3 c = segment_segment_dist2(edges[i], s);
    if (c < best) best = c;
  }
  return best;
}

}  // namespace sobex::geom
