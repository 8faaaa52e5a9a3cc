#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <vector>

#include "sobex/core.hpp"

namespace sobex::geom {

using Rat = boost::multiprecision::cpp_rational;

// Element of Q[sqrt(3)]: a + b*sqrt(3). Closed under +,-,*; ordering is
// decided exactly by comparing a^2 against 3 b^2. This covers every vertex
// produced by the Koch generator (rotations by 60 degrees) as well as all
// dyadic cube corners (b = 0).
struct Q3 {
  Rat a = 0;
  Rat b = 0;

  Q3() = default;
  Q3(int v) : a(v) {}
  Q3(const Rat& v) : a(v) {}
  Q3(Rat av, Rat bv) : a(std::move(av)), b(std::move(bv)) {}

  Q3 operator+(const Q3& o) const { return {a + o.a, b + o.b}; }
  Q3 operator-(const Q3& o) const { return {a - o.a, b - o.b}; }
  Q3 operator-() const { return {-a, -b}; }
  Q3 operator*(const Q3& o) const { return {a * o.a + 3 * b * o.b, a * o.b + b * o.a}; }
  Q3& operator+=(const Q3& o) { a += o.a; b += o.b; return *this; }
  Q3& operator-=(const Q3& o) { a -= o.a; b -= o.b; return *this; }

  // sign of a + b*sqrt(3)
  int sign() const {
    int sa = a.sign(), sb = b.sign();
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // opposite signs: the dominant part wins, decided by a^2 vs 3 b^2
    int sd = Rat(a * a - 3 * b * b).sign();
    return sd > 0 ? sa : (sd < 0 ? sb : 0);
  }
  bool operator<(const Q3& o) const { return (*this - o).sign() < 0; }
  bool operator<=(const Q3& o) const { return (*this - o).sign() <= 0; }
  bool operator==(const Q3& o) const { return a == o.a && b == o.b; }

  double to_double() const { return a.convert_to<double>() + b.convert_to<double>() * 1.7320508075688772935; }
};

struct QPt {
  Q3 x, y;
};

inline Q3 qdot(const QPt& u, const QPt& v) { return u.x * v.x + u.y * v.y; }
inline QPt qsub(const QPt& u, const QPt& v) { return {u.x - v.x, u.y - v.y}; }
inline Q3 qcross(const QPt& u, const QPt& v) { return u.x * v.y - u.y * v.x; }
inline Q3 qnorm2(const QPt& u) { return qdot(u, u); }

// Exact rational from a double that is known to be a binary rational
// (dyadic cube corners, grid spacings).
Rat rat_of_dyadic(double v);
inline QPt qpt_of_dyadic(double x, double y) { return {Q3(rat_of_dyadic(x)), Q3(rat_of_dyadic(y))}; }

struct QSeg {
  QPt a, b;
};

// Squared distance from point p to segment s, exact.
Q3 point_segment_dist2(const QPt& p, const QSeg& s);

// Squared distance from segment to segment, exact (0 if they intersect).
Q3 segment_segment_dist2(const QSeg& s, const QSeg& t);

// Squared distance from an axis-aligned box [lo,hi] to a segment, exact.
Q3 box_segment_dist2(const QPt& lo, const QPt& hi, const QSeg& s);

}  // namespace sobex::geom
