#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sobex {

// Point in R^n, n <= 3. Unused coordinates stay 0 so norms and dot
// products over all three slots are dimension-agnostic.
using Pt = std::array<double, 3>;

inline Pt pt(double x, double y) { return {x, y, 0.0}; }
inline Pt pt(double x, double y, double z) { return {x, y, z}; }

inline Pt operator+(const Pt& a, const Pt& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Pt operator-(const Pt& a, const Pt& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Pt operator*(double s, const Pt& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Pt& a, const Pt& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm2(const Pt& a) { return dot(a, a); }
inline double norm(const Pt& a) { return std::sqrt(norm2(a)); }
inline double dist(const Pt& a, const Pt& b) { return norm(a - b); }

// Axis-aligned box in R^n.
struct Box {
  Pt lo{0, 0, 0};
  Pt hi{0, 0, 0};
  int n = 2;

  double side(int axis) const { return hi[axis] - lo[axis]; }
  Pt center() const { return 0.5 * (lo + hi); }
  double diam() const {
    double s = 0;
    for (int i = 0; i < n; ++i) s += side(i) * side(i);
    return std::sqrt(s);
  }
  double volume() const {
    double v = 1;
    for (int i = 0; i < n; ++i) v *= side(i);
    return v;
  }
  bool contains(const Pt& x) const {
    for (int i = 0; i < n; ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }
  bool intersects(const Box& b) const {
    for (int i = 0; i < n; ++i)
      if (hi[i] < b.lo[i] || b.hi[i] < lo[i]) return false;
    return true;
  }
  Box dilated(double factor) const {
    Box r = *this;
    Pt c = center();
    for (int i = 0; i < n; ++i) {
      double h = 0.5 * factor * side(i);
      r.lo[i] = c[i] - h;
      r.hi[i] = c[i] + h;
    }
    return r;
  }
  // Euclidean distance from x to the box (0 inside).
  double distance(const Pt& x) const {
    double s = 0;
    for (int i = 0; i < n; ++i) {
      double d = std::max({lo[i] - x[i], x[i] - hi[i], 0.0});
      s += d * d;
    }
    return std::sqrt(s);
  }
};

inline Box box2(double x0, double y0, double x1, double y1) {
  Box b;
  b.lo = pt(x0, y0);
  b.hi = pt(x1, y1);
  b.n = 2;
  return b;
}
inline Box box3(double x0, double y0, double z0, double x1, double y1, double z1) {
  Box b;
  b.lo = pt(x0, y0, z0);
  b.hi = pt(x1, y1, z1);
  b.n = 3;
  return b;
}

// Error taxonomy. Each named failure mode from the library surfaces as a
// typed exception holding a short machine-readable tag.
class Error : public std::runtime_error {
 public:
  Error(std::string tag, const std::string& what) : std::runtime_error(what), tag_(std::move(tag)) {}
  const std::string& tag() const { return tag_; }

 private:
  std::string tag_;
};

#define SOBEX_ERROR(Name)                                                              \
  class Name : public Error {                                                          \
   public:                                                                             \
    explicit Name(const std::string& what) : Error(#Name, what) {}                     \
  }

SOBEX_ERROR(EmptyDomain);
SOBEX_ERROR(OracleInconsistent);
SOBEX_ERROR(NoReflection);
SOBEX_ERROR(DegenerateCover);
SOBEX_ERROR(NotRegular);
SOBEX_ERROR(Disconnected);
SOBEX_ERROR(SingularQuadraturePoint);
SOBEX_ERROR(QuadratureUnderflow);
SOBEX_ERROR(OrderMismatch);
SOBEX_ERROR(KernelUnderresolved);
SOBEX_ERROR(PlanGap);
SOBEX_ERROR(SupportLeak);
SOBEX_ERROR(CollarViolation);
SOBEX_ERROR(PatchGap);
SOBEX_ERROR(EmptyBall);
SOBEX_ERROR(UnderresolvedBall);
SOBEX_ERROR(EllipticityFail);
SOBEX_ERROR(EmptySpace);
SOBEX_ERROR(Incompatible);
SOBEX_ERROR(NotConverged);
SOBEX_ERROR(Inconclusive);
SOBEX_ERROR(ConfigError);

#undef SOBEX_ERROR

}  // namespace sobex
