#pragma once

#include <functional>
#include <vector>

#include "sobex/core.hpp"
#include "sobex/multiindex.hpp"

namespace sobex::fn {

// Pointwise-evaluable field with optional exact derivatives. Components
// beyond M are never requested.
struct AnalyticField {
  int M = 1;
  std::function<double(const Pt&, int)> value;
  // exact derivative evaluator for |alpha| <= deriv_order; null -> finite
  // differences at the caller's spacing
  std::function<double(const Pt&, const MultiIdx&, int)> deriv;
  int deriv_order = 0;
  std::vector<Pt> singular_points;
};

inline AnalyticField scalar_field(std::function<double(const Pt&)> f) {
  AnalyticField u;
  u.M = 1;
  u.value = [f = std::move(f)](const Pt& x, int) { return f(x); };
  return u;
}

inline AnalyticField constant_field(double c, int M = 1) {
  AnalyticField u;
  u.M = M;
  u.value = [c](const Pt&, int) { return c; };
  u.deriv = [c](const Pt&, const MultiIdx& a, int) { return a.order() == 0 ? c : 0.0; };
  u.deriv_order = 8;
  return u;
}

// Derivative by nested 2nd-order central differences (fallback when no
// exact evaluator is attached).
double fd_derivative(const AnalyticField& u, const Pt& x, const MultiIdx& alpha, int comp, double h);

// Derivative dispatch: exact when available, else central differences;
// sets used_fd when the fallback ran.
double field_derivative(const AnalyticField& u, const Pt& x, const MultiIdx& alpha, int comp, double h_fd,
                        bool* used_fd = nullptr);

}  // namespace sobex::fn
