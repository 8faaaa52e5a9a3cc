#pragma once

#include <functional>
#include <vector>

#include "sobex/core.hpp"
#include "sobex/fn/gridfield.hpp"
#include "sobex/multiindex.hpp"

namespace sobex::fn {

// Polynomial of degree <= deg around a center, coefficients in the scaled
// monomial basis (x-c)^alpha / alpha!.
struct PolynomialK {
  Pt center{0, 0, 0};
  int n = 2;
  int deg = 0;
  std::vector<MultiIdx> mis;   // |alpha| <= deg, graded
  std::vector<double> coef;

  double eval(const Pt& x) const {
    Pt d = x - center;
    double v = 0;
    for (std::size_t i = 0; i < mis.size(); ++i) v += coef[i] * pow_mi(d, mis[i]) / factorial(mis[i]);
    return v;
  }
  // derivative value of order beta at x
  double deriv(const Pt& x, const MultiIdx& beta) const {
    Pt d = x - center;
    double v = 0;
    for (std::size_t i = 0; i < mis.size(); ++i) {
      if (!(beta <= mis[i])) continue;
      MultiIdx g = mis[i] - beta;
      v += coef[i] * pow_mi(d, g) / factorial(g);
    }
    return v;
  }
  bool all_zero() const {
    for (double c : coef)
      if (c != 0.0) return false;
    return true;
  }
};

// Quadrature node set over a cube for the moment integrals.
struct CubeQuad {
  std::vector<Pt> pts;
  std::vector<double> w;  // sums to vol(Q)
};

// Tensor 2-point Gauss on a cells^n subdivision (exact through degree 3
// per axis, ample for the k <= 3 moment systems).
CubeQuad gauss_quadrature(const Box& q, int cells_per_axis);

// Lattice cells of `g` whose centers lie in q (midpoint rule on grid data).
// Throws QuadratureUnderflow when fewer than 2^n cells land inside.
CubeQuad lattice_quadrature(const Box& q, const GridField& g);

// Best-fit polynomial of order k (degree k-1) on Q: the unique P with
// mean_Q d^alpha (u - P) = 0 for all |alpha| <= k-1, solved top-degree
// down (the system is triangular in decreasing |alpha|).
PolynomialK best_fit_polynomial(const std::function<double(const Pt&, const MultiIdx&)>& deriv_of_u,
                                const Box& q, int k, const CubeQuad& quad);

}  // namespace sobex::fn
