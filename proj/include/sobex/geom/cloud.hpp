#pragma once

#include <vector>

#include "sobex/core.hpp"

namespace sobex::geom {

// Weighted point sample of a d-Ahlfors regular set: weights quadrature the
// measure H^d restricted to the set.
struct AhlforsCloud {
  std::vector<Pt> points;
  std::vector<double> weights;
  double d = 1.0;   // Hausdorff dimension
  int n = 2;        // ambient dimension
  double diam = 1.0;

  double total_weight() const {
    double s = 0;
    for (double w : weights) s += w;
    return s;
  }
};

// Two-sided regularity constant over sampled centers and radii:
// sup max(r^d / mass, mass / r^d) with mass = sum of weights in B(x,r).
// Throws NotRegular when the constant exceeds `cap`.
double ahlfors_check(const AhlforsCloud& cloud, const std::vector<double>& radii, double cap = 1e3,
                     int max_centers = 512);

// Uniformly weighted cloud on the segment [0,1] x {0} (d = 1).
AhlforsCloud segment_cloud(int count);

}  // namespace sobex::geom
