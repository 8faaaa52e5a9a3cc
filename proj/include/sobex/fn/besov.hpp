#pragma once

#include <vector>

#include "sobex/fn/field.hpp"
#include "sobex/geom/cloud.hpp"

namespace sobex::fn {

// Jet on an Ahlfors cloud: one value family {f_alpha}_{|alpha| <= k-1}
// per point.
struct BesovJet {
  const geom::AhlforsCloud* cloud = nullptr;
  int k = 1;
  std::vector<MultiIdx> comps;  // multi_indices(n, k-1)
  std::vector<double> data;     // [point * comps.size() + ci]

  double at(std::size_t point, std::size_t ci) const { return data[point * comps.size() + ci]; }
  double& at(std::size_t point, std::size_t ci) { return data[point * comps.size() + ci]; }
  std::size_t points() const { return cloud->points.size(); }
};

BesovJet make_jet(const geom::AhlforsCloud& cloud, int k);

// Jet of a smooth function: f_alpha = d^alpha g at the cloud points.
BesovJet jet_of_field(const geom::AhlforsCloud& cloud, int k, const AnalyticField& g, double h_fd = 1e-4);

struct BesovNormResult {
  double value = 0;
  double lp_part = 0;                 // sum_alpha ||f_alpha||_{L^p}
  std::vector<double> shell;          // per-j weighted double sums (already scaled)
};

// Discrete B^{p,p}_s norm: L^p parts plus the dyadic-shell double sums of
// Taylor remainders R_alpha over pairs |x-y| < 2^-j, j = 0..J_max, with
// cloud weights standing in for the measure. Requires k = [s]+1.
BesovNormResult besov_norm(const BesovJet& jet, double s, double p, int J_max);

}  // namespace sobex::fn
