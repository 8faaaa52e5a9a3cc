#pragma once

#include <string>

#include "sobex/bvp/fem.hpp"
#include "sobex/fn/sobolev.hpp"

namespace sobex::bvp {

struct ClaimCheck {
  std::string claim;
  double measured = 0;
  double tolerance = 0;
  bool pass = false;
};

struct CaseReport {
  std::string name;
  std::vector<ClaimCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Radial integrability scan: I(h) = int_h^1 g(r) r^{n-1} dr on geometric
// panels with inner cutoffs h = 2^-j, j in [j0, j1]. Diverges iff the
// fitted slope of log I against log(1/h) over the last points exceeds
// 0.05; converges iff the last two values differ by < 2%; Inconclusive
// otherwise.
struct RadialScan {
  fn::ScanVerdict verdict;
  std::vector<std::pair<double, double>> table;
  double slope = 0;
};
RadialScan radial_scan(const std::function<double(double)>& g, int n, int j0 = 8, int j1 = 26);

// Meyers sharpness case on the polygonal unit disc:
// (a) weak residual of the exact singular field against interior hats
//     away from the cutoff region <= 1e-6,
// (b) gradient L^p scans split at p = 2/(1-mu) with 5% exponent margin,
// (c) the Galerkin W^{1,2} error against the exact field decreases
//     monotonically over the grid ladder.
CaseReport meyers_case(double mu, const std::vector<double>& grid_hs);

// De Giorgi sharpness case (n = M = 3):
// (a) sampled strong-ellipticity quotient >= 1,
// (b) weak identity residual of u = x|x|^-gamma - x against the
//     distributional right side, by parts, <= 1e-6,
// (c) W^{1,p} membership verdicts match p < n/gamma on both sides.
CaseReport degiorgi_case(double gamma, double h3d, const std::vector<double>& test_ps = {});

// Mazya scan for the 2m-order operator family: theta(eps) closed form
// (two algebraic routes compared to 1e-12), radial W^{m,p} membership
// verdicts split at p = n/(2 - theta(eps)) with 5% margin.
CaseReport mazya_scan(double eps, int m, int n);

double mazya_theta(double eps, int n);          // display form
double mazya_theta_general(double eps, int n);  // via a,b,c coefficients

// Manufactured-solution convergence driver for criterion-style checks:
// full Dirichlet or mixed (left-edge Dirichlet) Poisson on the unit
// square; returns L2 errors per grid and the conormal residuals.
struct ManufacturedReport {
  std::vector<double> hs;
  std::vector<double> l2;
  std::vector<double> conormal;
  std::vector<double> solver_tol;
};
ManufacturedReport manufactured_dirichlet(const std::vector<double>& hs);
ManufacturedReport manufactured_mixed(const std::vector<double>& hs);

}  // namespace sobex::bvp
