#pragma once

#include <cstdint>
#include <functional>

#include "sobex/core.hpp"
#include "sobex/geom/oracle.hpp"

namespace sobex::bvp {

// Second-order (m=1) coefficient tensor: M x M blocks A_{alpha beta} for
// axis indices alpha, beta < n, bounded measurable entries, strong
// ellipticity constant kappa. eval fills a[(al*n+be)*M*M + i*M + j].
struct CoefficientTensor {
  int n = 2;
  int M = 1;
  std::function<void(const Pt&, double*)> eval;
  double sup_bound = 1;
  double kappa = 1;
  std::size_t size() const { return static_cast<std::size_t>(n) * n * M * M; }
};

CoefficientTensor identity_tensor(int n);

// Meyers' tensor on the punctured disc: A = I - (1-mu^2) t t^T with t the
// unit tangential direction; eigenvalues {1, mu^2}.
CoefficientTensor meyers_tensor(double mu);

// De Giorgi's system tensor in R^3 (M = n = 3).
CoefficientTensor degiorgi_tensor(double gamma, int n = 3);

// Smallest sampled Rayleigh quotient Re(a zeta zeta) / |zeta|^2 over
// random (x, zeta) pairs drawn inside the domain.
double ellipticity_sample(const CoefficientTensor& A, const geom::DomainOracle& oracle, int samples,
                          std::uint64_t seed = 0x5eed);

}  // namespace sobex::bvp
