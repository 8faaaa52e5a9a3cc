#include "sobex/bvp/tensor.hpp"

#include <cmath>
#include <random>

namespace sobex::bvp {

CoefficientTensor identity_tensor(int n) {
  CoefficientTensor A;
  A.n = n;
  A.M = 1;
  A.sup_bound = 1;
  A.kappa = 1;
  A.eval = [n](const Pt&, double* a) {
    for (int al = 0; al < n; ++al)
      for (int be = 0; be < n; ++be) a[al * n + be] = al == be ? 1.0 : 0.0;
  };
  return A;
}

CoefficientTensor meyers_tensor(double mu) {
  CoefficientTensor A;
  A.n = 2;
  A.M = 1;
  A.sup_bound = 1;
  A.kappa = mu * mu;
  A.eval = [mu](const Pt& x, double* a) {
    double r2 = x[0] * x[0] + x[1] * x[1];
    if (r2 == 0) r2 = 1e-300;
    double c = (1 - mu * mu) / r2;
    a[0 * 2 + 0] = 1 - c * x[1] * x[1];
    a[0 * 2 + 1] = c * x[0] * x[1];
    a[1 * 2 + 0] = c * x[0] * x[1];
    a[1 * 2 + 1] = 1 - c * x[0] * x[0];
  };
  return A;
}

CoefficientTensor degiorgi_tensor(double gamma, int n) {
  CoefficientTensor A;
  A.n = n;
  A.M = n;
  double c = gamma * (n - gamma) * (n - 2) * (n - 2) /
             ((n - 2 * gamma) * (n - 2 * gamma) * (n - 1) * (n - 1));
  A.sup_bound = 1 + c * (1 + static_cast<double>(n) / (n - 2)) * (1 + static_cast<double>(n) / (n - 2));
  A.kappa = 1;
  A.eval = [n, c](const Pt& x, double* a) {
    double r2 = norm2(x);
    if (r2 == 0) r2 = 1e-300;
    // a^{al be}_{ij} = delta delta + c [delta_{i al} + q x_i x_al / r2]
    //                               [delta_{j be} + q x_j x_be / r2]
    double q = static_cast<double>(n) / (n - 2);
    for (int al = 0; al < n; ++al)
      for (int be = 0; be < n; ++be)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double lhs = (i == al ? 1.0 : 0.0) + q * x[i] * x[al] / r2;
            double rhs = (j == be ? 1.0 : 0.0) + q * x[j] * x[be] / r2;
            double v = (al == be && i == j ? 1.0 : 0.0) + c * lhs * rhs;
            a[(al * n + be) * n * n + i * n + j] = v;
          }
  };
  return A;
}

double ellipticity_sample(const CoefficientTensor& A, const geom::DomainOracle& oracle, int samples,
                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Box b = oracle.bounds();
  std::uniform_real_distribution<double> U(0, 1);
  std::normal_distribution<double> G(0, 1);
  std::vector<double> a(A.size());
  std::vector<double> zeta(static_cast<std::size_t>(A.n) * A.M);
  double worst = std::numeric_limits<double>::infinity();
  int done = 0;
  while (done < samples) {
    Pt x{0, 0, 0};
    for (int i = 0; i < b.n; ++i) x[i] = b.lo[i] + U(rng) * (b.hi[i] - b.lo[i]);
    if (!oracle.contains(x)) continue;
    for (auto& z : zeta) z = G(rng);
    double nz = 0;
    for (auto z : zeta) nz += z * z;
    if (nz == 0) continue;
    A.eval(x, a.data());
    double quad = 0;
    int n = A.n, M = A.M;
    for (int al = 0; al < n; ++al)
      for (int be = 0; be < n; ++be)
        for (int i = 0; i < M; ++i)
          for (int j = 0; j < M; ++j)
            quad += a[(al * n + be) * M * M + i * M + j] * zeta[al * M + i] * zeta[be * M + j];
    worst = std::min(worst, quad / nz);
    ++done;
  }
  return worst;
}

}  // namespace sobex::bvp
