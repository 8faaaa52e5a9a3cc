#include "sobex/fn/polyfit.hpp"

#include <cmath>

namespace sobex::fn {

CubeQuad gauss_quadrature(const Box& q, int cells_per_axis) {
  static const double g1 = 0.5 - 0.5 / std::sqrt(3.0);
  static const double g2 = 0.5 + 0.5 / std::sqrt(3.0);
  int n = q.n;
  CubeQuad out;
  double cw[3];
  int cells[3] = {cells_per_axis, cells_per_axis, n >= 3 ? cells_per_axis : 1};
  for (int i = 0; i < 3; ++i) cw[i] = (i < n) ? q.side(i) / cells_per_axis : 1.0;
  double wcell = 1.0;
  for (int i = 0; i < n; ++i) wcell *= cw[i] * 0.5;  // 2 gauss points per axis, weight 1/2 each
  int gpts = 1 << n;
  for (int ck = 0; ck < cells[2]; ++ck)
    for (int cj = 0; cj < cells[1]; ++cj)
      for (int ci = 0; ci < cells[0]; ++ci)
        for (int gp = 0; gp < gpts; ++gp) {
          Pt x{0, 0, 0};
          double t0 = ((gp >> 0) & 1) ? g2 : g1;
          double t1 = ((gp >> 1) & 1) ? g2 : g1;
          double t2 = ((gp >> 2) & 1) ? g2 : g1;
          x[0] = q.lo[0] + (ci + t0) * cw[0];
          x[1] = q.lo[1] + (cj + t1) * cw[1];
          if (n >= 3) x[2] = q.lo[2] + (ck + t2) * cw[2];
          out.pts.push_back(x);
          out.w.push_back(wcell);
        }
  return out;
}

CubeQuad lattice_quadrature(const Box& q, const GridField& g) {
  CubeQuad out;
  int n = g.n();
  // index window of centers inside q
  int lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
  for (int ax = 0; ax < n; ++ax) {
    lo[ax] = static_cast<int>(std::ceil((q.lo[ax] - g.box.lo[ax]) / g.h - 0.5 - 1e-12));
    hi[ax] = static_cast<int>(std::floor((q.hi[ax] - g.box.lo[ax]) / g.h - 0.5 + 1e-12));
    lo[ax] = std::max(lo[ax], 0);
    hi[ax] = std::min(hi[ax], g.dims[ax] - 1);
  }
  double vol = std::pow(g.h, n);
  for (int k = lo[2]; k <= (n >= 3 ? hi[2] : 0); ++k)
    for (int j = lo[1]; j <= hi[1]; ++j)
      for (int i = lo[0]; i <= hi[0]; ++i) {
        out.pts.push_back(g.center(i, j, k));
        out.w.push_back(vol);
      }
  if (out.pts.size() < (1u << n))
    throw QuadratureUnderflow("cube holds fewer than 2^n grid cells");
  return out;
}

PolynomialK best_fit_polynomial(const std::function<double(const Pt&, const MultiIdx&)>& deriv_of_u,
                                const Box& q, int k, const CubeQuad& quad) {
  int n = q.n;
  PolynomialK P;
  P.center = q.center();
  P.n = n;
  P.deg = k - 1;
  P.mis = multi_indices(n, k - 1);
  P.coef.assign(P.mis.size(), 0.0);

  double vol = 0;
  for (double w : quad.w) vol += w;

  // centered monomial averages M_gamma = mean_Q (x-c)^gamma / gamma!
  auto mono_avg = [&](const MultiIdx& g) {
    double v = 1.0;
    for (int i = 0; i < n; ++i) {
      int gi = g.a[i];
      if (gi % 2 == 1) return 0.0;
      double s = 0.5 * q.side(i);
      v *= std::pow(s, gi) / (gi + 1);
    }
    return v / factorial(g);
  };

  // moments of u
  std::vector<double> m(P.mis.size(), 0.0);
  for (std::size_t a = 0; a < P.mis.size(); ++a) {
    double acc = 0;
    for (std::size_t i = 0; i < quad.pts.size(); ++i) acc += quad.w[i] * deriv_of_u(quad.pts[i], P.mis[a]);
    m[a] = acc / vol;
  }

  // triangular solve, top degree first: mean d^beta P = c_beta +
  // sum_{alpha > beta} c_alpha M_{alpha-beta}
  for (int ord = k - 1; ord >= 0; --ord) {
    for (std::size_t b = 0; b < P.mis.size(); ++b) {
      if (P.mis[b].order() != ord) continue;
      double corr = 0;
      for (std::size_t a = 0; a < P.mis.size(); ++a) {
        if (P.mis[a].order() <= ord) continue;
        if (!(P.mis[b] <= P.mis[a])) continue;
        corr += P.coef[a] * mono_avg(P.mis[a] - P.mis[b]);
      }
      P.coef[b] = m[b] - corr;
    }
  }
  return P;
}

}  // namespace sobex::fn
