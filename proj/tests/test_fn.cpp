#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sobex/fn/besov.hpp"
#include "sobex/fn/polyfit.hpp"
#include "sobex/fn/sobolev.hpp"
#include "sobex/geom/koch.hpp"

using namespace sobex;
using namespace sobex::fn;
using namespace sobex::geom;

namespace {

AnalyticField field_x1() {
  AnalyticField u;
  u.M = 1;
  u.value = [](const Pt& x, int) { return x[0]; };
  u.deriv = [](const Pt& x, const MultiIdx& a, int) {
    if (a.order() == 0) return x[0];
    if (a.a[0] == 1 && a.order() == 1) return 1.0;
    return 0.0;
  };
  u.deriv_order = 8;
  return u;
}

// De Giorgi field u(x) = x/|x|^gamma - x in 3-D with exact gradient.
AnalyticField degiorgi_field(double gamma) {
  AnalyticField u;
  u.M = 3;
  u.value = [gamma](const Pt& x, int m) {
    double r = norm(x);
    return x[m] * std::pow(r, -gamma) - x[m];
  };
  u.deriv = [gamma](const Pt& x, const MultiIdx& a, int m) {
    double r = norm(x);
    if (a.order() == 0) return x[m] * std::pow(r, -gamma) - x[m];
    int b = -1;
    for (int i = 0; i < 3; ++i)
      if (a.a[i] == 1 && a.order() == 1) b = i;
    double rg = std::pow(r, -gamma);
    double del = (b == m) ? 1.0 : 0.0;
    return del * rg - gamma * x[m] * x[b] * rg / (r * r) - del;
  };
  u.deriv_order = 1;
  u.singular_points = {pt(0, 0, 0)};
  return u;
}

// dense constrained solve oracle for the best-fit polynomial: least squares
// min ||u - P||^2 over Q subject to the moment conditions -- the moment
// conditions already determine P, so we solve the square linear system
// mean d^beta P = mean d^beta u with a generic Gaussian elimination.
std::vector<double> dense_moment_solve(const std::function<double(const Pt&, const MultiIdx&)>& du,
                                       const Box& q, int k, const CubeQuad& quad) {
  auto mis = multi_indices(q.n, k - 1);
  std::size_t m = mis.size();
  double vol = 0;
  for (double w : quad.w) vol += w;
  Pt c = q.center();
  // A[b][a] = mean_Q d^beta ( (x-c)^alpha / alpha! )
  std::vector<std::vector<double>> A(m, std::vector<double>(m + 1, 0.0));
  for (std::size_t b = 0; b < m; ++b) {
    for (std::size_t a = 0; a < m; ++a) {
      if (!(mis[b] <= mis[a])) continue;
      MultiIdx g = mis[a] - mis[b];
      double acc = 0;
      for (std::size_t i = 0; i < quad.pts.size(); ++i)
        acc += quad.w[i] * pow_mi(quad.pts[i] - c, g) / factorial(g);
      A[b][a] = acc / vol;
    }
    double acc = 0;
    for (std::size_t i = 0; i < quad.pts.size(); ++i) acc += quad.w[i] * du(quad.pts[i], mis[b]);
    A[b][m] = acc / vol;
  }
  // gaussian elimination with partial pivot
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    std::swap(A[col], A[piv]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col || A[r][col] == 0) continue;
      double f = A[r][col] / A[col][col];
      for (std::size_t cc = col; cc <= m; ++cc) A[r][cc] -= f * A[col][cc];
    }
  }
  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = A[i][m] / A[i][i];
  return x;
}

}  // namespace

TEST_CASE("sobolev norm closed forms on the unit square") {
  auto sq = make_unit_square();
  SUBCASE("constant field, k=1, p=2") {
    auto res = sobolev_norm(constant_field(1.0), *sq, 1, 2.0, 1.0 / 64);
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(!res.used_fd);
  }
  SUBCASE("u = x1, k=1, p=2 gives 1/sqrt(3) + 1") {
    auto res = sobolev_norm(field_x1(), *sq, 1, 2.0, 1.0 / 128);
    CHECK(res.value == doctest::Approx(1.0 / std::sqrt(3.0) + 1.0).epsilon(2e-5));
  }
  SUBCASE("norm axioms on random smooth fields") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int t = 0; t < 3; ++t) {
      double a = U(rng), b = U(rng), c = U(rng);
      auto f1 = scalar_field([=](const Pt& x) { return a * std::sin(x[0]) + b * x[1]; });
      auto f2 = scalar_field([=](const Pt& x) { return c * std::cos(x[0] + x[1]); });
      auto fsum = scalar_field([=](const Pt& x) {
        return a * std::sin(x[0]) + b * x[1] + c * std::cos(x[0] + x[1]);
      });
      double h = 1.0 / 64;
      double n1 = sobolev_norm(f1, *sq, 1, 2.0, h).value;
      double n2 = sobolev_norm(f2, *sq, 1, 2.0, h).value;
      double ns = sobolev_norm(fsum, *sq, 1, 2.0, h).value;
      CHECK(ns <= n1 + n2 + 1e-9);
      auto fscaled = scalar_field([=](const Pt& x) { return -2.5 * (a * std::sin(x[0]) + b * x[1]); });
      double nsc = sobolev_norm(fscaled, *sq, 1, 2.0, h).value;
      CHECK(nsc == doctest::Approx(2.5 * n1).epsilon(1e-9));
    }
  }
}

TEST_CASE("sobolev norm on the cusp domain via 1-D analytic reduction") {
  // u = x1^{-b} on Omega_a, n=2, k=1, p=3, a=9, b=0.2; the x2-integral
  // collapses to int_0^1 x^(a - p(b+j)) dx terms
  double a = 9, b = 0.2, p = 3;
  auto cusp = make_cusp(a);
  AnalyticField u;
  u.M = 1;
  u.value = [b](const Pt& x, int) { return std::pow(x[0], -b); };
  u.deriv = [b](const Pt& x, const MultiIdx& al, int) {
    if (al.order() == 0) return std::pow(x[0], -b);
    if (al.a[0] == 1 && al.order() == 1) return -b * std::pow(x[0], -b - 1);
    return 0.0;
  };
  u.deriv_order = 1;
  u.singular_points = {pt(0, 0)};

  // analytic: int |u|^p = int_0^1 x^{-bp} x^a dx = 1/(a - bp + 1)
  double l_p = std::pow(1.0 / (a - b * p + 1), 1.0 / p);
  // int |du|^p = b^p int x^{-(b+1)p + a} = b^p / (a - (b+1)p + 1)
  double d_p = b * std::pow(1.0 / (a - (b + 1) * p + 1), 1.0 / p);
  double expect = l_p + d_p;

  double v1 = sobolev_norm(u, *cusp, 1, p, 1.0 / 128).value;
  double v2 = sobolev_norm(u, *cusp, 1, p, 1.0 / 256).value;
  CHECK(v1 == doctest::Approx(expect).epsilon(0.05));
  CHECK(std::abs(v2 - expect) <= std::abs(v1 - expect) + 1e-6);
}

TEST_CASE("best fit polynomial") {
  SUBCASE("k=1 on u=x1 over the unit square is the mean 1/2") {
    Box q = box2(0, 0, 1, 1);
    auto quad = gauss_quadrature(q, 4);
    auto f = field_x1();
    auto P = best_fit_polynomial(
        [&](const Pt& x, const MultiIdx& a) { return field_derivative(f, x, a, 0, 1e-3); }, q, 1, quad);
    CHECK(P.coef.size() == 1);
    CHECK(P.coef[0] == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("projection fixes polynomials of degree <= k-1") {
    Box q = box2(0.25, 0.5, 0.75, 1.0);
    auto quad = gauss_quadrature(q, 4);
    // u = 2 + 3(x-0.1) + x y - y^2, degree 2, fit with k = 3
    auto u = [](const Pt& x) { return 2 + 3 * (x[0] - 0.1) + x[0] * x[1] - x[1] * x[1]; };
    auto du = [&](const Pt& x, const MultiIdx& a) {
      if (a.order() == 0) return u(x);
      if (a.a[0] == 1 && a.a[1] == 0) return 3 + x[1];
      if (a.a[0] == 0 && a.a[1] == 1) return x[0] - 2 * x[1];
      if (a.a[0] == 1 && a.a[1] == 1) return 1.0;
      if (a.a[0] == 2 && a.a[1] == 0) return 0.0;
      if (a.a[0] == 0 && a.a[1] == 2) return -2.0;
      return 0.0;
    };
    auto P = best_fit_polynomial(du, q, 3, quad);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(0, 1);
    for (int t = 0; t < 50; ++t) {
      Pt x = pt(U(rng), U(rng));
      CHECK(P.eval(x) == doctest::Approx(u(x)).epsilon(1e-12));
    }
    // idempotence: fitting the fit returns identical coefficients
    auto P2 = best_fit_polynomial([&](const Pt& x, const MultiIdx& a) { return P.deriv(x, a); }, q, 3, quad);
    for (std::size_t i = 0; i < P.coef.size(); ++i)
      CHECK(P2.coef[i] == doctest::Approx(P.coef[i]).epsilon(1e-12));
  }
  SUBCASE("k=2, u=x1^3: moment conditions hold and match the dense solve") {
    Box q = box2(0, 0, 1, 1);
    auto quad = gauss_quadrature(q, 8);
    auto du = [](const Pt& x, const MultiIdx& a) {
      if (a.order() == 0) return x[0] * x[0] * x[0];
      if (a.a[0] == 1 && a.order() == 1) return 3 * x[0] * x[0];
      if (a.a[1] == 1 && a.order() == 1) return 0.0;
      return 0.0;
    };
    auto P = best_fit_polynomial(du, q, 2, quad);
    // residual moments
    auto mis = multi_indices(2, 1);
    for (const auto& beta : mis) {
      double acc = 0, vol = 0;
      for (std::size_t i = 0; i < quad.pts.size(); ++i) {
        acc += quad.w[i] * (du(quad.pts[i], beta) - P.deriv(quad.pts[i], beta));
        vol += quad.w[i];
      }
      CHECK(std::abs(acc / vol) <= 1e-10);
    }
    auto dense = dense_moment_solve(du, q, 2, quad);
    for (std::size_t i = 0; i < P.coef.size(); ++i)
      CHECK(P.coef[i] == doctest::Approx(dense[i]).epsilon(1e-10));
  }
  SUBCASE("linearity of the fit") {
    Box q = box2(0, 0, 0.5, 0.5);
    auto quad = gauss_quadrature(q, 4);
    auto du_f = [](const Pt& x, const MultiIdx& a) {
      if (a.order() == 0) return std::sin(x[0]) * std::cos(x[1]);
      if (a.a[0] == 1 && a.order() == 1) return std::cos(x[0]) * std::cos(x[1]);
      if (a.a[1] == 1 && a.order() == 1) return -std::sin(x[0]) * std::sin(x[1]);
      return 0.0;
    };
    auto du_g = [](const Pt& x, const MultiIdx& a) {
      if (a.order() == 0) return x[0] * x[0];
      if (a.a[0] == 1 && a.order() == 1) return 2 * x[0];
      return 0.0;
    };
    double ca = 2.0, cb = -3.0;
    auto du_sum = [&](const Pt& x, const MultiIdx& a) { return ca * du_f(x, a) + cb * du_g(x, a); };
    auto Pf = best_fit_polynomial(du_f, q, 2, quad);
    auto Pg = best_fit_polynomial(du_g, q, 2, quad);
    auto Ps = best_fit_polynomial(du_sum, q, 2, quad);
    for (std::size_t i = 0; i < Pf.coef.size(); ++i)
      CHECK(Ps.coef[i] == doctest::Approx(ca * Pf.coef[i] + cb * Pg.coef[i]).epsilon(1e-12));
  }
  SUBCASE("lattice quadrature underflow") {
    GridField g = make_grid(box2(0, 0, 1, 1), 1.0 / 4, 1);
    CHECK_THROWS_AS(lattice_quadrature(box2(0, 0, 0.25, 0.25), g), QuadratureUnderflow);
  }
}

TEST_CASE("besov norms on clouds") {
  SUBCASE("constant jet: remainders vanish, norm = c * total_weight^(1/p)") {
    auto cloud = segment_cloud(128);
    auto jet = make_jet(cloud, 1);
    for (std::size_t i = 0; i < jet.points(); ++i) jet.at(i, 0) = 3.5;
    auto r = besov_norm(jet, 0.5, 2.0, 8);
    for (double sh : r.shell) CHECK(sh == 0.0);
    CHECK(r.value == doctest::Approx(3.5 * std::sqrt(cloud.total_weight())).epsilon(1e-12));
  }
  SUBCASE("linear jet with k=2: remainder sum 0, norm = sum of component masses") {
    auto cloud = segment_cloud(128);
    auto jet = make_jet(cloud, 2);
    // f = 2x + 1 on the segment: f_0 = 2x+1, f_(1,0) = 2, f_(0,1) = 0
    for (std::size_t i = 0; i < jet.points(); ++i) {
      jet.at(i, 0) = 2 * cloud.points[i][0] + 1;
      jet.at(i, 1) = 2.0;
      jet.at(i, 2) = 0.0;
    }
    auto r = besov_norm(jet, 1.5, 2.0, 8);
    for (double sh : r.shell) CHECK(sh <= 1e-22);
    CHECK(r.value == doctest::Approx(r.lp_part).epsilon(1e-12));
    // lp part: ||2x+1||_2 + ||2||_2 over weights
    double m0 = 0, m1 = 0;
    for (std::size_t i = 0; i < jet.points(); ++i) {
      m0 += cloud.weights[i] * std::pow(2 * cloud.points[i][0] + 1, 2);
      m1 += cloud.weights[i] * 4.0;
    }
    CHECK(r.lp_part == doctest::Approx(std::sqrt(m0) + std::sqrt(m1)).epsilon(1e-12));
  }
  SUBCASE("jump jet: shell sums bounded below, total grows with J_max") {
    auto cloud = segment_cloud(256);
    auto jet = make_jet(cloud, 1);
    for (std::size_t i = 0; i < jet.points(); ++i) jet.at(i, 0) = cloud.points[i][0] < 0.5 ? 0.0 : 1.0;
    // independent oracle: direct triple loop at one shell
    auto direct_shell = [&](int j) {
      double twoj = std::ldexp(1.0, -j);
      double acc = 0;
      for (std::size_t a = 0; a < cloud.points.size(); ++a)
        for (std::size_t b = 0; b < cloud.points.size(); ++b) {
          if (a == b) continue;
          double d = dist(cloud.points[a], cloud.points[b]);
          if (d < twoj) {
            double R = jet.at(a, 0) - jet.at(b, 0);
            acc += cloud.weights[a] * cloud.weights[b] * R * R;
          }
        }
      return std::pow(2.0, j * 0.5 * 2.0) * std::pow(2.0, j * 1.0) * acc;
    };
    auto r4 = besov_norm(jet, 0.5, 2.0, 4);
    auto r6 = besov_norm(jet, 0.5, 2.0, 6);
    CHECK(r6.value > r4.value * 1.05);
    for (int j = 0; j <= 4; ++j) {
      CHECK(r4.shell[j] == doctest::Approx(direct_shell(j)).epsilon(1e-10));
      CHECK(r4.shell[j] > 0.05);
    }
  }
  SUBCASE("homogeneity and zero jet") {
    auto k5 = koch_prefractal(3);
    auto jet0 = make_jet(k5.cloud, 1);
    CHECK(besov_norm(jet0, 0.7, 2.0, 6).value == 0.0);
    auto g = scalar_field([](const Pt& x) { return std::sin(3 * x[0]) + x[1]; });
    auto jet = jet_of_field(k5.cloud, 1, g);
    auto jet3 = jet;
    for (auto& v : jet3.data) v *= -3.0;
    CHECK(besov_norm(jet3, 0.7, 2.0, 6).value ==
          doctest::Approx(3.0 * besov_norm(jet, 0.7, 2.0, 6).value).epsilon(1e-12));
  }
  SUBCASE("order mismatch") {
    auto cloud = segment_cloud(32);
    auto jet = make_jet(cloud, 1);
    CHECK_THROWS_AS(besov_norm(jet, 1.5, 2.0, 4), OrderMismatch);
  }
}

TEST_CASE("norm scan verdicts") {
  SUBCASE("constant field converges with slope 0") {
    auto sq = make_unit_square();
    auto r = sobolev_norm_scan(constant_field(1.0), *sq, 1, 2.0, {1.0 / 16, 1.0 / 32, 1.0 / 64});
    CHECK(r.verdict == ScanVerdict::Converges);
    CHECK(std::abs(r.slope) < 1e-6);
  }
  SUBCASE("De Giorgi field in 3-D: p=2 converges, p=3 diverges (n/gamma = 2.5)") {
    auto ball = make_rect(box3(-1, -1, -1, 1, 1, 1));  // scan window (integrand decides)
    auto u = degiorgi_field(1.2);
    auto conv = sobolev_norm_scan(u, *ball, 1, 2.0, {1.0 / 16, 1.0 / 32, 1.0 / 64});
    CHECK(conv.verdict == ScanVerdict::Converges);
    auto div = sobolev_norm_scan(u, *ball, 1, 3.0, {1.0 / 16, 1.0 / 32, 1.0 / 64});
    CHECK(div.verdict == ScanVerdict::Diverges);
  }
}
