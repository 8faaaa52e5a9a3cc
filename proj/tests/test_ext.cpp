#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sobex/ext/glue.hpp"
#include "sobex/ext/jones.hpp"
#include "sobex/ext/jw.hpp"
#include "sobex/ext/localized.hpp"
#include "sobex/geom/koch.hpp"
#include "sobex/tr/restrict.hpp"

using namespace sobex;
using namespace sobex::ext;
using namespace sobex::fn;
using namespace sobex::geom;

namespace {

AnalyticField poly_field(double c0, double cx, double cy) {
  AnalyticField u;
  u.M = 1;
  u.value = [=](const Pt& x, int) { return c0 + cx * x[0] + cy * x[1]; };
  u.deriv = [=](const Pt& x, const MultiIdx& a, int) {
    if (a.order() == 0) return c0 + cx * x[0] + cy * x[1];
    if (a.a[0] == 1 && a.order() == 1) return cx;
    if (a.a[1] == 1 && a.order() == 1) return cy;
    return 0.0;
  };
  u.deriv_order = 8;
  return u;
}

AnalyticField quadratic_field() {
  AnalyticField u;
  u.M = 1;
  u.value = [](const Pt& x, int) { return 1 + 0.5 * x[0] - x[1] + 2 * x[0] * x[1] - x[0] * x[0]; };
  u.deriv = [](const Pt& x, const MultiIdx& a, int) {
    if (a.order() == 0) return 1 + 0.5 * x[0] - x[1] + 2 * x[0] * x[1] - x[0] * x[0];
    if (a.a[0] == 1 && a.a[1] == 0) return 0.5 + 2 * x[1] - 2 * x[0];
    if (a.a[0] == 0 && a.a[1] == 1) return -1.0 + 2 * x[0];
    if (a.a[0] == 1 && a.a[1] == 1) return 2.0;
    if (a.a[0] == 2 && a.a[1] == 0) return -2.0;
    return 0.0;
  };
  u.deriv_order = 8;
  return u;
}

AnalyticField sin_field() {
  AnalyticField u;
  u.M = 1;
  u.value = [](const Pt& x, int) { return std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]); };
  u.deriv = [](const Pt& x, const MultiIdx& a, int) {
    double sx = std::sin(M_PI * x[0]), cx = std::cos(M_PI * x[0]);
    double sy = std::sin(M_PI * x[1]), cy = std::cos(M_PI * x[1]);
    if (a.order() == 0) return sx * sy;
    if (a.a[0] == 1 && a.order() == 1) return M_PI * cx * sy;
    if (a.a[1] == 1 && a.order() == 1) return M_PI * sx * cy;
    if (a.a[0] == 1 && a.a[1] == 1) return M_PI * M_PI * cx * cy;
    if (a.a[0] == 2) return -M_PI * M_PI * sx * sy;
    if (a.a[1] == 2) return -M_PI * M_PI * sx * sy;
    return 0.0;
  };
  u.deriv_order = 2;
  return u;
}

// compactly supported bump with an exact zero branch
AnalyticField bump_field(Pt center, double radius) {
  AnalyticField u;
  u.M = 1;
  u.value = [=](const Pt& x, int) {
    double r2 = norm2(x - center) / (radius * radius);
    if (r2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r2));
  };
  return u;
}

}  // namespace

TEST_CASE("jones extension reproduces polynomials on the small-cube union") {
  auto lshape = make_lshape();
  RootFrame f = square_frame(pt(-0.5, -0.5), 2.0, 2);
  for (int k : {1, 2, 3}) {
    PlanOptions po;
    po.j_max_inside = 7;
    po.j_max_outside = 7;
    auto plan = make_jones_plan(lshape, f, k, po);
    // degree k-1 polynomial
    AnalyticField u;
    if (k == 1)
      u = poly_field(0.7, 0, 0);
    else if (k == 2)
      u = poly_field(0.3, -1.2, 0.8);
    else
      u = quadratic_field();
    JonesOptions jo;
    jo.h = 1.0 / 128;
    jo.compute_norms = false;
    auto ext = jones_extend(plan, u, jo);
    double worst = 0;
    for (int j = 0; j < ext.grid.dims[1]; ++j)
      for (int i = 0; i < ext.grid.dims[0]; ++i) {
        std::size_t idx = ext.grid.cell_index(i, j);
        if (!ext.exterior[idx]) continue;
        Pt c = ext.grid.center(i, j);
        worst = std::max(worst, std::abs(ext.grid.value(idx) - u.value(c, 0)));
      }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("jones extension: restriction identity and linearity") {
  auto sq = make_unit_square();
  RootFrame f = square_frame(pt(-0.5, -0.5), 2.0, 2);
  PlanOptions po;
  auto plan = make_jones_plan(sq, f, 1, po);
  auto ua = sin_field();
  auto ub = poly_field(0.2, 1.0, -0.5);
  AnalyticField usum;
  usum.M = 1;
  usum.value = [&](const Pt& x, int) { return 2 * ua.value(x, 0) - 3 * ub.value(x, 0); };
  usum.deriv = [&](const Pt& x, const MultiIdx& a, int) {
    return 2 * ua.deriv(x, a, 0) - 3 * ub.deriv(x, a, 0);
  };
  usum.deriv_order = 2;
  JonesOptions jo;
  jo.h = 1.0 / 64;
  jo.compute_norms = false;
  auto ea = jones_extend(plan, ua, jo);
  auto eb = jones_extend(plan, ub, jo);
  auto es = jones_extend(plan, usum, jo);
  for (int j = 0; j < es.grid.dims[1]; ++j)
    for (int i = 0; i < es.grid.dims[0]; ++i) {
      std::size_t idx = es.grid.cell_index(i, j);
      Pt c = es.grid.center(i, j);
      if (sq->contains(c)) {
        // restriction identity: exact input values
        CHECK(es.grid.value(idx) == usum.value(c, 0));
      } else if (es.region[idx]) {
        CHECK(std::abs(es.grid.value(idx) - (2 * ea.grid.value(idx) - 3 * eb.grid.value(idx))) <= 1e-12);
      }
    }
  // zero extends to zero
  auto e0 = jones_extend(plan, constant_field(0.0), jo);
  for (std::size_t c = 0; c < e0.grid.cells(); ++c) CHECK(e0.grid.value(c) == 0.0);
}

TEST_CASE("jones norm ratio stable under refinement on the L-shape") {
  auto lshape = make_lshape();
  RootFrame f = square_frame(pt(-0.5, -0.5), 2.0, 2);
  auto u = sin_field();
  std::vector<double> ratios;
  for (int lvl = 0; lvl < 3; ++lvl) {
    PlanOptions po;
    po.j_max_inside = 6 + lvl;
    po.j_max_outside = 6 + lvl;
    auto plan = make_jones_plan(lshape, f, 1, po);
    JonesOptions jo;
    jo.h = 1.0 / (64 << lvl);
    jo.p = 2.0;
    auto ext = jones_extend(plan, u, jo);
    ratios.push_back(ext.norm_ratio);
    CHECK(ext.norm_ratio > 0.9);  // extension adds mass
    CHECK(std::isfinite(ext.norm_ratio));
  }
  CHECK(std::abs(ratios[1] - ratios[0]) / ratios[0] < 0.10);
  CHECK(std::abs(ratios[2] - ratios[1]) / ratios[1] < 0.10);
}

TEST_CASE("support preservation diagnostics") {
  auto sq = make_unit_square();
  RootFrame f = square_frame(pt(-0.5, -0.5), 2.0, 2);
  PlanOptions po;
  po.j_max_inside = 7;
  po.j_max_outside = 7;
  auto plan = make_jones_plan(sq, f, 1, po);
  SUBCASE("interior bump with boundary gap 0.3: exact zeros outside the contact set") {
    auto u = bump_field(pt(0.5, 0.5), 0.2);  // dist(supp, boundary) = 0.3
    JonesOptions jo;
    jo.h = 1.0 / 128;
    jo.compute_norms = false;
    auto ext = jones_extend(plan, u, jo);
    auto rep = support_diagnostics(plan, u, ext);
    CHECK(rep.contact_set_ok);
    CHECK(rep.violations == 0);
    // every exterior sample is 0: the support never meets the boundary
    for (std::size_t c = 0; c < ext.grid.cells(); ++c)
      if (ext.exterior[c]) CHECK(ext.grid.value(c) == 0.0);
  }
  SUBCASE("u == 1: enlargement radius finite and h-stable") {
    auto u = constant_field(1.0);
    double r_prev = -1;
    for (double h : {1.0 / 64, 1.0 / 128}) {
      JonesOptions jo;
      jo.h = h;
      jo.compute_norms = false;
      auto ext = jones_extend(plan, u, jo);
      auto rep = support_diagnostics(plan, u, ext);
      CHECK(rep.contact_set_ok);
      CHECK(rep.enlargement_radius > 0);
      CHECK(rep.enlargement_radius < 0.5);
      if (r_prev > 0) CHECK(std::abs(rep.enlargement_radius - r_prev) <= 1.0 / 64 + 1e-12);
      r_prev = rep.enlargement_radius;
    }
  }
  SUBCASE("zero field has zero enlargement") {
    JonesOptions jo;
    jo.h = 1.0 / 64;
    jo.compute_norms = false;
    auto ext = jones_extend(plan, constant_field(0.0), jo);
    auto rep = support_diagnostics(plan, constant_field(0.0), ext);
    CHECK(rep.enlargement_radius == 0.0);
  }
}

TEST_CASE("extend by zero preserves the norm and checks the collar") {
  auto sq = make_unit_square();
  Box root = box2(-0.5, -0.5, 1.5, 1.5);
  SUBCASE("interior bump: norms agree") {
    auto u = bump_field(pt(0.5, 0.5), 0.25);
    auto z = extend_by_zero(u, sq, root, 1.0 / 128, 0.2);
    CHECK(std::abs(z.norm_out - z.norm_in) / z.norm_in <= 2e-2);
  }
  SUBCASE("zero field") {
    auto z = extend_by_zero(constant_field(0.0), sq, root, 1.0 / 64, 0.2);
    CHECK(z.norm_out == 0.0);
  }
  SUBCASE("non-vanishing trace raises CollarViolation") {
    CHECK_THROWS_AS(extend_by_zero(constant_field(1.0), sq, root, 1.0 / 64, 0.1), CollarViolation);
  }
}

TEST_CASE("jw extension") {
  SUBCASE("constant jet extends to the constant") {
    auto koch = koch_prefractal(4);
    RootFrame f = square_frame(pt(-0.5, -0.5), 2.0, 2);
    auto comp = make_curve_complement(koch.domain, f.root_box());
    auto jet = make_jet(koch.cloud, 1);
    for (std::size_t i = 0; i < jet.points(); ++i) jet.at(i, 0) = 2.25;
    auto op = jw_operator(jet, comp, f, 7);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-0.2, 1.2);
    for (int t = 0; t < 200; ++t) {
      Pt x = pt(U(rng), U(rng));
      if (!op.partition.in_union(x)) continue;
      CHECK(op.eval(x) == doctest::Approx(2.25).epsilon(1e-12));
    }
  }
  SUBCASE("linear jet on a straight segment reproduces the linear function (k=2)") {
    auto cloud = segment_cloud(512);
    RootFrame f = square_frame(pt(-0.5, -0.5), 2.0, 2);
    // complement of the segment: distance oracle around the segment
    auto seg_poly = make_polygon({pt(0, 0), pt(1, 0)}, "segment");
    auto comp = make_curve_complement(seg_poly, f.root_box());
    auto g = poly_field(0.4, 1.5, -2.0);
    auto jet = jet_of_field(cloud, 2, g);
    auto op = jw_operator(jet, comp, f, 8);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.1, 0.9);
    for (int t = 0; t < 100; ++t) {
      Pt x = pt(U(rng), 0.3 * (U(rng) - 0.5));
      if (!op.partition.in_union(x)) continue;
      CHECK(op.eval(x) == doctest::Approx(g.value(x, 0)).epsilon(1e-10));
    }
  }
  SUBCASE("EmptyBall when the cover outruns the cloud") {
    auto koch = koch_prefractal(1);  // 12 edges only
    RootFrame f = square_frame(pt(-0.5, -0.5), 2.0, 2);
    auto comp = make_curve_complement(koch.domain, f.root_box());
    auto jet = make_jet(koch.cloud, 1);
    CHECK_THROWS_AS(jw_operator(jet, comp, f, 9), EmptyBall);
  }
}

TEST_CASE("jw then trace recovers the jet (R o E identity, discrete)") {
  auto koch = koch_prefractal(5);
  RootFrame f = square_frame(pt(-0.5, -0.5), 2.0, 2);
  auto comp = make_curve_complement(koch.domain, f.root_box());
  auto g = scalar_field([](const Pt& x) { return 0.5 + 0.4 * x[0] - 0.3 * x[1] + 0.2 * std::sin(2 * x[0]); });
  g.deriv = [](const Pt& x, const MultiIdx& a, int) {
    if (a.order() == 0) return 0.5 + 0.4 * x[0] - 0.3 * x[1] + 0.2 * std::sin(2 * x[0]);
    if (a.a[0] == 1 && a.order() == 1) return 0.4 + 0.4 * std::cos(2 * x[0]);
    if (a.a[1] == 1 && a.order() == 1) return -0.3;
    return 0.0;
  };
  g.deriv_order = 1;
  auto jet = jet_of_field(koch.cloud, 1, g);

  double prev_err = -1;
  for (int lvl = 0; lvl < 2; ++lvl) {
    double h = 1.0 / (64 << lvl);
    auto grid = jw_extend(jet, comp, f, 6 + lvl, h);
    sobex::tr::TraceOptions to;
    to.radii = {16 * h, 8 * h};
    auto rep = sobex::tr::restrict_jet(grid, koch.cloud, 1, to);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < jet.points(); ++i) {
      double d = rep.jet.at(i, 0) - jet.at(i, 0);
      num += koch.cloud.weights[i] * d * d;
      den += koch.cloud.weights[i] * jet.at(i, 0) * jet.at(i, 0);
    }
    double rel = std::sqrt(num / den);
    if (prev_err > 0) CHECK(rel < prev_err);
    prev_err = rel;
    if (lvl == 1) CHECK(rel <= 0.05);
  }
}

TEST_CASE("localized extension") {
  auto sq = make_unit_square();
  RootFrame f = square_frame(pt(-0.5, -0.5), 2.0, 2);
  // u vanishes near the bottom edge D
  AnalyticField u;
  u.M = 1;
  u.value = [](const Pt& x, int) {
    double ramp = x[1] <= 0.25 ? 0.0 : (x[1] >= 0.45 ? 1.0 : [](double s) {
      auto g = [](double v) { return v <= 0 ? 0.0 : std::exp(-1.0 / v); };
      return g(s) / (g(s) + g(1 - s));
    }((x[1] - 0.25) / 0.2));
    return ramp * (0.5 + x[0] * 0.3 + 0.2 * std::cos(2 * x[1]));
  };

  SUBCASE("square with D = bottom edge: restriction exact, trace on D small") {
    double r = 0.35;
    PlanOptions po;
    po.j_max_inside = 7;
    po.j_max_outside = 7;
    Patch p1{box2(-0.5, -0.5, 0.9, 1.5), sq, make_jones_plan(sq, f, 1, po)};
    Patch p2{box2(0.1, -0.5, 1.5, 1.5), sq, make_jones_plan(sq, f, 1, po)};
    // N samples: three non-Dirichlet sides
    std::vector<Pt> nsamp;
    for (int i = 0; i <= 32; ++i) {
      double t = i / 32.0;
      nsamp.push_back(pt(0.0, t));
      nsamp.push_back(pt(1.0, t));
      nsamp.push_back(pt(t, 1.0));
    }
    auto plan = make_localized_plan(sq, {p1, p2}, nsamp, r, 1.0 / 128, 1, f);
    auto ext = localized_extend(plan, u);
    // restriction identity
    for (int j = 0; j < ext.grid.dims[1]; ++j)
      for (int i = 0; i < ext.grid.dims[0]; ++i) {
        Pt c = ext.grid.center(i, j);
        if (sq->contains(c)) CHECK(ext.grid.value(ext.grid.cell_index(i, j)) == u.value(c, 0));
      }
    // trace on D via full-ball averages of the output
    AhlforsCloud dcloud;
    dcloud.n = 2;
    dcloud.d = 1;
    for (int i = 0; i < 24; ++i) {
      dcloud.points.push_back(pt((i + 0.5) / 24.0, 0.0));
      dcloud.weights.push_back(1.0 / 24);
    }
    sobex::tr::TraceOptions to;
    to.radii = {16.0 / 128, 8.0 / 128};
    auto rep = sobex::tr::restrict_jet(ext.grid, dcloud, 1, to);
    for (std::size_t i = 0; i < dcloud.points.size(); ++i)
      CHECK(std::abs(rep.jet.at(i, 0)) <= 1e-3);
  }

  SUBCASE("D = boundary degenerates to extension by zero") {
    auto bump = bump_field(pt(0.5, 0.5), 0.3);
    auto plan = make_localized_plan(sq, {}, {}, 0.25, 1.0 / 64, 1, f);
    auto ext = localized_extend(plan, bump);
    for (int j = 0; j < ext.grid.dims[1]; ++j)
      for (int i = 0; i < ext.grid.dims[0]; ++i) {
        Pt c = ext.grid.center(i, j);
        std::size_t idx = ext.grid.cell_index(i, j);
        if (sq->contains(c))
          CHECK(ext.grid.value(idx) == bump.value(c, 0));
        else
          CHECK(ext.grid.value(idx) == 0.0);
      }
  }

  SUBCASE("D empty with one big patch matches the Jones extension") {
    PlanOptions po;
    po.j_max_inside = 7;
    po.j_max_outside = 7;
    auto jones_plan = make_jones_plan(sq, f, 1, po);
    Patch p1{box2(-0.5, -0.5, 1.5, 1.5), sq, jones_plan};
    std::vector<Pt> nsamp;
    for (int i = 0; i <= 32; ++i) {
      double t = i / 32.0;
      nsamp.push_back(pt(t, 0.0));
      nsamp.push_back(pt(t, 1.0));
      nsamp.push_back(pt(0.0, t));
      nsamp.push_back(pt(1.0, t));
    }
    // r large enough that eta == 1 on the whole collar
    double r = 0.9;
    auto plan = make_localized_plan(sq, {p1}, nsamp, r, 1.0 / 64, 1, f);
    auto smooth = sin_field();
    auto lext = localized_extend(plan, smooth);
    JonesOptions jo;
    jo.h = 1.0 / 64;
    jo.compute_norms = false;
    auto jext = jones_extend(jones_plan, smooth, jo);
    int compared = 0;
    for (std::size_t c = 0; c < lext.grid.cells(); ++c) {
      if (!lext.region[c] || !jext.region[c]) continue;
      Pt x = lext.grid.center(int(c % lext.grid.dims[0]), int(c / lext.grid.dims[0]));
      double e = plan.eta.value(c);
      if (!sq->contains(x) && e < 1.0 - 1e-9) continue;  // compare where eta == 1
      // psi_1 == 1 there as well, so phi_1 = eta/psi = 1
      CHECK(lext.grid.value(c) == doctest::Approx(jext.grid.value(c)).epsilon(1e-9));
      ++compared;
    }
    CHECK(compared > 1000);
  }

  SUBCASE("patch gap detection") {
    PlanOptions po;
    Patch p1{box2(-0.5, -0.5, 0.4, 1.5), sq, make_jones_plan(sq, f, 1, po)};
    std::vector<Pt> nsamp = {pt(1.0, 0.5)};  // right edge not covered
    CHECK_THROWS_AS(make_localized_plan(sq, {p1}, nsamp, 0.3, 1.0 / 64, 1, f), PatchGap);
  }
}

TEST_CASE("glue verdicts across the interface") {
  auto sq = make_rect(box2(0, 0, 1, 1));
  Box root = box2(-0.5, -0.5, 1.5, 1.5);
  std::vector<double> hs = {1.0 / 32, 1.0 / 64, 1.0 / 128};

  SUBCASE("one global smooth function glues stably") {
    auto g = sin_field();
    auto res = glue(g, g, sq, root, 1, 2.0, hs);
    CHECK(res.verdict == "matched");
    for (std::size_t i = 0; i + 1 < res.norms.size(); ++i)
      CHECK(std::abs(res.norms[i + 1] - res.norms[i]) / res.norms[i] < 0.05);
  }
  SUBCASE("0/1 jump: k=1 seminorm grows by sqrt(2) per halving") {
    auto res = glue(constant_field(0.0), constant_field(1.0), sq, root, 1, 2.0, hs);
    CHECK(res.verdict == "mismatched");
    for (std::size_t i = 0; i + 1 < res.seminorms.size(); ++i) {
      double ratio = res.seminorms[i + 1] / res.seminorms[i];
      CHECK(ratio >= std::sqrt(2.0) - 1e-9);
    }
  }
  SUBCASE("matched values, mismatched normal derivative: k=1 stable, k=2 grows") {
    // straight interface y = 0.5 (the lower half-box), u_in = (y - 0.5),
    // u_out = 2 (y - 0.5): equal values, slope jump 1, zero Hessians, so
    // the k=2 growth law is pure interface difference quotients
    auto lower = make_rect(box2(-0.5, -0.5, 1.5, 0.5));
    AnalyticField u_in, u_out;
    u_in.M = u_out.M = 1;
    u_in.value = [](const Pt& x, int) { return x[1] - 0.5; };
    u_out.value = [](const Pt& x, int) { return 2 * (x[1] - 0.5); };
    auto res1 = glue(u_in, u_out, lower, root, 1, 2.0, hs);
    CHECK(res1.verdict == "matched");
    auto res2 = glue(u_in, u_out, lower, root, 2, 2.0, hs);
    CHECK(res2.verdict == "mismatched");
    for (std::size_t i = 0; i + 1 < res2.seminorms.size(); ++i)
      CHECK(res2.seminorms[i + 1] / res2.seminorms[i] >= std::sqrt(2.0) - 1e-9);
  }
}

TEST_CASE("mollify") {
  Box root = box2(0, 0, 1, 1);
  SUBCASE("constant stays constant") {
    GridField g = make_grid(root, 1.0 / 64, 1);
    for (auto& v : g.data) v = 1.0;
    auto m = mollify(g, 0.1);
    for (auto v : m.data) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("half-plane indicator develops a transition band of width 2t") {
    GridField g = make_grid(root, 1.0 / 128, 1);
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i)
        g.at(g.cell_index(i, j)) = g.center(i, j)[0] > 0.5 ? 1.0 : 0.0;
    double t = 0.1;
    auto m = mollify(g, t);
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        double x = g.center(i, j)[0];
        double v = m.value(g.cell_index(i, j));
        if (x < 0.5 - t - 2.0 / 128) CHECK(v == 0.0);
        if (x > 0.5 + t + 2.0 / 128) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(v >= -1e-15);
        CHECK(v <= 1 + 1e-12);
      }
  }
  SUBCASE("kernel underresolved") {
    GridField g = make_grid(root, 1.0 / 16, 1);
    CHECK_THROWS_AS(mollify(g, 0.1), KernelUnderresolved);
  }
}
