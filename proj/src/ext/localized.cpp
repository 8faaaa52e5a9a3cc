#include "sobex/ext/localized.hpp"

#include <cmath>

#include "sobex/fn/sobolev.hpp"
#include "sobex/parallel.hpp"

namespace sobex::ext {

namespace {
// 1-D profile of the tensor mollifier: C^inf bump on (-1,1), normalized in
// the discrete sum below.
double theta1(double t) {
  double a = std::abs(t);
  if (a >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - a * a));
}
}  // namespace

fn::GridField mollify(const fn::GridField& g, double t) {
  if (t < 2 * g.h) throw KernelUnderresolved("mollifier radius below 2h");
  int n = g.n();
  // tensor kernel supported in the sup-ball of radius t/sqrt(n), hence in
  // the Euclidean ball of radius t
  double axis_radius = t / std::sqrt(static_cast<double>(n));
  int w = static_cast<int>(std::floor(axis_radius / g.h));
  std::vector<double> ker(2 * w + 1);
  double mass = 0;
  for (int i = -w; i <= w; ++i) {
    ker[i + w] = theta1(i * g.h / axis_radius);
    mass += ker[i + w];
  }
  for (auto& v : ker) v /= mass;

  fn::GridField out = g;
  fn::GridField tmp = g;
  // separable passes
  auto pass = [&](const fn::GridField& src, fn::GridField& dst, int axis) {
    dst.data.assign(src.data.size(), 0.0);
    for (int k = 0; k < src.dims[2]; ++k)
      for (int j = 0; j < src.dims[1]; ++j)
        for (int i = 0; i < src.dims[0]; ++i) {
          double acc = 0;
          for (int o = -w; o <= w; ++o) {
            int ii = i + (axis == 0 ? o : 0);
            int jj = j + (axis == 1 ? o : 0);
            int kk = k + (axis == 2 ? o : 0);
            ii = std::clamp(ii, 0, src.dims[0] - 1);
            jj = std::clamp(jj, 0, src.dims[1] - 1);
            kk = std::clamp(kk, 0, src.dims[2] - 1);
            acc += ker[o + w] * src.value(src.cell_index(ii, jj, kk));
          }
          dst.at(src.cell_index(i, j, k)) = acc;
        }
  };
  pass(g, tmp, 0);
  pass(tmp, out, 1);
  if (n >= 3) {
    fn::GridField tmp2 = out;
    pass(tmp2, out, 2);
  }
  return out;
}

ZeroExtension extend_by_zero(const fn::AnalyticField& u, const geom::OraclePtr& omega, const Box& root,
                             double h, double collar, int k, double p) {
  // collar check: u must vanish at sampled points within `collar` of the
  // boundary (inside Omega)
  fn::GridField probe = fn::make_grid(root, h, 1);
  for (int j = 0; j < probe.dims[1]; ++j)
    for (int i = 0; i < probe.dims[0]; ++i) {
      Pt c = probe.center(i, j);
      if (!omega->contains(c)) continue;
      if (omega->boundary_distance(c) < collar && u.value(c, 0) != 0.0)
        throw CollarViolation("input does not vanish on the declared boundary collar");
    }
  ZeroExtension out;
  out.grid = fn::make_grid(root, h, 1);
  for (int j = 0; j < out.grid.dims[1]; ++j)
    for (int i = 0; i < out.grid.dims[0]; ++i) {
      Pt c = out.grid.center(i, j);
      std::size_t idx = out.grid.cell_index(i, j);
      out.grid.at(idx) = omega->contains(c) ? u.value(c, 0) : 0.0;
    }
  out.norm_in = fn::sobolev_norm(u, *omega, k, p, h).value;
  out.norm_out = fn::sobolev_norm_grid(out.grid, nullptr, k, p).value;
  return out;
}

LocalizedPlan make_localized_plan(const geom::OraclePtr& omega, std::vector<Patch> patches,
                                  std::vector<Pt> n_samples, double r, double h, int k,
                                  const geom::RootFrame& frame) {
  LocalizedPlan plan;
  plan.omega = omega;
  plan.patches = std::move(patches);
  plan.n_samples = std::move(n_samples);
  plan.r = r;
  plan.h = h;
  plan.k = k;

  // patch coverage of N: every sample needs B(x, r) inside some window
  for (const Pt& x : plan.n_samples) {
    bool ok = false;
    for (const auto& p : plan.patches) {
      bool inside = true;
      for (int i = 0; i < p.window.n; ++i)
        if (x[i] - r < p.window.lo[i] || x[i] + r > p.window.hi[i]) inside = false;
      if (inside) {
        ok = true;
        break;
      }
    }
    if (!ok && !plan.patches.empty()) throw PatchGap("a boundary sample of N has no patch ball B(x,r)");
  }

  Box root = frame.root_box();
  // eta = theta_{r/8} * 1_{dist(.,N) < r/4}
  fn::GridField indicator = fn::make_grid(root, h, 1);
  if (!plan.n_samples.empty()) {
    for (int j = 0; j < indicator.dims[1]; ++j)
      for (int i = 0; i < indicator.dims[0]; ++i) {
        Pt c = indicator.center(i, j);
        double d = std::numeric_limits<double>::infinity();
        for (const Pt& x : plan.n_samples) d = std::min(d, dist(c, x));
        indicator.at(indicator.cell_index(i, j)) = d < r / 4 ? 1.0 : 0.0;
      }
    plan.eta = mollify(indicator, r / 8);
  } else {
    plan.eta = indicator;  // D = boundary: eta == 0, operator collapses to zero-extension
  }

  // psi_j = theta_{r/4} * 1_{[O_j]_{r/4}}
  for (const auto& p : plan.patches) {
    fn::GridField ind = fn::make_grid(root, h, 1);
    for (int j = 0; j < ind.dims[1]; ++j)
      for (int i = 0; i < ind.dims[0]; ++i) {
        Pt c = ind.center(i, j);
        bool in_contracted = true;
        for (int ax = 0; ax < p.window.n; ++ax)
          if (c[ax] - r / 4 < p.window.lo[ax] || c[ax] + r / 4 > p.window.hi[ax]) in_contracted = false;
        ind.at(ind.cell_index(i, j)) = in_contracted ? 1.0 : 0.0;
      }
    plan.psi.push_back(mollify(ind, r / 4));
  }
  return plan;
}

LocalizedField localized_extend(const LocalizedPlan& plan, const fn::AnalyticField& u, double p) {
  LocalizedField out;
  Box root = plan.eta.box;
  out.grid = fn::make_grid(root, plan.h, 1);
  out.region.assign(out.grid.cells(), 0);

  // Jones evaluators per patch for psi_j u (E_j masks the patch field to
  // the window before extending off Omega_j)
  std::vector<JonesEvaluator> lambdas;
  std::vector<const Patch*> pp;
  for (std::size_t pj = 0; pj < plan.patches.size(); ++pj) {
    const Patch& patch = plan.patches[pj];
    const fn::GridField& psi_j = plan.psi[pj];
    DerivFn masked = [&u, &psi_j, &patch, &plan](const Pt& x, const MultiIdx& a) {
      // E_j(psi_j u): zero outside the window, psi_j u inside
      bool in_window = true;
      for (int ax = 0; ax < patch.window.n; ++ax)
        if (x[ax] <= patch.window.lo[ax] || x[ax] >= patch.window.hi[ax]) in_window = false;
      if (!in_window) return 0.0;
      // derivative of psi_j u by finite differences of the product (psi_j
      // lives on a grid; product-rule accuracy is not needed beyond the
      // telescoping identity, which only uses alpha = 0 exactly)
      auto prod = [&](const Pt& y) {
        int i, j, k;
        psi_j.locate(y, i, j, k);
        return psi_j.value(psi_j.cell_index(i, j, k)) * u.value(y, 0);
      };
      if (a.order() == 0) return prod(x);
      // nested central differences at h
      std::function<double(Pt, MultiIdx)> rec = [&](Pt y, MultiIdx al) -> double {
        int axis = -1;
        for (int i = 0; i < 3; ++i)
          if (al.a[i] > 0) axis = i;
        if (axis < 0) return prod(y);
        MultiIdx lower = al;
        lower.a[axis] -= 1;
        Pt yp = y, ym = y;
        yp[axis] += plan.h;
        ym[axis] -= plan.h;
        return (rec(yp, lower) - rec(ym, lower)) / (2 * plan.h);
      };
      return rec(x, a);
    };
    lambdas.emplace_back(patch.plan, masked);
    pp.push_back(&patch);
  }

  const auto& eta = plan.eta;
  for (int j = 0; j < out.grid.dims[1]; ++j)
    for (int i = 0; i < out.grid.dims[0]; ++i) {
      Pt c = out.grid.center(i, j);
      std::size_t idx = out.grid.cell_index(i, j);
      bool in_omega = plan.omega->contains(c);
      if (in_omega) {
        // telescoping: (1-eta) u + sum phi_j psi_j u = u exactly on Omega
        out.grid.at(idx) = u.value(c, 0);
        out.region[idx] = 1;
        continue;
      }
      // off Omega: sum_j phi_j Lambda_j with phi_j = eta psi_j / sum psi^2
      double e = eta.value(idx);
      if (e == 0.0) {
        out.grid.at(idx) = 0.0;
        out.region[idx] = 1;
        continue;
      }
      double denom = 0;
      for (const auto& psi_j : plan.psi) denom += psi_j.value(idx) * psi_j.value(idx);
      if (denom <= 0) {
        out.grid.at(idx) = 0.0;
        continue;  // eta > 0 but no patch mass: outside the defined region
      }
      double acc = 0;
      bool defined = true;
      for (std::size_t pj = 0; pj < lambdas.size(); ++pj) {
        double psi_v = plan.psi[pj].value(idx);
        if (psi_v == 0.0) continue;
        double phi = e * psi_v / denom;
        acc += phi * lambdas[pj](c);
        if (!lambdas[pj].covered(c)) defined = false;  // past the patch collar
      }
      out.grid.at(idx) = acc;
      if (defined) out.region[idx] = 1;
    }

  out.grid.mask = out.region;
  double num = fn::sobolev_norm_grid(out.grid, nullptr, plan.k, p, &out.region).value;
  double den = fn::sobolev_norm(u, *plan.omega, plan.k, p, plan.h).value;
  out.norm_ratio = den > 0 ? num / den : 0.0;
  return out;
}

}  // namespace sobex::ext
