#include "sobex/ext/jones.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <unordered_map>

#include "sobex/parallel.hpp"

namespace sobex::ext {

namespace {

std::vector<fn::PolynomialK> fit_all(const ExtensionPlan& plan, const DerivFn& u) {
  std::vector<fn::PolynomialK> polys(plan.small.size());
  // distinct reflected cubes are fitted once and shared
  std::map<int, fn::PolynomialK> cache;
  for (std::size_t s = 0; s < plan.small.size(); ++s) {
    int star = plan.reflected[s];
    auto it = cache.find(star);
    if (it == cache.end()) {
      Box q = plan.inside.cube_box(star);
      fn::CubeQuad quad;
      if (plan.quad_mode == MomentQuad::Lattice && plan.lattice)
        quad = fn::lattice_quadrature(q, *plan.lattice);
      else
        quad = fn::gauss_quadrature(q, plan.k >= 3 ? 4 : 2);
      it = cache.emplace(star, fn::best_fit_polynomial(u, q, plan.k, quad)).first;
    }
    polys[s] = it->second;
  }
  return polys;
}

double eval_sum(const ExtensionPlan& plan, const std::vector<fn::PolynomialK>& polys, const Pt& x) {
  auto terms = plan.partition.evaluate(x);
  double v = 0;
  for (const auto& t : terms) v += t.phi * polys[t.member].eval(x);
  return v;
}

}  // namespace

JonesEvaluator::JonesEvaluator(const ExtensionPlan& plan, const DerivFn& u)
    : plan_(&plan), u_(u), polys_(fit_all(plan, u)) {}

double JonesEvaluator::operator()(const Pt& x) const {
  if (plan_->omega->contains(x)) return u_(x, MultiIdx{});
  return eval_sum(*plan_, polys_, x);
}

bool JonesEvaluator::covered(const Pt& x) const {
  if (plan_->omega->contains(x)) return true;
  return !plan_->partition.evaluate(x).empty();
}

double jones_eval(const ExtensionPlan& plan, const DerivFn& u, const Pt& x) {
  if (plan.omega->contains(x)) return u(x, MultiIdx{});
  auto polys = fit_all(plan, u);
  return eval_sum(plan, polys, x);
}

namespace {

ExtensionField extend_impl(const ExtensionPlan& plan, const DerivFn& u,
                           const std::function<double(const Pt&)>& value_on_omega,
                           const JonesOptions& opt, double input_norm) {
  ExtensionField out;
  Box root = plan.inside.frame.root_box();
  out.grid = fn::make_grid(root, opt.h, 1);
  out.region.assign(out.grid.cells(), 0);
  out.exterior.assign(out.grid.cells(), 0);

  auto polys = fit_all(plan, u);
  const auto& oracle = *plan.omega;
  int nx = out.grid.dims[0], ny = out.grid.dims[1];

  double lmin = plan.outside.frame.side(plan.outside.j_max);
  double gap_inner = std::sqrt(static_cast<double>(root.n)) * lmin;
  double gap_outer = 0.5 * plan.collar_width();
  std::atomic<int> gaps{0};

  parallel_for(static_cast<std::size_t>(nx) * ny, [&](std::size_t b, std::size_t e) {
    for (std::size_t cell = b; cell < e; ++cell) {
      int i = static_cast<int>(cell % nx), j = static_cast<int>(cell / nx);
      Pt c = out.grid.center(i, j);
      std::size_t idx = out.grid.cell_index(i, j);
      if (oracle.contains(c)) {
        out.grid.at(idx) = value_on_omega(c);
        out.region[idx] = 1;
        continue;
      }
      auto terms = plan.partition.evaluate(c);
      if (terms.empty()) {
        out.grid.at(idx) = 0.0;
        if (opt.check_gaps) {
          double d = oracle.boundary_distance(c);
          if (d > gap_inner && d < gap_outer) ++gaps;  // diagnostic only; summed below
        }
        continue;
      }
      double v = 0;
      for (const auto& t : terms) v += t.phi * polys[t.member].eval(c);
      out.grid.at(idx) = v;
      out.region[idx] = 1;
      out.exterior[idx] = 1;
    }
  });
  if (opt.check_gaps && gaps.load() > 0)
    throw PlanGap(std::to_string(gaps.load()) + " exterior collar nodes covered by no small cube");

  if (opt.compute_norms) {
    out.grid.mask = out.region;
    auto num = fn::sobolev_norm_grid(out.grid, nullptr, plan.k, opt.p, &out.region);
    out.norm_ratio = num.value / input_norm;
  }
  return out;
}

}  // namespace

ExtensionField jones_extend(const ExtensionPlan& plan, const fn::AnalyticField& u, const JonesOptions& opt) {
  DerivFn du = [&u, &opt](const Pt& x, const MultiIdx& a) {
    return fn::field_derivative(u, x, a, 0, 0.5 * opt.h);
  };
  double input_norm = 1;
  if (opt.compute_norms) input_norm = fn::sobolev_norm(u, *plan.omega, plan.k, opt.p, opt.h).value;
  return extend_impl(plan, du, [&u](const Pt& x) { return u.value(x, 0); }, opt, input_norm);
}

ExtensionField jones_extend_grid(const ExtensionPlan& plan, const fn::GridField& u, const JonesOptions& opt) {
  // derivative lattices up to order k-1 (masked central differences)
  auto mis = multi_indices(u.n(), plan.k - 1);
  auto grids = std::make_shared<std::vector<fn::GridField>>();
  for (const auto& a : mis) grids->push_back(a.order() == 0 ? u : fn::fd_multi(u, a));
  ExtensionPlan local = plan;
  local.quad_mode = MomentQuad::Lattice;
  local.lattice = &u;
  DerivFn du = [grids, mis, &u](const Pt& x, const MultiIdx& a) {
    int i, j, k;
    u.locate(x, i, j, k);
    std::size_t idx = u.cell_index(i, j, k);
    for (std::size_t m = 0; m < mis.size(); ++m)
      if (mis[m] == a) return (*grids)[m].value(idx);
    return 0.0;
  };
  double input_norm = 1;
  if (opt.compute_norms) input_norm = fn::sobolev_norm_grid(u, plan.omega.get(), plan.k, opt.p).value;
  return extend_impl(local, du, [&](const Pt& x) { return du(x, MultiIdx{}); }, opt, input_norm);
}

SupportReport support_diagnostics(const ExtensionPlan& plan, const fn::AnalyticField& u,
                                  const ExtensionField& ext) {
  SupportReport rep;
  const auto& g = ext.grid;
  // support of u on the lattice (exact zeros expected by construction)
  std::vector<std::uint8_t> supp(g.cells(), 0);
  bool any = false;
  for (int j = 0; j < g.dims[1]; ++j)
    for (int i = 0; i < g.dims[0]; ++i) {
      Pt c = g.center(i, j);
      if (plan.omega->contains(c) && u.value(c, 0) != 0.0) {
        supp[g.cell_index(i, j)] = 1;
        any = true;
      }
    }
  if (!any) return rep;  // zero field: zero enlargement
  auto d2 = fn::distance_transform(g, supp);

  // which reflected cubes touch the support
  std::vector<std::uint8_t> star_touches(plan.inside.cubes.size(), 0);
  for (std::size_t s = 0; s < plan.small.size(); ++s) {
    int star = plan.reflected[s];
    if (star_touches[star]) continue;
    Box q = plan.inside.cube_box(star);
    // scan lattice cells whose centers lie in q
    int lo0 = std::max(0, static_cast<int>(std::floor((q.lo[0] - g.box.lo[0]) / g.h - 0.5)));
    int hi0 = std::min(g.dims[0] - 1, static_cast<int>(std::ceil((q.hi[0] - g.box.lo[0]) / g.h)));
    int lo1 = std::max(0, static_cast<int>(std::floor((q.lo[1] - g.box.lo[1]) / g.h - 0.5)));
    int hi1 = std::min(g.dims[1] - 1, static_cast<int>(std::ceil((q.hi[1] - g.box.lo[1]) / g.h)));
    for (int j = lo1; j <= hi1 && !star_touches[star]; ++j)
      for (int i = lo0; i <= hi0; ++i) {
        Pt c = g.center(i, j);
        if (supp[g.cell_index(i, j)] && q.contains(c)) {
          star_touches[star] = 1;
          break;
        }
      }
  }

  for (int j = 0; j < g.dims[1]; ++j)
    for (int i = 0; i < g.dims[0]; ++i) {
      std::size_t idx = g.cell_index(i, j);
      if (!ext.exterior[idx]) continue;
      double v = g.value(idx);
      Pt c = g.center(i, j);
      bool touches = false;
      for (const auto& t : plan.partition.evaluate(c))
        if (star_touches[plan.reflected[t.member]]) touches = true;
      if (!touches && v != 0.0) ++rep.violations;
      if (v != 0.0) rep.enlargement_radius = std::max(rep.enlargement_radius, std::sqrt(d2[idx]));
    }
  rep.contact_set_ok = rep.violations == 0;
  return rep;
}

}  // namespace sobex::ext
