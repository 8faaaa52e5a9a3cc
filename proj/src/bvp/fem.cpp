#include "sobex/bvp/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sobex::bvp {

namespace {
double point_seg_dist(const Pt& p, const geom::Segment& s) {
  Pt d = s.b - s.a;
  double len2 = dot(d, d);
  double t = len2 == 0 ? 0.0 : std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  return dist(p, s.a + t * d);
}
}  // namespace

double BoundaryPart::distance(const Pt& x, const geom::DomainOracle& oracle) const {
  switch (kind) {
    case None:
      return std::numeric_limits<double>::infinity();
    case All:
      return oracle.boundary_distance(x);
    case Segments: {
      double d = std::numeric_limits<double>::infinity();
      for (const auto& s : segs) d = std::min(d, point_seg_dist(x, s));
      return d;
    }
  }
  return std::numeric_limits<double>::infinity();
}

FemSpace make_space(const geom::OraclePtr& omega, const Box& box, double h, BoundaryPart dirichlet) {
  FemSpace sp;
  sp.box = box;
  sp.h = h;
  sp.omega = omega;
  sp.dirichlet = std::move(dirichlet);
  for (int ax = 0; ax < 2; ++ax) {
    double cells = box.side(ax) / h;
    sp.ncell[ax] = static_cast<int>(std::llround(cells));
    if (std::abs(sp.ncell[ax] - cells) > 1e-9) throw ConfigError("h must divide the box sides");
    sp.nnode[ax] = sp.ncell[ax] + 1;
  }
  sp.cell_active.assign(static_cast<std::size_t>(sp.ncell[0]) * sp.ncell[1], 0);
  // active iff center inside and all corners in the closure
  for (int cy = 0; cy < sp.ncell[1]; ++cy)
    for (int cx = 0; cx < sp.ncell[0]; ++cx) {
      Pt c = pt(box.lo[0] + (cx + 0.5) * h, box.lo[1] + (cy + 0.5) * h);
      if (!omega->contains(c)) continue;
      bool closure = true;
      for (int dy = 0; dy <= 1 && closure; ++dy)
        for (int dx = 0; dx <= 1; ++dx) {
          Pt corner = sp.node_pt(cx + dx, cy + dy);
          if (!omega->contains(corner) && omega->boundary_distance(corner) > 1e-12) {
            closure = false;
            break;
          }
        }
      if (closure) sp.cell_active[sp.cell(cx, cy)] = 1;
    }

  std::size_t nn = static_cast<std::size_t>(sp.nnode[0]) * sp.nnode[1];
  sp.node_used.assign(nn, 0);
  sp.node_constrained.assign(nn, 0);
  sp.node_free_id.assign(nn, -1);
  for (int cy = 0; cy < sp.ncell[1]; ++cy)
    for (int cx = 0; cx < sp.ncell[0]; ++cx) {
      if (!sp.cell_active[sp.cell(cx, cy)]) continue;
      for (int dy = 0; dy <= 1; ++dy)
        for (int dx = 0; dx <= 1; ++dx) sp.node_used[sp.node(cx + dx, cy + dy)] = 1;
    }
  int next = 0;
  for (int iy = 0; iy < sp.nnode[1]; ++iy)
    for (int ix = 0; ix < sp.nnode[0]; ++ix) {
      std::size_t id = sp.node(ix, iy);
      if (!sp.node_used[id]) continue;
      double d = sp.dirichlet.distance(sp.node_pt(ix, iy), *omega);
      if (d < h) {
        sp.node_constrained[id] = 1;
      } else {
        sp.node_free_id[id] = next++;
      }
    }
  sp.free_count = next;
  return sp;
}

namespace {

struct Quad1 {
  std::vector<double> t, w;  // on [0,1]
};
Quad1 gauss1(int order) {
  Quad1 q;
  if (order <= 2) {
    double a = 0.5 - 0.5 / std::sqrt(3.0), b = 0.5 + 0.5 / std::sqrt(3.0);
    q.t = {a, b};
    q.w = {0.5, 0.5};
  } else if (order == 3) {
    double s = 0.5 * std::sqrt(3.0 / 5.0);
    q.t = {0.5 - s, 0.5, 0.5 + s};
    q.w = {5.0 / 18, 8.0 / 18, 5.0 / 18};
  } else {
    double aa = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    double bb = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    double wa = (18.0 + std::sqrt(30.0)) / 72.0, wb = (18.0 - std::sqrt(30.0)) / 72.0;
    q.t = {0.5 - 0.5 * bb, 0.5 - 0.5 * aa, 0.5 + 0.5 * aa, 0.5 + 0.5 * bb};
    q.w = {wb, wa, wa, wb};
  }
  return q;
}

// Q1 shape functions on the unit cell, node order (0,0),(1,0),(0,1),(1,1)
void shapes(double xi, double eta, double N[4], double dN[4][2]) {
  N[0] = (1 - xi) * (1 - eta);
  N[1] = xi * (1 - eta);
  N[2] = (1 - xi) * eta;
  N[3] = xi * eta;
  dN[0][0] = -(1 - eta);
  dN[0][1] = -(1 - xi);
  dN[1][0] = (1 - eta);
  dN[1][1] = -xi;
  dN[2][0] = -eta;
  dN[2][1] = (1 - xi);
  dN[3][0] = eta;
  dN[3][1] = xi;
}

}  // namespace

Assembled assemble(const WeakProblem& problem) {
  const FemSpace& sp = problem.space;
  if (problem.A.M != 1) throw ConfigError("assemble handles scalar problems (M = 1)");
  if (sp.free_count == 0) throw EmptySpace("all nodes constrained");
  double quotient = ellipticity_sample(problem.A, *sp.omega, 1024);
  if (quotient < problem.A.kappa * (1 - 1e-6))
    throw EllipticityFail("sampled ellipticity " + std::to_string(quotient) + " below kappa");

  Assembled sys;
  sys.nfree = sp.free_count;
  std::vector<std::map<int, double>> rows(sp.free_count);
  sys.rhs.assign(sp.free_count, 0.0);
  std::vector<double> hat_l2(sp.free_count, 0.0);

  Quad1 q = gauss1(problem.quad_order);
  double h = sp.h;
  std::vector<double> a(problem.A.size());

  for (int cy = 0; cy < sp.ncell[1]; ++cy)
    for (int cx = 0; cx < sp.ncell[0]; ++cx) {
      if (!sp.cell_active[sp.cell(cx, cy)]) continue;
      std::size_t nid[4] = {sp.node(cx, cy), sp.node(cx + 1, cy), sp.node(cx, cy + 1),
                            sp.node(cx + 1, cy + 1)};
      Pt base = sp.node_pt(cx, cy);
      double K[4][4] = {{0}};
      double F[4] = {0};
      double Ml[4][4] = {{0}};
      for (std::size_t gy = 0; gy < q.t.size(); ++gy)
        for (std::size_t gx = 0; gx < q.t.size(); ++gx) {
          double xi = q.t[gx], eta = q.t[gy];
          double w = q.w[gx] * q.w[gy] * h * h;
          double N[4], dN[4][2];
          shapes(xi, eta, N, dN);
          Pt x = pt(base[0] + xi * h, base[1] + eta * h);
          problem.A.eval(x, a.data());
          // grad phi = dN / h
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
              double acc = 0;
              for (int al = 0; al < 2; ++al)
                for (int be = 0; be < 2; ++be) acc += a[al * 2 + be] * (dN[j][be] / h) * (dN[i][al] / h);
              K[i][j] += w * acc;
              Ml[i][j] += w * N[i] * N[j];
            }
          double fv = problem.f_vol.value ? problem.f_vol.value(x, 0) : 0.0;
          for (int i = 0; i < 4; ++i) F[i] += w * fv * N[i];
          if (problem.galerkin_target) {
            // F_i += sum <A grad(target), grad(phi_i)>
            double gt[2];
            MultiIdx dx1{{1, 0, 0}}, dy1{{0, 1, 0}};
            gt[0] = fn::field_derivative(*problem.galerkin_target, x, dx1, 0, 0.25 * h);
            gt[1] = fn::field_derivative(*problem.galerkin_target, x, dy1, 0, 0.25 * h);
            for (int i = 0; i < 4; ++i) {
              double acc = 0;
              for (int al = 0; al < 2; ++al)
                for (int be = 0; be < 2; ++be) acc += a[al * 2 + be] * gt[be] * (dN[i][al] / h);
              F[i] += w * acc;
            }
          }
        }
      for (int i = 0; i < 4; ++i) {
        int fi = sp.node_free_id[nid[i]];
        if (fi < 0) continue;
        sys.rhs[fi] += F[i];
        for (int j = 0; j < 4; ++j) {
          int fj = sp.node_free_id[nid[j]];
          if (fj < 0) continue;  // constrained to zero: no lift
          rows[fi][fj] += K[i][j];
        }
        hat_l2[fi] += Ml[i][i];
      }
    }

  // boundary density on the staircase boundary away from the D-collar
  if (problem.g_bnd) {
    Quad1 qb = gauss1(std::max(problem.quad_order, 2));
    auto face = [&](Pt a0, Pt a1, std::size_t n0, std::size_t n1) {
      Pt mid = 0.5 * (a0 + a1);
      if (sp.dirichlet.distance(mid, *sp.omega) < h) return;
      for (std::size_t g = 0; g < qb.t.size(); ++g) {
        double t = qb.t[g];
        Pt x = a0 + t * (a1 - a0);
        double w = qb.w[g] * dist(a0, a1);
        double gv = problem.g_bnd(x);
        int f0 = sp.node_free_id[n0], f1 = sp.node_free_id[n1];
        if (f0 >= 0) sys.rhs[f0] += w * gv * (1 - t);
        if (f1 >= 0) sys.rhs[f1] += w * gv * t;
      }
    };
    auto active = [&](int cx, int cy) {
      if (cx < 0 || cy < 0 || cx >= sp.ncell[0] || cy >= sp.ncell[1]) return false;
      return sp.cell_active[sp.cell(cx, cy)] != 0;
    };
    for (int cy = 0; cy < sp.ncell[1]; ++cy)
      for (int cx = 0; cx < sp.ncell[0]; ++cx) {
        if (!active(cx, cy)) continue;
        if (!active(cx, cy - 1)) face(sp.node_pt(cx, cy), sp.node_pt(cx + 1, cy), sp.node(cx, cy), sp.node(cx + 1, cy));
        if (!active(cx, cy + 1))
          face(sp.node_pt(cx, cy + 1), sp.node_pt(cx + 1, cy + 1), sp.node(cx, cy + 1), sp.node(cx + 1, cy + 1));
        if (!active(cx - 1, cy)) face(sp.node_pt(cx, cy), sp.node_pt(cx, cy + 1), sp.node(cx, cy), sp.node(cx, cy + 1));
        if (!active(cx + 1, cy))
          face(sp.node_pt(cx + 1, cy), sp.node_pt(cx + 1, cy + 1), sp.node(cx + 1, cy), sp.node(cx + 1, cy + 1));
      }
  }

  // CSR
  sys.rowptr.assign(sp.free_count + 1, 0);
  for (int r = 0; r < sp.free_count; ++r) sys.rowptr[r + 1] = sys.rowptr[r] + static_cast<int>(rows[r].size());
  sys.col.resize(sys.rowptr.back());
  sys.val.resize(sys.rowptr.back());
  for (int r = 0; r < sp.free_count; ++r) {
    int at = sys.rowptr[r];
    for (auto& [c, v] : rows[r]) {
      sys.col[at] = c;
      sys.val[at] = v;
      ++at;
    }
  }
  for (double f : sys.rhs) sys.compat += f;

  // hat W^{1,2} norms: |phi|_{L2}^2 from the mass diagonal, gradient part
  // identical for interior hats: use |grad phi_i|^2 integral = 8/3 (unit
  // Laplacian diagonal) scaled; compute from an A = I stiffness diagonal.
  sys.hat_norm.assign(sp.free_count, 0.0);
  {
    std::vector<double> diagI(sp.free_count, 0.0);
    for (int cy = 0; cy < sp.ncell[1]; ++cy)
      for (int cx = 0; cx < sp.ncell[0]; ++cx) {
        if (!sp.cell_active[sp.cell(cx, cy)]) continue;
        std::size_t nid[4] = {sp.node(cx, cy), sp.node(cx + 1, cy), sp.node(cx, cy + 1),
                              sp.node(cx + 1, cy + 1)};
        // exact unit-cell integrals: int |grad N_i|^2 = 2/3 per cell corner
        for (int i = 0; i < 4; ++i) {
          int fi = sp.node_free_id[nid[i]];
          if (fi >= 0) diagI[fi] += 2.0 / 3.0;
        }
      }
    for (int r = 0; r < sp.free_count; ++r)
      sys.hat_norm[r] = std::sqrt(hat_l2[r]) + std::sqrt(diagI[r]);
  }
  return sys;
}

namespace {
void spmv(const Assembled& sys, const std::vector<double>& x, std::vector<double>& y) {
  int n = sys.nfree;
  for (int r = 0; r < n; ++r) {
    double acc = 0;
    for (int at = sys.rowptr[r]; at < sys.rowptr[r + 1]; ++at) acc += sys.val[at] * x[sys.col[at]];
    y[r] = acc;
  }
}
void deflate(std::vector<double>& x) {
  double mean = 0;
  for (double v : x) mean += v;
  mean /= x.size();
  for (double& v : x) v -= mean;
}
}  // namespace

SolveResult solve_mixed(const WeakProblem& problem, const Assembled& sys) {
  const FemSpace& sp = problem.space;
  SolveResult out;
  bool neumann = sp.dirichlet.kind == BoundaryPart::None;
  double fnorm = 0;
  for (double v : sys.rhs) fnorm += v * v;
  fnorm = std::sqrt(fnorm);
  if (neumann && std::abs(sys.compat) > 1e-10 * std::max(fnorm, 1.0))
    throw Incompatible("pure-Neumann data with nonzero mean <f,1> = " + std::to_string(sys.compat));

  int n = sys.nfree;
  std::vector<double> x(n, 0.0), r = sys.rhs, z(n), p(n), Ap(n);
  if (neumann) deflate(r);
  // Jacobi preconditioner
  std::vector<double> dinv(n, 1.0);
  for (int row = 0; row < n; ++row)
    for (int at = sys.rowptr[row]; at < sys.rowptr[row + 1]; ++at)
      if (sys.col[at] == row && sys.val[at] != 0) dinv[row] = 1.0 / sys.val[at];
  auto precond = [&](const std::vector<double>& in, std::vector<double>& outv) {
    for (int i = 0; i < n; ++i) outv[i] = dinv[i] * in[i];
    if (neumann) deflate(outv);
  };
  precond(r, z);
  p = z;
  double rz = 0;
  for (int i = 0; i < n; ++i) rz += r[i] * z[i];
  double b0 = std::max(fnorm, 1e-300);
  double tol = out.solver_tolerance;
  int max_iter = 100000;
  int it = 0;
  double rnorm = 0;
  for (double v : r) rnorm += v * v;
  rnorm = std::sqrt(rnorm);
  while (rnorm > tol * b0 && it < max_iter) {
    spmv(sys, p, Ap);
    if (neumann) deflate(Ap);
    double pAp = 0;
    for (int i = 0; i < n; ++i) pAp += p[i] * Ap[i];
    if (pAp <= 0) break;
    double alpha = rz / pAp;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    precond(r, z);
    double rz_next = 0;
    for (int i = 0; i < n; ++i) rz_next += r[i] * z[i];
    double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rnorm = 0;
    for (double v : r) rnorm += v * v;
    rnorm = std::sqrt(rnorm);
    ++it;
  }
  if (rnorm > tol * b0)
    throw NotConverged("CG stalled at relative residual " + std::to_string(rnorm / b0) + " after " +
                       std::to_string(it) + " iterations");
  out.iterations = it;
  out.residual = rnorm / b0;

  // energy and conormal residual
  std::vector<double> Bx(n);
  spmv(sys, x, Bx);
  out.energy = 0;
  for (int i = 0; i < n; ++i) out.energy += x[i] * Bx[i];
  double worst = 0;
  for (int i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(Bx[i] - sys.rhs[i]) / std::max(sys.hat_norm[i], 1e-30));
  out.conormal_residual = worst;

  // scatter to the full node lattice
  out.node_values.assign(sp.node_used.size(), 0.0);
  for (std::size_t nd = 0; nd < sp.node_used.size(); ++nd)
    if (sp.node_free_id[nd] >= 0) out.node_values[nd] = x[sp.node_free_id[nd]];
  return out;
}

double conormal_residual(const WeakProblem& problem, const Assembled& sys,
                         const std::vector<double>& node_values) {
  const FemSpace& sp = problem.space;
  std::vector<double> x(sys.nfree, 0.0);
  for (std::size_t nd = 0; nd < sp.node_used.size(); ++nd)
    if (sp.node_free_id[nd] >= 0) x[sp.node_free_id[nd]] = node_values[nd];
  std::vector<double> Bx(sys.nfree);
  spmv(sys, x, Bx);
  double worst = 0;
  for (int i = 0; i < sys.nfree; ++i)
    worst = std::max(worst, std::abs(Bx[i] - sys.rhs[i]) / std::max(sys.hat_norm[i], 1e-30));
  return worst;
}

ErrorPair fem_error(const FemSpace& sp, const std::vector<double>& node_values,
                    const fn::AnalyticField& exact) {
  ErrorPair err;
  Quad1 q = gauss1(2);
  double h = sp.h;
  MultiIdx dx1{{1, 0, 0}}, dy1{{0, 1, 0}};
  for (int cy = 0; cy < sp.ncell[1]; ++cy)
    for (int cx = 0; cx < sp.ncell[0]; ++cx) {
      if (!sp.cell_active[sp.cell(cx, cy)]) continue;
      double v[4] = {node_values[sp.node(cx, cy)], node_values[sp.node(cx + 1, cy)],
                     node_values[sp.node(cx, cy + 1)], node_values[sp.node(cx + 1, cy + 1)]};
      Pt base = sp.node_pt(cx, cy);
      for (std::size_t gy = 0; gy < q.t.size(); ++gy)
        for (std::size_t gx = 0; gx < q.t.size(); ++gx) {
          double xi = q.t[gx], eta = q.t[gy];
          double w = q.w[gx] * q.w[gy] * h * h;
          double N[4], dN[4][2];
          shapes(xi, eta, N, dN);
          Pt x = pt(base[0] + xi * h, base[1] + eta * h);
          double uh = 0, gx1 = 0, gy1 = 0;
          for (int i = 0; i < 4; ++i) {
            uh += v[i] * N[i];
            gx1 += v[i] * dN[i][0] / h;
            gy1 += v[i] * dN[i][1] / h;
          }
          double ue = exact.value(x, 0);
          double gex = fn::field_derivative(exact, x, dx1, 0, 0.25 * h);
          double gey = fn::field_derivative(exact, x, dy1, 0, 0.25 * h);
          err.l2 += w * (uh - ue) * (uh - ue);
          err.h1 += w * ((uh - ue) * (uh - ue) + (gx1 - gex) * (gx1 - gex) + (gy1 - gey) * (gy1 - gey));
        }
    }
  err.l2 = std::sqrt(err.l2);
  err.h1 = std::sqrt(err.h1);
  return err;
}

fn::GridField node_to_grid(const FemSpace& sp, const std::vector<double>& node_values) {
  fn::GridField g = fn::make_grid(sp.box, sp.h, 1);
  g.mask.assign(g.cells(), 0);
  for (int cy = 0; cy < sp.ncell[1]; ++cy)
    for (int cx = 0; cx < sp.ncell[0]; ++cx) {
      std::size_t idx = g.cell_index(cx, cy);
      if (!sp.cell_active[sp.cell(cx, cy)]) continue;
      g.mask[idx] = 1;
      g.at(idx) = 0.25 * (node_values[sp.node(cx, cy)] + node_values[sp.node(cx + 1, cy)] +
                          node_values[sp.node(cx, cy + 1)] + node_values[sp.node(cx + 1, cy + 1)]);
    }
  return g;
}

}  // namespace sobex::bvp
