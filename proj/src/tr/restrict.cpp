#include "sobex/tr/restrict.hpp"

#include <atomic>
#include <cmath>

#include "sobex/parallel.hpp"

namespace sobex::tr {

namespace {

// average of grid d over {cells in B(x,r)} intersected with an optional
// oracle; partial cells are subsampled.
double ball_average(const fn::GridField& d, const Pt& x, double r, const geom::DomainOracle* oracle,
                    int subsample, int* cells_seen) {
  int n = d.n();
  double half_diag = 0.5 * std::sqrt(static_cast<double>(n)) * d.h;
  int lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
  for (int ax = 0; ax < n; ++ax) {
    lo[ax] = std::max(0, static_cast<int>(std::floor((x[ax] - r - d.box.lo[ax]) / d.h - 0.5)));
    hi[ax] = std::min(d.dims[ax] - 1, static_cast<int>(std::ceil((x[ax] + r - d.box.lo[ax]) / d.h + 0.5)));
  }
  double mass = 0, acc = 0;
  int count = 0;
  int sz = n >= 3 ? subsample : 1;
  for (int k = lo[2]; k <= (n >= 3 ? hi[2] : 0); ++k)
    for (int j = lo[1]; j <= hi[1]; ++j)
      for (int i = lo[0]; i <= hi[0]; ++i) {
        std::size_t idx = d.cell_index(i, j, k);
        if (!d.active(idx)) continue;
        Pt c = d.center(i, j, k);
        double dist_c = dist(c, x);
        if (dist_c > r + half_diag) continue;
        bool boundary_cell =
            oracle && oracle->boundary_distance(c) <= half_diag;  // straddles the domain boundary
        if (dist_c < r - half_diag && !boundary_cell) {
          if (oracle && !oracle->contains(c)) continue;
          mass += 1.0;
          acc += d.value(idx);
          ++count;
          continue;
        }
        // partial cell
        double frac = 0;
        double sh = d.h / subsample;
        for (int sk = 0; sk < sz; ++sk)
          for (int sj = 0; sj < subsample; ++sj)
            for (int si = 0; si < subsample; ++si) {
              Pt s = {c[0] - 0.5 * d.h + (si + 0.5) * sh, c[1] - 0.5 * d.h + (sj + 0.5) * sh, 0};
              if (n >= 3) s[2] = c[2] - 0.5 * d.h + (sk + 0.5) * sh;
              if (dist(s, x) > r) continue;
              if (oracle && !oracle->contains(s)) continue;
              frac += 1.0;
            }
        frac /= std::pow(subsample, n);
        if (frac > 0) {
          mass += frac;
          acc += frac * d.value(idx);
          ++count;
        }
      }
  if (cells_seen) *cells_seen = count;
  if (mass <= 0) return 0.0;
  return acc / mass;
}

TraceReport restrict_impl(const fn::GridField& v, const geom::DomainOracle* oracle,
                          const geom::AhlforsCloud& cloud, int k, const TraceOptions& opt,
                          bool one_sided) {
  if (opt.radii.size() < 2) throw ConfigError("trace needs >= 2 radii");
  for (double r : opt.radii)
    if (r < 4 * v.h) throw UnderresolvedBall("trace radius below 4h");

  TraceReport rep;
  rep.jet = fn::make_jet(cloud, k);
  rep.radii = opt.radii;
  std::size_t C = rep.jet.comps.size();
  rep.residuals.assign(cloud.points.size() * C, 0.0);

  // derivative lattices
  std::vector<fn::GridField> grids;
  for (const auto& a : rep.jet.comps) grids.push_back(a.order() == 0 ? v : fn::fd_multi(v, a));

  double r1 = opt.radii[opt.radii.size() - 2];
  double r2 = opt.radii[opt.radii.size() - 1];
  int n = v.n();
  (void)n;

  std::atomic<int> underresolved{0};
  parallel_for(cloud.points.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t pnt = b; pnt < e; ++pnt) {
      const Pt& x = cloud.points[pnt];
      for (std::size_t ci = 0; ci < C; ++ci) {
        int seen1 = 0, seen2 = 0;
        double A1 = ball_average(grids[ci], x, r1, oracle, opt.subsample, &seen1);
        double A2 = ball_average(grids[ci], x, r2, oracle, opt.subsample, &seen2);
        if (seen1 < (1 << v.n()) || seen2 < (1 << v.n())) {
          ++underresolved;
          continue;
        }
        double f = one_sided ? (2 * A2 - A1) : (4 * A2 - A1) / 3.0;
        rep.jet.at(pnt, ci) = f;
        rep.residuals[pnt * C + ci] = std::abs(A2 - A1);
      }
    }
  });
  if (underresolved.load() > 0) throw UnderresolvedBall("a ball holds fewer than 2^n cells");
  for (double r : rep.residuals) rep.max_residual = std::max(rep.max_residual, r);
  return rep;
}

}  // namespace

TraceReport restrict_jet(const fn::GridField& v, const geom::AhlforsCloud& cloud, int k,
                         const TraceOptions& opt) {
  return restrict_impl(v, nullptr, cloud, k, opt, false);
}

TraceReport interior_restrict_jet(const fn::GridField& u, const geom::DomainOracle& oracle,
                                  const geom::AhlforsCloud& cloud, int k, const TraceOptions& opt) {
  return restrict_impl(u, &oracle, cloud, k, opt, true);
}

TraceReport restrict_jet(const fn::AnalyticField& v, const Box& window, double h,
                         const geom::AhlforsCloud& cloud, int k, const TraceOptions& opt) {
  fn::GridField g = fn::sample_field(v, window, h);
  return restrict_impl(g, nullptr, cloud, k, opt, false);
}

}  // namespace sobex::tr
