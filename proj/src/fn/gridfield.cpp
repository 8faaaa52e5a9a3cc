#include "sobex/fn/gridfield.hpp"

#include <cmath>
#include <limits>

namespace sobex::fn {

GridField make_grid(const Box& box, double h, int M) {
  GridField g;
  g.box = box;
  g.h = h;
  g.M = M;
  for (int i = 0; i < box.n; ++i) {
    double cells = (box.hi[i] - box.lo[i]) / h;
    g.dims[i] = static_cast<int>(std::llround(cells));
    if (std::abs(g.dims[i] - cells) > 1e-9)
      throw ConfigError("grid spacing must divide the box sides");
  }
  if (box.n < 3) g.dims[2] = 1;
  g.data.assign(g.cells() * M, 0.0);
  return g;
}

GridField sample_field(const AnalyticField& u, const Box& box, double h) {
  GridField g = make_grid(box, h, u.M);
  for (int k = 0; k < g.dims[2]; ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        Pt c = g.center(i, j, k);
        std::size_t idx = g.cell_index(i, j, k);
        for (int m = 0; m < u.M; ++m) g.at(idx, m) = u.value(c, m);
      }
  return g;
}

GridField fd_axis(const GridField& g, int axis) {
  GridField out = g;
  out.mask.assign(g.cells(), 0);
  auto shift = [&](int i, int j, int k, int d, int& si, int& sj, int& sk) {
    si = i + (axis == 0 ? d : 0);
    sj = j + (axis == 1 ? d : 0);
    sk = k + (axis == 2 ? d : 0);
  };
  for (int k = 0; k < g.dims[2]; ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        int ip, jp, kp, im, jm, km;
        shift(i, j, k, +1, ip, jp, kp);
        shift(i, j, k, -1, im, jm, km);
        std::size_t idx = g.cell_index(i, j, k);
        bool ok = g.in_grid(ip, jp, kp) && g.in_grid(im, jm, km);
        if (ok) {
          std::size_t idxp = g.cell_index(ip, jp, kp), idxm = g.cell_index(im, jm, km);
          ok = g.active(idx) && g.active(idxp) && g.active(idxm);
          if (ok)
            for (int m = 0; m < g.M; ++m)
              out.at(idx, m) = (g.value(idxp, m) - g.value(idxm, m)) / (2 * g.h);
        }
        out.mask[idx] = ok ? 1 : 0;
        if (!ok)
          for (int m = 0; m < g.M; ++m) out.at(idx, m) = 0;
      }
  return out;
}

GridField fd_multi(const GridField& g, const MultiIdx& alpha) {
  GridField out = g;
  for (int axis = 0; axis < 3; ++axis)
    for (int r = 0; r < alpha.a[axis]; ++r) out = fd_axis(out, axis);
  return out;
}

namespace {
// 1-D squared distance transform (Felzenszwalb-Huttenlocher)
void edt_1d(std::vector<double>& f) {
  int n = static_cast<int>(f.size());
  std::vector<int> v(n);
  std::vector<double> z(n + 1), out(n);
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s;
    while (true) {
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    double d = q - v[k];
    out[q] = d * d + f[v[k]];
  }
  f = out;
}
}  // namespace

std::vector<double> distance_transform(const GridField& shape, const std::vector<std::uint8_t>& seed) {
  const double INF = 1e20;
  std::vector<double> d2(shape.cells());
  for (std::size_t c = 0; c < shape.cells(); ++c) d2[c] = seed[c] ? 0.0 : INF;

  int nx = shape.dims[0], ny = shape.dims[1], nz = shape.dims[2];
  std::vector<double> line;
  // x-pass
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j) {
      line.assign(nx, 0);
      for (int i = 0; i < nx; ++i) line[i] = d2[shape.cell_index(i, j, k)];
      edt_1d(line);
      for (int i = 0; i < nx; ++i) d2[shape.cell_index(i, j, k)] = line[i];
    }
  // y-pass
  for (int k = 0; k < nz; ++k)
    for (int i = 0; i < nx; ++i) {
      line.assign(ny, 0);
      for (int j = 0; j < ny; ++j) line[j] = d2[shape.cell_index(i, j, k)];
      edt_1d(line);
      for (int j = 0; j < ny; ++j) d2[shape.cell_index(i, j, k)] = line[j];
    }
  // z-pass
  if (shape.n() >= 3)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        line.assign(nz, 0);
        for (int k = 0; k < nz; ++k) line[k] = d2[shape.cell_index(i, j, k)];
        edt_1d(line);
        for (int k = 0; k < nz; ++k) d2[shape.cell_index(i, j, k)] = line[k];
      }
  double h2 = shape.h * shape.h;
  for (auto& v : d2) v = v >= INF ? std::numeric_limits<double>::infinity() : v * h2;
  return d2;
}

}  // namespace sobex::fn
