#include "sobex/ext/glue.hpp"

#include <cmath>

namespace sobex::ext {

GlueResult glue(const fn::AnalyticField& u_in, const fn::AnalyticField& u_out,
                const geom::OraclePtr& omega, const Box& root, int k, double p,
                const std::vector<double>& hs) {
  if (hs.size() < 3) throw ConfigError("glue wants >= 3 grids");
  GlueResult res;
  for (double h : hs) {
    fn::GridField w = fn::make_grid(root, h, 1);
    for (int j = 0; j < w.dims[1]; ++j)
      for (int i = 0; i < w.dims[0]; ++i) {
        Pt c = w.center(i, j);
        w.at(w.cell_index(i, j)) = omega->contains(c) ? u_in.value(c, 0) : u_out.value(c, 0);
      }
    auto norm = fn::sobolev_norm_grid(w, nullptr, k, p);
    res.hs.push_back(h);
    res.norms.push_back(norm.value);
    // top-order seminorm = sum of the |alpha| = k terms
    double semi = 0;
    auto mis = multi_indices(root.n, k);
    for (std::size_t a = 0; a < mis.size(); ++a)
      if (mis[a].order() == k) semi += norm.terms[a];
    res.seminorms.push_back(semi);
  }
  res.max_growth = 0;
  for (std::size_t i = 0; i + 1 < res.seminorms.size(); ++i) {
    double ratio = res.seminorms[i + 1] / std::max(res.seminorms[i], 1e-300);
    res.max_growth = std::max(res.max_growth, ratio);
  }
  // matched iff the top-order seminorm is stable across the ladder
  bool stable = true;
  for (std::size_t i = 0; i + 1 < res.seminorms.size(); ++i) {
    double lo = std::min(res.seminorms[i], res.seminorms[i + 1]);
    double hi = std::max(res.seminorms[i], res.seminorms[i + 1]);
    if (hi > 1.10 * lo + 1e-12) stable = false;
  }
  res.verdict = stable ? "matched" : "mismatched";
  return res;
}

}  // namespace sobex::ext
