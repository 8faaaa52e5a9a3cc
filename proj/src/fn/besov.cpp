#include "sobex/fn/besov.hpp"

#include <cmath>

#include "sobex/parallel.hpp"

namespace sobex::fn {

BesovJet make_jet(const geom::AhlforsCloud& cloud, int k) {
  BesovJet j;
  j.cloud = &cloud;
  j.k = k;
  j.comps = multi_indices(cloud.n, k - 1);
  j.data.assign(cloud.points.size() * j.comps.size(), 0.0);
  return j;
}

BesovJet jet_of_field(const geom::AhlforsCloud& cloud, int k, const AnalyticField& g, double h_fd) {
  BesovJet j = make_jet(cloud, k);
  for (std::size_t pnt = 0; pnt < cloud.points.size(); ++pnt)
    for (std::size_t ci = 0; ci < j.comps.size(); ++ci)
      j.at(pnt, ci) = field_derivative(g, cloud.points[pnt], j.comps[ci], 0, h_fd);
  return j;
}

BesovNormResult besov_norm(const BesovJet& jet, double s, double p, int J_max) {
  int ks = static_cast<int>(std::floor(s));
  if (std::floor(s) == s) throw ConfigError("besov_norm needs non-integer s");
  if (jet.k != ks + 1) throw OrderMismatch("jet order must equal [s]+1");
  const auto& cloud = *jet.cloud;
  std::size_t N = cloud.points.size();
  std::size_t C = jet.comps.size();
  double d = cloud.d;

  BesovNormResult res;
  // L^p parts
  for (std::size_t ci = 0; ci < C; ++ci) {
    double acc = 0;
    for (std::size_t i = 0; i < N; ++i) acc += cloud.weights[i] * std::pow(std::abs(jet.at(i, ci)), p);
    res.lp_part += std::pow(acc, 1.0 / p);
  }

  // Taylor remainder R_alpha(x,y) = f_alpha(x) - sum_{|beta| <= [s]-|alpha|}
  // (x-y)^beta / beta! f_{alpha+beta}(y). Each pair lands in shells
  // j <= j_pair where j_pair is the largest j with |x-y| < 2^-j.
  auto comp_index = [&](const MultiIdx& a) -> int {
    for (std::size_t ci = 0; ci < C; ++ci)
      if (jet.comps[ci] == a) return static_cast<int>(ci);
    return -1;
  };
  // precompute beta lists (index pairs) per alpha
  struct Term {
    MultiIdx beta;
    int target;  // comp index of alpha+beta
    double inv_bf;
  };
  std::vector<std::vector<Term>> terms(C);
  for (std::size_t ci = 0; ci < C; ++ci) {
    int room = ks - jet.comps[ci].order();
    for (const auto& beta : multi_indices(cloud.n, room)) {
      int tgt = comp_index(jet.comps[ci] + beta);
      if (tgt >= 0) terms[ci].push_back({beta, tgt, 1.0 / factorial(beta)});
    }
  }

  int shells = J_max + 1;
  // bucket[j_pair][alpha] accumulated in fixed chunk order
  const std::size_t chunks = 64;
  std::size_t step = (N + chunks - 1) / chunks;
  std::size_t used = (N + step - 1) / step;
  std::vector<std::vector<double>> bucket(used, std::vector<double>(shells * C, 0.0));

  detail::run_chunks(used, [&](std::size_t c) {
    {
      auto& B = bucket[c];
      for (std::size_t i = c * step, ie = std::min(N, c * step + step); i < ie; ++i) {
        for (std::size_t jp = 0; jp < N; ++jp) {
          if (i == jp) continue;  // zero remainder at coincident points
          Pt diff = cloud.points[i] - cloud.points[jp];
          double dist_ij = norm(diff);
          if (dist_ij >= 1.0) continue;  // outside every shell
          // largest shell index j with dist < 2^-j
          int jpair = std::min(shells - 1, static_cast<int>(-std::log2(dist_ij)));
          while (jpair > 0 && dist_ij >= std::ldexp(1.0, -jpair)) --jpair;
          if (dist_ij >= std::ldexp(1.0, -jpair)) continue;
          double ww = cloud.weights[i] * cloud.weights[jp];
          for (std::size_t ci = 0; ci < C; ++ci) {
            double r = jet.at(i, ci);
            for (const auto& t : terms[ci]) r -= pow_mi(diff, t.beta) * t.inv_bf * jet.at(jp, t.target);
            B[jpair * C + ci] += ww * std::pow(std::abs(r), p);
          }
        }
      }
    }
  }, 0);

  // suffix sums: shell j collects every pair with j_pair >= j
  std::vector<double> pair_sum(shells * C, 0.0);
  for (const auto& B : bucket)
    for (int j = 0; j < shells; ++j)
      for (std::size_t ci = 0; ci < C; ++ci) pair_sum[j * C + ci] += B[j * C + ci];
  res.shell.assign(shells, 0.0);
  std::vector<double> suffix(C, 0.0);
  double total = 0;
  for (int j = shells - 1; j >= 0; --j) {
    double shell_val = 0;
    for (std::size_t ci = 0; ci < C; ++ci) {
      suffix[ci] += pair_sum[j * C + ci];
      double scale = std::pow(2.0, j * (s - jet.comps[ci].order()) * p) * std::pow(2.0, j * d);
      shell_val += scale * suffix[ci];
    }
    res.shell[j] = shell_val;
    total += shell_val;
  }
  res.value = res.lp_part + std::pow(total, 1.0 / p);
  return res;
}

}  // namespace sobex::fn
