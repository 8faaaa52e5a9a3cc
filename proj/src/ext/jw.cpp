#include "sobex/ext/jw.hpp"

#include <cmath>

#include "sobex/parallel.hpp"

namespace sobex::ext {

double JwOperator::eval(const Pt& x) const {
  auto terms = partition.evaluate(x);
  double v = 0;
  for (const auto& t : terms) v += t.phi * polys[t.member].eval(x);
  return v;
}

JwOperator jw_operator(const fn::BesovJet& jet, const geom::OraclePtr& complement,
                       const geom::RootFrame& frame, int j_max) {
  JwOperator op;
  op.cloud = jet.cloud;
  op.k = jet.k;
  op.cover = geom::whitney_decompose(complement, frame, j_max);

  // cubes with side <= 1 (truncated ones included: they carry the blend
  // right up to the set)
  for (std::size_t i = 0; i < op.cover.cubes.size(); ++i)
    if (op.cover.cube_side(static_cast<int>(i)) <= 1.0) op.members.push_back(static_cast<int>(i));
  op.partition = geom::PartitionFamily(&op.cover, op.members);

  const auto& cloud = *jet.cloud;
  int n = frame.n;
  auto mis = multi_indices(n, jet.k - 1);

  op.polys.resize(op.members.size());
  for (std::size_t m = 0; m < op.members.size(); ++m) {
    int ci = op.members[m];
    Pt xq = op.cover.cube_center(ci);
    double ell = op.cover.cube_side(ci);
    double radius = 6.0 * std::sqrt(static_cast<double>(n)) * ell;  // 6 diam(Q)
    // weighted average of the jet Taylor polynomial, transported to xq:
    // avg_y P(x, y) = sum_beta (x-xq)^beta / beta! c_beta with
    // c_beta = avg_y sum_{alpha >= beta} (xq-y)^(alpha-beta)/(alpha-beta)! f_alpha(y)
    fn::PolynomialK P;
    P.center = xq;
    P.n = n;
    P.deg = jet.k - 1;
    P.mis = mis;
    P.coef.assign(mis.size(), 0.0);
    double wsum = 0;
    for (std::size_t pt_i = 0; pt_i < cloud.points.size(); ++pt_i) {
      Pt d = xq - cloud.points[pt_i];
      if (norm2(d) > radius * radius) continue;
      double w = cloud.weights[pt_i];
      wsum += w;
      for (std::size_t b = 0; b < mis.size(); ++b) {
        double acc = 0;
        for (std::size_t a = 0; a < mis.size(); ++a) {
          if (!(mis[b] <= mis[a])) continue;
          MultiIdx g = mis[a] - mis[b];
          acc += pow_mi(d, g) / factorial(g) * jet.at(pt_i, a);
        }
        P.coef[b] += w * acc;
      }
    }
    if (wsum <= 0)
      throw EmptyBall("cube ball B(x_Q, 6 diam Q) holds no cloud point; increase the cloud level");
    for (auto& c : P.coef) c /= wsum;
    op.polys[m] = P;
  }
  return op;
}

fn::GridField jw_extend(const fn::BesovJet& jet, const geom::OraclePtr& complement,
                        const geom::RootFrame& frame, int j_max, double h) {
  JwOperator op = jw_operator(jet, complement, frame, j_max);
  fn::GridField g = fn::make_grid(frame.root_box(), h, 1);
  int nx = g.dims[0];
  parallel_for(g.cells(), [&](std::size_t b, std::size_t e) {
    for (std::size_t cell = b; cell < e; ++cell) {
      int i = static_cast<int>(cell % nx), j = static_cast<int>(cell / nx);
      g.at(g.cell_index(i, j)) = op.eval(g.center(i, j));
    }
  });
  return g;
}

}  // namespace sobex::ext
