#include "sobex/tr/normal.hpp"

#include <cmath>

namespace sobex::tr {

std::vector<std::array<double, 4>> normal_derivatives(const fn::BesovJet& jet,
                                                      const std::vector<Pt>& normals, int m) {
  if (jet.k < m) throw OrderMismatch("jet order below the requested m");
  if (m > 4) throw ConfigError("m <= 4 supported");
  if (normals.size() != jet.points()) throw ConfigError("one normal per cloud point required");
  for (const auto& nu : normals)
    if (std::abs(norm(nu) - 1.0) > 1e-12) throw ConfigError("normals must be unit length to 1e-12");

  std::vector<std::array<double, 4>> out(jet.points(), {0, 0, 0, 0});
  for (std::size_t pnt = 0; pnt < jet.points(); ++pnt) {
    for (int j = 0; j < m; ++j) {
      double acc = 0;
      for (std::size_t ci = 0; ci < jet.comps.size(); ++ci) {
        if (jet.comps[ci].order() != j) continue;
        acc += factorial(j) / factorial(jet.comps[ci]) * pow_mi(normals[pnt], jet.comps[ci]) *
               jet.at(pnt, ci);
      }
      out[pnt][j] = acc;
    }
  }
  return out;
}

}  // namespace sobex::tr
