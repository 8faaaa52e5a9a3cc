#include "sobex/geom/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sobex::geom {

double ahlfors_check(const AhlforsCloud& cloud, const std::vector<double>& radii, double cap,
                     int max_centers) {
  if (cloud.points.empty()) throw NotRegular("empty cloud");
  if (radii.size() < 3) throw ConfigError("ahlfors_check needs >= 3 radii");
  std::size_t count = cloud.points.size();
  std::size_t stride = std::max<std::size_t>(1, count / static_cast<std::size_t>(max_centers));
  double worst = 0;
  for (std::size_t i = 0; i < count; i += stride) {
    const Pt& x = cloud.points[i];
    for (double r : radii) {
      double mass = 0;
      double r2 = r * r;
      for (std::size_t j = 0; j < count; ++j)
        if (norm2(cloud.points[j] - x) <= r2) mass += cloud.weights[j];
      double rd = std::pow(r, cloud.d);
      double ratio = std::max(rd / mass, mass / rd);
      worst = std::max(worst, ratio);
    }
  }
  if (worst > cap) throw NotRegular("regularity constant " + std::to_string(worst) + " exceeds cap");
  return worst;
}

AhlforsCloud segment_cloud(int count) {
  AhlforsCloud c;
  c.n = 2;
  c.d = 1.0;
  c.diam = 1.0;
  for (int i = 0; i < count; ++i) {
    c.points.push_back(pt((i + 0.5) / count, 0.0));
    c.weights.push_back(1.0 / count);
  }
  return c;
}

}  // namespace sobex::geom
