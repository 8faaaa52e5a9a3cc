#include "sobex/ext/plan.hpp"

#include <string>

namespace sobex::ext {

ExtensionPlan make_jones_plan(const geom::OraclePtr& omega, const geom::RootFrame& frame, int k,
                              const PlanOptions& opt) {
  ExtensionPlan plan;
  plan.omega = omega;
  plan.k = k;
  plan.eps = opt.eps;
  plan.delta = opt.delta;
  plan.inside = geom::whitney_decompose(omega, frame, opt.j_max_inside);
  plan.complement = geom::make_complement(omega, frame.root_box());
  plan.outside = geom::whitney_decompose(plan.complement, frame, opt.j_max_outside);
  plan.small = geom::small_cubes(plan.outside, opt.eps, opt.delta, /*include_truncated=*/true);

  auto res = geom::reflect_cubes(plan.outside, plan.small, plan.inside, opt.search_radius_factor);
  if (!res.unreflected.empty() && opt.expand_search) {
    double factor = opt.search_radius_factor;
    while (!res.unreflected.empty() && factor < opt.search_radius_cap) {
      factor *= 2;
      std::vector<int> missing;
      for (int pos : res.unreflected) missing.push_back(plan.small[pos]);
      auto retry = geom::reflect_cubes(plan.outside, missing, plan.inside, factor);
      std::vector<int> still;
      for (std::size_t i = 0; i < missing.size(); ++i) {
        if (retry.assigned[i] >= 0) {
          res.assigned[res.unreflected[i]] = retry.assigned[i];
          res.realized_constant = std::max(res.realized_constant, retry.realized_constant);
        } else {
          still.push_back(res.unreflected[i]);
        }
      }
      res.unreflected = still;
    }
  }
  if (!res.unreflected.empty()) {
    const auto& q = plan.outside.cubes[plan.small[res.unreflected.front()]].cube;
    throw NoReflection("no admissible reflected cube for " + std::to_string(res.unreflected.size()) +
                       " small cubes (first at level " + std::to_string(q.level) + ")");
  }
  plan.reflected = std::move(res.assigned);
  plan.realized_reflection_constant = res.realized_constant;
  plan.partition = geom::PartitionFamily(&plan.outside, plan.small);
  return plan;
}

}  // namespace sobex::ext
