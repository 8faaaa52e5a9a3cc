#pragma once

#include <cmath>
#include <unordered_map>
#include <vector>

#include "sobex/geom/whitney.hpp"

namespace sobex::geom {

// Smooth profile: 1 on [0,1/2], strictly positive through the closed cube
// (t <= 1), 0 beyond 17/16, C^inf monotone in between. The transition
// starts at the half-cube so the normalized partition keeps O(1/l)
// derivative constants; the quotient b_Q / sum b still equals 1 wherever a
// cube is the only cover, so the partition identities are unchanged.
inline double bump_profile(double t) {
  t = std::abs(t);
  if (t <= 0.5) return 1.0;
  if (t >= 17.0 / 16.0) return 0.0;
  double s = (t - 0.5) / (17.0 / 16.0 - 0.5);
  auto g = [](double x) { return x <= 0 ? 0.0 : std::exp(-1.0 / x); };
  double gs = g(s), gc = g(1.0 - s);
  return gc / (gs + gc);
}

// Tensor bump for a cube: 1 on Q, supported in (17/16) Q.
inline double cube_bump(const Pt& x, const Box& q) {
  double b = 1.0;
  for (int i = 0; i < q.n; ++i) {
    double c = 0.5 * (q.lo[i] + q.hi[i]);
    double h = 0.5 * (q.hi[i] - q.lo[i]);
    b *= bump_profile((x[i] - c) / h);
    if (b == 0.0) return 0.0;
  }
  return b;
}

// Normalized partition {phi_Q} over a cube subset of one Whitney cover:
// phi_Q = b_Q / sum b_Q', supported in (17/16) Q, summing to 1 on the cube
// union. Candidate cubes at a point are found through per-level index
// hashing (a dilate only pokes l/32 beyond the cube, so the 3^n neighbor
// stencil suffices).
class PartitionFamily {
 public:
  PartitionFamily() = default;
  PartitionFamily(const WhitneyCover* cover, std::vector<int> members);

  // ids are positions into members(); values are the normalized phi.
  struct Term {
    int member = -1;  // position in members()
    double phi = 0;
  };
  // All nonzero phi at x. Empty when x lies outside every dilate.
  std::vector<Term> evaluate(const Pt& x) const;

  // Whether x lies in the closed union of the member cubes.
  bool in_union(const Pt& x) const;

  const std::vector<int>& members() const { return members_; }
  const WhitneyCover& cover() const { return *cover_; }
  Box member_box(int member) const { return cover_->cube_box(members_[member]); }

 private:
  void candidates(const Pt& x, std::vector<int>& out) const;
  const WhitneyCover* cover_ = nullptr;
  std::vector<int> members_;
  struct LevelTable {
    int level;
    std::unordered_map<std::uint64_t, int> cells;  // packed idx -> member position
  };
  std::vector<LevelTable> tables_;
};

}  // namespace sobex::geom
