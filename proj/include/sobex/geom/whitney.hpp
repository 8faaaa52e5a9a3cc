#pragma once

#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "sobex/geom/dyadic.hpp"
#include "sobex/geom/oracle.hpp"

namespace sobex::geom {

struct WhitneyCube {
  DyadicCube cube;
  double dist = 0;        // dist(Q, boundary) as computed during acceptance
  bool truncated = false; // kept at j_max without the lower distance bound
};

// Whitney cover of an open set clipped to the root frame. Cubes have
// pairwise disjoint interiors; non-truncated cubes satisfy
// sqrt(n) l(Q) <= dist(Q, boundary) <= 4 sqrt(n) l(Q).
struct WhitneyCover {
  RootFrame frame;
  OraclePtr oracle;
  int j_max = 0;
  std::vector<WhitneyCube> cubes;

  Box cube_box(int i) const { return frame.cube_box(cubes[i].cube); }
  Pt cube_center(int i) const { return frame.cube_center(cubes[i].cube); }
  double cube_side(int i) const { return frame.side(cubes[i].cube.level); }

  // Adjacency between touching cubes (closed intersection nonempty),
  // built on demand.
  const std::vector<std::vector<int>>& adjacency() const;

  // Cube id lookup by (level, index); -1 when absent.
  int find(const DyadicCube& q) const;

 private:
  mutable std::vector<std::vector<int>> adj_;
  mutable std::map<DyadicCube, int> index_;
  mutable bool adj_built_ = false, index_built_ = false;
};

// Whitney decomposition by the acceptance rule: accept Q iff Q lies in O
// and dist(Q, boundary) >= sqrt(n) l(Q), recursing otherwise down to j_max.
// Cubes inside O at j_max that fail the distance bound are kept flagged
// `truncated`. Throws EmptyDomain when nothing is accepted and
// OracleInconsistent when contains/distance disagree at a cube center.
WhitneyCover whitney_decompose(const OraclePtr& oracle, const RootFrame& frame, int j_max);

// The subset of cube ids with l(Q) <= eps*delta/(16 n). Truncated cubes are
// included only when `include_truncated` (extension plans want a complete
// collar; quadrature claims do not).
std::vector<int> small_cubes(const WhitneyCover& cover, double eps, double delta,
                             bool include_truncated = false);

struct ReflectionResult {
  // For each entry of `small`: index into inside.cubes, or -1 when no
  // admissible cube was found within the search radius.
  std::vector<int> assigned;
  std::vector<int> unreflected;           // positions into `small`
  double realized_constant = 0;           // sup dist(Q, Q*) / l(Q) over assigned
};

// Assign to each small outside cube Q a reflected inside cube Q* with
// l(Q) <= l(Q*) <= 4 l(Q), minimizing center distance within
// search_radius_factor * l(Q); ties broken by (level, index).
ReflectionResult reflect_cubes(const WhitneyCover& outside, const std::vector<int>& small,
                               const WhitneyCover& inside, double search_radius_factor = 16.0);

// Exact-arithmetic verification of the Whitney bounds for polygonal
// oracles: checks n l^2 <= dist^2 <= 16 n l^2 per non-truncated cube.
struct ExactCheckReport {
  int checked = 0;
  int lower_violations = 0;
  int upper_violations = 0;
  int skipped = 0;  // cubes without exact support (non-polygonal oracle)
};
ExactCheckReport verify_whitney_exact(const WhitneyCover& cover);

// Neighbor side-ratio check (exact: sides are powers of two).
bool neighbor_ratio_ok(const WhitneyCover& cover);

}  // namespace sobex::geom
