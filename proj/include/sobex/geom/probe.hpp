#pragma once

#include <cstdint>
#include <vector>

#include "sobex/geom/whitney.hpp"

namespace sobex::geom {

struct ProbeResult {
  double eps = 0;                 // lower-bound certificate for the (eps,delta) constant
  double worst_length_ratio = 0;  // sup length(path)/|x-y|
  int pairs = 0;
};

// Heuristic lower bound for the (eps,delta) constant: for sampled pairs of
// Whitney cube centers, route the shortest path through the adjacency
// graph and evaluate both the length condition and the cigar condition
// along the polyline. Throws Disconnected when a sampled pair admits no
// path.
ProbeResult epsilon_delta_probe(const WhitneyCover& cover, int samples, std::uint64_t seed = 0x5eed);

}  // namespace sobex::geom
