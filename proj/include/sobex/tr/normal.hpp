#pragma once

#include "sobex/fn/besov.hpp"

namespace sobex::tr {

// Iterated normal derivatives from a jet: the m-tuple
// { sum_{|alpha|=j} (j!/alpha!) nu^alpha f_alpha }_{j=0..m-1}
// at each point. The jet's full component count collapses to m entries.
// Throws OrderMismatch when the jet order is below m and ConfigError for
// non-unit normals.
std::vector<std::array<double, 4>> normal_derivatives(const fn::BesovJet& jet,
                                                      const std::vector<Pt>& normals, int m);

}  // namespace sobex::tr
