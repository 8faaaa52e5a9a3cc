#pragma once

#include "sobex/fn/sobolev.hpp"
#include "sobex/geom/oracle.hpp"

namespace sobex::ext {

struct GlueResult {
  std::vector<double> hs;
  std::vector<double> norms;       // full W^{k,p} norms of the composite
  std::vector<double> seminorms;   // top-order seminorm (the growth metric)
  std::string verdict;             // "matched" | "mismatched"
  double max_growth = 0;           // max seminorm ratio per halving
};

// Glue u (inside Omega) with v (in the complement interior) on the root
// box and track the discrete W^{k,p} norm across 3 refinements. A bounded
// composite (matching traces) keeps the top-order seminorm stable; a trace
// mismatch makes it grow by sqrt(2)^k per halving through the interface
// difference quotients.
GlueResult glue(const fn::AnalyticField& u_in, const fn::AnalyticField& u_out,
                const geom::OraclePtr& omega, const Box& root, int k, double p,
                const std::vector<double>& hs);

}  // namespace sobex::ext
