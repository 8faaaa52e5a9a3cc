#pragma once

#include "sobex/fn/besov.hpp"
#include "sobex/fn/gridfield.hpp"
#include "sobex/geom/oracle.hpp"

namespace sobex::tr {

struct TraceReport {
  fn::BesovJet jet;
  std::vector<double> residuals;  // [point * comps + ci]: |A(r/2) - A(r)|
  std::vector<double> radii;      // the ladder used (descending)
  double max_residual = 0;
};

struct TraceOptions {
  // radii ladder, descending; the two finest drive the extrapolation.
  std::vector<double> radii;
  int subsample = 8;  // partial-cell resolution for the ball quadrature
};

// Higher-order restriction to a cloud by full-ball averages of the grid
// derivatives, Richardson-extrapolated under the O(r^2) model
// f = (4 A(r/2) - A(r)) / 3. Throws UnderresolvedBall when a ball holds
// fewer than 2^n cells.
TraceReport restrict_jet(const fn::GridField& v, const geom::AhlforsCloud& cloud, int k,
                         const TraceOptions& opt);

// One-sided variant: averages over Omega cap B(x, r). One-sided averages
// carry an O(r) first term, so the extrapolation model here is linear:
// f = 2 A(r/2) - A(r).
TraceReport interior_restrict_jet(const fn::GridField& u, const geom::DomainOracle& oracle,
                                  const geom::AhlforsCloud& cloud, int k, const TraceOptions& opt);

// Same operators for analytic fields (sampled on a grid internally).
TraceReport restrict_jet(const fn::AnalyticField& v, const Box& window, double h,
                         const geom::AhlforsCloud& cloud, int k, const TraceOptions& opt);

}  // namespace sobex::tr
