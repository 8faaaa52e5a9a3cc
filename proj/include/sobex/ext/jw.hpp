#pragma once

#include "sobex/fn/besov.hpp"
#include "sobex/fn/gridfield.hpp"
#include "sobex/fn/polyfit.hpp"
#include "sobex/geom/partition.hpp"

namespace sobex::ext {

// Whitney-type extension of a Besov jet off an Ahlfors set: per cube Q of
// the complement cover with l(Q) <= 1, average the Taylor polynomial
// P(x,y) = sum (x-y)^alpha / alpha! f_alpha(y) over the cloud points in
// B(x_Q, 6 diam Q), then blend with the cube partition of unity.
struct JwOperator {
  geom::WhitneyCover cover;               // of complement of the set, clipped
  std::vector<int> members;               // cubes with l(Q) <= 1
  geom::PartitionFamily partition;
  const geom::AhlforsCloud* cloud = nullptr;
  int k = 1;
  // per member: transported polynomial coefficients around the cube center
  std::vector<fn::PolynomialK> polys;

  double eval(const Pt& x) const;
};

// Build the operator for a jet. Throws EmptyBall when a member cube's ball
// holds no cloud point (cover deeper than the cloud resolves).
JwOperator jw_operator(const fn::BesovJet& jet, const geom::OraclePtr& complement,
                       const geom::RootFrame& frame, int j_max);

// Sample the extension on a grid over the root box.
fn::GridField jw_extend(const fn::BesovJet& jet, const geom::OraclePtr& complement,
                        const geom::RootFrame& frame, int j_max, double h);

}  // namespace sobex::ext
