#pragma once

#include "sobex/ext/plan.hpp"
#include "sobex/fn/gridfield.hpp"
#include "sobex/fn/sobolev.hpp"

namespace sobex::ext {

// The extension field produced by the Jones operator, sampled on a grid
// over the root box, plus the region mask on which norms are measured
// (domain cells and the covered exterior collar; the far field past the
// small-cube union is 0 by construction and excluded from norm claims).
struct ExtensionField {
  fn::GridField grid;
  std::vector<std::uint8_t> region;       // cells where the operator is defined
  std::vector<std::uint8_t> exterior;     // cells evaluated through the polynomial sum
  double norm_ratio = 0;                  // ||ext||_{W^{k,p}(region)} / ||u||_{W^{k,p}(Omega)}
};

struct JonesOptions {
  double h = 1.0 / 128;
  double p = 2.0;
  bool compute_norms = true;
  // check that every exterior node within the eps*delta collar is covered
  bool check_gaps = true;
};

// Evaluable Jones operator for one input: fits the reflected polynomials
// once, then evaluates anywhere. Points of Omega return u; exterior points
// in the small-cube union return the reflected-polynomial sum; elsewhere 0.
class JonesEvaluator {
 public:
  JonesEvaluator(const ExtensionPlan& plan, const DerivFn& u);
  double operator()(const Pt& x) const;
  // whether x lies where the truncated operator genuinely represents
  // Lambda_k (Omega or the small-cube partition support)
  bool covered(const Pt& x) const;

 private:
  const ExtensionPlan* plan_;
  DerivFn u_;
  std::vector<fn::PolynomialK> polys_;
};

double jones_eval(const ExtensionPlan& plan, const DerivFn& u, const Pt& x);

// Extend u over the root box onto a grid. The polynomial per small cube is
// fitted once and cached.
ExtensionField jones_extend(const ExtensionPlan& plan, const fn::AnalyticField& u, const JonesOptions& opt);

// Same driver for grid-sampled input (moment quadrature on the lattice).
ExtensionField jones_extend_grid(const ExtensionPlan& plan, const fn::GridField& u, const JonesOptions& opt);

struct SupportReport {
  bool contact_set_ok = true;
  double enlargement_radius = 0;  // max dist(x, supp u) over nonzero exterior samples
  int violations = 0;             // exterior samples that should be exactly zero but are not
};

// Support-preservation diagnostics: at exterior samples whose contributing
// reflected cubes all miss supp(u), the extension must be exactly 0
// (bitwise); reports the measured support enlargement radius.
SupportReport support_diagnostics(const ExtensionPlan& plan, const fn::AnalyticField& u,
                                  const ExtensionField& ext);

}  // namespace sobex::ext
