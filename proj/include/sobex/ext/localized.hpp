#pragma once

#include <memory>

#include "sobex/ext/jones.hpp"

namespace sobex::ext {

// Discrete mollification: convolution with the tensor-product smooth bump
// theta_t (unit mass, support in the ball of radius t). Output is clamped
// to the input grid; indicator inputs stay in [0,1]. Throws
// KernelUnderresolved when t < 2h.
fn::GridField mollify(const fn::GridField& g, double t);

// Extension by zero outside Omega onto the root box. The input must vanish
// on a collar of the boundary: |u| = 0 at sampled collar points, else
// CollarViolation. Norms are preserved to quadrature tolerance.
struct ZeroExtension {
  fn::GridField grid;
  double norm_in = 0, norm_out = 0;
};
ZeroExtension extend_by_zero(const fn::AnalyticField& u, const geom::OraclePtr& omega, const Box& root,
                             double h, double collar, int k = 1, double p = 2.0);

// One patch of a locally (eps,delta) structure: an open box O_j on which
// Omega agrees with an (eps,delta)-domain Omega_j.
struct Patch {
  Box window;                    // O_j
  geom::OraclePtr domain;        // Omega_j
  ExtensionPlan plan;            // Jones plan for Omega_j
};

// The data of the localized operator: patches, the cutoff radius r, the
// Dirichlet part D of the boundary (as its complement N = boundary \ D is
// what the patches must cover), and grids of the cutoffs.
struct LocalizedPlan {
  geom::OraclePtr omega;
  std::vector<Patch> patches;
  double r = 0.25;
  double h = 1.0 / 128;
  int k = 1;
  // N = closure of (boundary minus D), sampled
  std::vector<Pt> n_samples;
  fn::GridField eta;                    // 1 near N, 0 past r/2 of N
  std::vector<fn::GridField> psi;       // per patch
  std::vector<std::uint8_t> region;     // cells where the output is defined
};

// Build cutoffs and patch plans. `n_samples` discretizes boundary \ D.
// Throws PatchGap when some sample of N has no patch with B(x,r) inside.
LocalizedPlan make_localized_plan(const geom::OraclePtr& omega, std::vector<Patch> patches,
                                  std::vector<Pt> n_samples, double r, double h, int k,
                                  const geom::RootFrame& frame);

struct LocalizedField {
  fn::GridField grid;
  std::vector<std::uint8_t> region;
  double norm_ratio = 0;
};

// The localized extension (1-eta) u~ + sum_j phi_j Lambda_{k,j} E_j(psi_j u)
// with phi_j = eta psi_j / sum psi_i^2.
LocalizedField localized_extend(const LocalizedPlan& plan, const fn::AnalyticField& u, double p = 2.0);

}  // namespace sobex::ext
