#pragma once

#include <optional>

#include "sobex/bvp/tensor.hpp"
#include "sobex/fn/gridfield.hpp"

namespace sobex::bvp {

// The Dirichlet part D of the boundary.
struct BoundaryPart {
  enum Kind { None, All, Segments } kind = None;
  std::vector<geom::Segment> segs;

  double distance(const Pt& x, const geom::DomainOracle& oracle) const;
};

// Q1 staircase space: active cells lie inside Omega (closure), nodes
// within distance < h of D are constrained to zero.
struct FemSpace {
  Box box;
  double h = 1.0 / 32;
  geom::OraclePtr omega;
  BoundaryPart dirichlet;
  int ncell[2] = {0, 0};
  int nnode[2] = {0, 0};
  std::vector<std::uint8_t> cell_active;     // [cy * ncell0 + cx]
  std::vector<std::uint8_t> node_used;       // node of an active cell
  std::vector<std::uint8_t> node_constrained;
  std::vector<int> node_free_id;             // -1 when constrained/unused
  int free_count = 0;

  std::size_t cell(int cx, int cy) const { return static_cast<std::size_t>(cy) * ncell[0] + cx; }
  std::size_t node(int ix, int iy) const { return static_cast<std::size_t>(iy) * nnode[0] + ix; }
  Pt node_pt(int ix, int iy) const { return pt(box.lo[0] + ix * h, box.lo[1] + iy * h); }
};

FemSpace make_space(const geom::OraclePtr& omega, const Box& box, double h, BoundaryPart dirichlet);

struct WeakProblem {
  CoefficientTensor A;                      // M = 1
  FemSpace space;
  fn::AnalyticField f_vol;                  // interior density
  std::function<double(const Pt&)> g_bnd;   // conormal density on boundary \ D, optional
  // elliptic-projection right side: F_i = sum int A grad(target) grad(phi_i)
  std::shared_ptr<fn::AnalyticField> galerkin_target;
  int quad_order = 2;                       // Gauss points per axis and cell
};

struct Assembled {
  std::vector<int> rowptr, col;
  std::vector<double> val;
  std::vector<double> rhs;
  int nfree = 0;
  double compat = 0;  // <F, 1> when D is empty
  std::vector<double> hat_norm;  // W^{1,p'} norm per free node (p' = 2 default)
};

// Galerkin matrix and load from the bilinear form
// B(u,v) = sum int <A_{ab} d_b u, d_a v>; constrained dofs eliminated.
// Throws EllipticityFail when the sampled quotient undercuts kappa and
// EmptySpace when no free node remains.
Assembled assemble(const WeakProblem& problem);

struct SolveResult {
  std::vector<double> node_values;  // full node lattice, constrained = 0
  int iterations = 0;
  double residual = 0;              // achieved relative residual
  double energy = 0;                // u^T B u
  double conormal_residual = 0;     // max_i |(Bu - F)_i| / ||phi_i||
  double solver_tolerance = 1e-10;
};

// Conjugate gradients at relative residual 1e-10. Pure-Neumann problems
// (D empty) require |<F,1>| <= 1e-10 * ||F|| (else Incompatible) and are
// solved in the mean-zero complement.
SolveResult solve_mixed(const WeakProblem& problem, const Assembled& sys);

// Weak conormal residual of arbitrary nodal data against a right side:
// max over free-node hats of |B(u, phi_i) - <F, phi_i>| normalized by the
// hat W^{1,p'} norms.
double conormal_residual(const WeakProblem& problem, const Assembled& sys,
                         const std::vector<double>& node_values);

// L2 and W^{1,2} errors of the nodal solution against an exact field over
// the active cells (2x2 Gauss with bilinear interpolation).
struct ErrorPair {
  double l2 = 0, h1 = 0;
};
ErrorPair fem_error(const FemSpace& space, const std::vector<double>& node_values,
                    const fn::AnalyticField& exact);

// Resample nodal data onto cell centers (bilinear), masked to active cells.
fn::GridField node_to_grid(const FemSpace& space, const std::vector<double>& node_values);

}  // namespace sobex::bvp
