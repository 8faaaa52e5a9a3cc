#pragma once

#include <memory>

#include "sobex/fn/field.hpp"
#include "sobex/fn/polyfit.hpp"
#include "sobex/geom/partition.hpp"
#include "sobex/geom/whitney.hpp"

namespace sobex::ext {

// Jet access used by the extension operators: derivative values of the
// input on its domain, up to order k-1, one component.
using DerivFn = std::function<double(const Pt&, const MultiIdx&)>;

enum class MomentQuad { Gauss, Lattice };

// Everything the Jones operator needs: Whitney covers of the domain and of
// the complement interior, the small-cube subset with reflections, and the
// partition of unity over the small cubes.
struct ExtensionPlan {
  geom::OraclePtr omega;
  geom::OraclePtr complement;
  geom::WhitneyCover inside;
  geom::WhitneyCover outside;
  std::vector<int> small;            // outside cube ids (truncated included for coverage)
  std::vector<int> reflected;        // per small position: inside cube id
  geom::PartitionFamily partition;   // over `small`
  int k = 1;
  double eps = 1, delta = 1;
  double realized_reflection_constant = 0;
  double collar_width() const { return eps * delta / (16.0 * inside.frame.n); }

  MomentQuad quad_mode = MomentQuad::Gauss;
  const fn::GridField* lattice = nullptr;  // for MomentQuad::Lattice
};

struct PlanOptions {
  double eps = 1.0;
  double delta = 1.0;
  double search_radius_factor = 16.0;
  // expand the search radius (doubling, up to the cap) for cubes that find
  // no admissible reflection at the default radius; the realized constant
  // records the damage. Off by default: NoReflection is then an error.
  bool expand_search = false;
  double search_radius_cap = 4096.0;
  int j_max_inside = 7;
  int j_max_outside = 7;
};

// Build a Jones extension plan on a root frame that strictly contains the
// closure of Omega. Throws NoReflection when a small cube has no
// admissible partner (unless expand_search succeeds).
ExtensionPlan make_jones_plan(const geom::OraclePtr& omega, const geom::RootFrame& frame, int k,
                              const PlanOptions& opt);

}  // namespace sobex::ext
