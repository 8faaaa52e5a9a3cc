#pragma once

#include <optional>
#include <vector>

#include "sobex/fn/gridfield.hpp"
#include "sobex/geom/oracle.hpp"

namespace sobex::fn {

// Midpoint quadrature over an open set: interior cells carry full weight,
// boundary cells are subsampled 4x per axis with inside-fraction weighting,
// and the callback sees every evaluation node with its weight.
void oracle_quadrature(const geom::DomainOracle& oracle, const Box& bounds, double h,
                       const std::function<void(const Pt&, double)>& node, int subsample = 4);

struct NormResult {
  double value = 0;
  bool used_fd = false;
  std::vector<double> terms;  // L^p norm per multi-index, graded order
};

// W^{k,p} norm sum_{|alpha|<=k} ||d^alpha u||_{L^p(Omega)} by midpoint
// quadrature at spacing h. Throws SingularQuadraturePoint when a node hits
// a listed singularity.
NormResult sobolev_norm(const AnalyticField& u, const geom::DomainOracle& oracle, int k, double p,
                        double h);

// Same norm for a grid field on its own lattice (derivatives by masked
// central differences). `region` optionally restricts to a cell subset; a
// null oracle integrates over the whole region.
NormResult sobolev_norm_grid(const GridField& g, const geom::DomainOracle* oracle, int k, double p,
                             const std::vector<std::uint8_t>* region = nullptr);

enum class ScanVerdict { Converges, Diverges };

struct ScanResult {
  ScanVerdict verdict;
  std::vector<std::pair<double, double>> table;  // (h, norm)
  double slope = 0;                              // fitted d log(norm) / d log(1/h)
};

// Norm growth scan over a refining grid ladder: diverges iff the fitted
// slope exceeds 0.05; converges iff the last two values differ by < 2%.
// Throws Inconclusive otherwise.
ScanResult sobolev_norm_scan(const AnalyticField& u, const geom::DomainOracle& oracle, int k, double p,
                             const std::vector<double>& hs);

}  // namespace sobex::fn
