#pragma once

#include <memory>
#include <vector>

#include "sobex/geom/cloud.hpp"
#include "sobex/geom/oracle.hpp"

namespace sobex::geom {

// Koch snowflake prefractal at the given level: a simple polygon with
// 3*4^level edges, built exactly in Q[sqrt(3)] from the unit equilateral
// triangle. The boundary cloud samples edge midpoints with the
// self-similar measure (equal mass per edge) normalized to total 1 and
// dimension d = ln 4 / ln 3.
struct KochPrefractal {
  OraclePtr domain;     // snowflake interior
  AhlforsCloud cloud;   // boundary sample
};

KochPrefractal koch_prefractal(int level);

// Open complement of a polyline curve (both sides): the Whitney carrier
// for the Jonsson-Wallin extension off an Ahlfors set.
OraclePtr make_curve_complement(OraclePtr polygon, const Box& clip);

}  // namespace sobex::geom
