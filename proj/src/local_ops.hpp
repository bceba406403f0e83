// SPDX-License-Identifier: Apache-2.0
//
// Element-local building blocks shared by assembly and norms: the star
// inner-product Gram, boundary flux moments, and edge trace tables.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dgrd/coefficient.hpp"
#include "dgrd/space.hpp"

namespace dgrd::detail {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One edge of an element: endpoints ordered along the increasing global
/// coordinate (matching the face-table parameterization) plus the outward
/// unit normal.
struct EdgeGeom {
  double x0, y0, x1, y1;
  double nx, ny;
  double length;
};
EdgeGeom edge_geom(const Element& el, int edge);

/// Local basis traces on one edge at the space's 1D rule: values, normal
/// fluxes K grad(phi) . n, and physical quadrature weights.
struct TraceTable {
  int nb = 0, nq = 0;
  std::vector<double> phi;  // [q*nb + k]
  std::vector<double> flux; // [q*nb + k] = K grad(phi_k) . n at point q
  std::vector<double> wq;   // physical weights w_q * length/2
};

/// `nx, ny` is the unit normal the flux is taken against (a face normal,
/// not necessarily outward for this element). K is evaluated with this
/// element as side context.
TraceTable trace_table(const BrokenSpace& space, const CoefficientField& K,
                       int element, int edge, double nx, double ny);

/// A_E: (i,j) = int_E (K grad phi_i . grad phi_j + phi_i phi_j).
/// Exactly symmetric by construction (lower triangle mirrored).
RowMat local_star_gram(const BrokenSpace& space, const CoefficientField& K,
                       int element);

/// T_E: (k,l) = int_{dE} (K grad phi_l . mu) phi_k ds over all four edges,
/// mu the outward normal of the element.
RowMat local_flux_moments(const BrokenSpace& space, const CoefficientField& K,
                          int element);

} // namespace dgrd::detail
