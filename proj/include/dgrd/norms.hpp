// SPDX-License-Identifier: Apache-2.0
//
// The norm layer of the well-posedness laboratory:
//
//   ||v||_*^2       = int_E (K |grad v|^2 + v^2)            (element norm)
//   dual_norm_flux  = ||z_E||_* of the local lifting z_E    (discrete dual
//                     norm of the boundary flux functional)
//   |||v|||^2       = sum_E [ ||v||_*^2 + omega ||z_E||_*^2 ]
//                     + tau ||[K grad v . n]||^2_{Gamma_int}
//
// The lifting z_E solves, in the element's own polynomial space,
//   (z_E, w)_{*,E} = int_{dE} (K grad v . mu) w   for all local w,
// i.e. A_E z = T_E v with A_E the local star Gram and T_E the boundary flux
// moments. ||z_E||_* equals the discrete dual (H^{-1/2}-type) norm of the
// flux functional exactly, which is what makes the triple norm computable.
#pragma once

#include <Eigen/Dense>
#include <functional>

#include "dgrd/assembly.hpp"
#include "dgrd/coefficient.hpp"
#include "dgrd/space.hpp"

namespace dgrd {

/// int_E (K |grad u|^2 + u^2) by the space's quadrature.
double star_norm_sq(const DGFunction& u, const CoefficientField& K,
                    int element);

struct LocalLifting {
  int element = -1;
  Eigen::VectorXd z;          // coefficients in the element's local basis
  const DGFunction* source = nullptr; // the function whose flux it lifts
};

/// Solve the local lifting problem on `element`.
LocalLifting local_lifting(const DGFunction& u, const CoefficientField& K,
                           int element);

/// ||z_E||_* of the local lifting of u on `element`.
double dual_norm_flux(const DGFunction& u, const CoefficientField& K,
                      int element);

/// ||[K grad u . n]||^2 over all interior faces.
double jump_flux_norm_sq(const DGFunction& u, const CoefficientField& K);

/// The triple norm |||u|||, with omega/tau from params at the global (h, p).
double triple_norm(const DGFunction& u, const CoefficientField& K,
                   const PenaltyParams& params);

/// Dense symmetric positive-definite Gram matrix of the triple norm:
/// c' G c = |||v_c|||^2. Element blocks are A_E + omega T_E' A_E^{-1} T_E;
/// face blocks carry the tau-weighted flux-jump penalty. Exactly symmetric
/// (symmetrized after accumulation).
Eigen::MatrixXd build_gram(const BrokenSpace& space, const CoefficientField& K,
                           const PenaltyParams& params, int threads = 1);

struct ErrorReport {
  double l2 = 0.0;
  double broken_h1 = 0.0; // full broken Sobolev norm: L2 part + gradients
  double triple = 0.0;    // discrete surrogate, see below
};

/// Errors of u_h against an exact field. L2 and broken H1 use an elevated
/// (space order + 3) quadrature. The triple-norm column is the documented
/// discrete surrogate: |||u_h - P u|||^2 plus the star and flux-jump terms
/// of the projection remainder u - P u by quadrature; the remainder's
/// lifting term is not computable (its flux data lies outside the discrete
/// trace space) and is omitted.
ErrorReport
error_norms(const DGFunction& u_h,
            const std::function<double(double, double)>& exact,
            const std::function<std::array<double, 2>(double, double)>& exact_grad,
            const CoefficientField& K, const PenaltyParams& params);

} // namespace dgrd
