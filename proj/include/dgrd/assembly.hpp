// SPDX-License-Identifier: Apache-2.0
//
// Assembly of the nonsymmetric bilinear form
//
//   B(u,v) = sum_E int_E (K grad u . grad v + u v)
//          - sum_E int_{dE} (v K grad u . mu - u K grad v . mu)
//          + int_{Gamma_int} (<v>[K grad u . n] - <u>[K grad v . n])
//          + tau int_{Gamma_int} [K grad u . n][K grad v . n]
//
// and the load L(v) = int f v, via two independent paths: `assemble_direct`
// follows the form term by term; `assemble_reduced` uses the algebraically
// identical face-wise rewriting (element-boundary sums split into interior
// jump/average products plus domain-boundary terms). The two must agree to
// roundoff and serve as each other's oracle.
//
// Jump/average orientation follows the mesh convention: on an interior face
// the owner is the higher-numbered element, n points owner -> neighbor, and
// [w] = w|owner - w|neighbor, <w> = (w|owner + w|neighbor)/2.
#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <functional>
#include <string>

#include "dgrd/coefficient.hpp"
#include "dgrd/space.hpp"

namespace dgrd {

using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Penalty weight and the mesh/degree exponents. The effective face penalty
/// is tau = sigma h^lambda / p^zeta and the norm flux weight is
/// omega = h^nu / p^theta, both with the global h (max element diameter)
/// and global p (min element degree).
struct PenaltyParams {
  double sigma = 1.0;
  double lambda = 0.0;
  double zeta = 0.0;
  double nu = 0.0;
  double theta = 0.0;
  bool allow_sigma_zero = false; // explicit comparison mode only

  void validate() const;
  double tau(double h, int p) const;
  double omega(double h, int p) const;
  std::uint64_t fingerprint() const;
};

struct AssembledSystem {
  SparseMat B;
  Eigen::VectorXd rhs;
  Eigen::MatrixXd G; // triple-norm Gram; empty until build_gram fills it
  PenaltyParams params;
  double h = 0.0; // global mesh size used in tau/omega
  int p = 0;      // global (minimum) degree used in tau/omega
  std::uint64_t fingerprint = 0;
};

/// Term-by-term assembly of B. `threads` = 1 gives the single-threaded
/// debugging mode; any thread count produces bitwise-identical matrices
/// (local blocks are computed independently and scattered in canonical
/// element/face order).
SparseMat assemble_direct(const BrokenSpace& space, const CoefficientField& K,
                          const PenaltyParams& params, int threads = 1);

/// Face-wise reduced assembly; algebraically identical to assemble_direct.
SparseMat assemble_reduced(const BrokenSpace& space, const CoefficientField& K,
                           const PenaltyParams& params, int threads = 1);

/// Load vector: entries int f phi_k at the space's quadrature.
Eigen::VectorXd
assemble_rhs(const BrokenSpace& space,
             const std::function<double(double, double)>& f);

/// Traces of a DG function at one quadrature point of an interior face.
struct FaceValues {
  double jump_u = 0.0;
  double avg_u = 0.0;
  double jump_flux = 0.0; // [K grad u . n]
  double avg_flux = 0.0;  // <K grad u . n>
};

/// Evaluate jump/average data at quadrature point `quad_point` of interior
/// face `face`. Calling this with a boundary face index is a contract
/// violation (throws invalid_input).
FaceValues face_jump_average(const BrokenSpace& space,
                             const CoefficientField& K, const DGFunction& u,
                             int face, int quad_point);

/// End-to-end assembly (direct path) with metadata.
AssembledSystem assemble_system(const BrokenSpace& space,
                                const CoefficientField& K,
                                const PenaltyParams& params,
                                const std::function<double(double, double)>& f,
                                int threads = 1);

/// Plain-text triplet dump: header line "# rows cols nnz", then one
/// "row col value" line per stored entry in row-major order, values with 17
/// significant digits.
void dump_triplets(const SparseMat& m, const std::string& path);

/// Plain-text vector dump: header "# size", then one value per line.
void dump_vector(const Eigen::VectorXd& v, const std::string& path);

} // namespace dgrd
