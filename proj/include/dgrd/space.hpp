// SPDX-License-Identifier: Apache-2.0
//
// Broken tensor-product Legendre spaces on a structured mesh, with
// Gauss-Legendre quadrature and reference-element tabulations.
//
// Local basis on [-1,1]^2: phi_k = P_a(xi) * P_b(eta) with k = b*(p+1)+a,
// so k = 0 is the constant mode. Physical gradients carry the affine
// scaling 2/hx, 2/hy of the element map.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <map>
#include <vector>

#include "dgrd/mesh.hpp"

namespace dgrd {

struct QuadratureRule1D {
  int n = 0;
  std::vector<double> points;  // in (-1, 1)
  std::vector<double> weights; // sum to 2
};

/// n-point Gauss-Legendre rule; exact for polynomials of degree <= 2n-1.
QuadratureRule1D gauss_legendre(int n);

/// Tensor rule on [-1,1]^2. q = qy*n1d + qx; w includes both 1D weights.
struct Quadrature2D {
  int n1d = 0;
  std::vector<double> xi, eta, w;
};
Quadrature2D tensor_rule(const QuadratureRule1D& line);

/// Legendre values P_0..P_p and derivatives at x (three-term recurrence).
void legendre_values(int p, double x, double* vals, double* ders);

/// Reference-element tabulation of one degree at a 2D rule.
/// Row-major [q*nb + k] layout; gradients are with respect to (xi, eta).
struct ElementTables {
  int degree = 0, nb = 0, nq = 0;
  std::vector<double> phi, dxi, deta;
};
ElementTables tabulate_volume(int degree, const Quadrature2D& rule);

/// Edge traces of one degree at a 1D rule. Edge parameter t runs along the
/// globally increasing coordinate, so the two sides of an interior face are
/// tabulated at matching physical points.
struct FaceTables {
  int degree = 0, nb = 0, nq = 0;
  std::array<std::vector<double>, 4> phi, dxi, deta; // [edge][q*nb + k]
};
FaceTables tabulate_faces(int degree, const QuadratureRule1D& rule);

class BrokenSpace {
public:
  /// Per-element degrees (all >= 1). quad_order 0 picks max_degree + 2.
  BrokenSpace(const Mesh& mesh, std::vector<int> degrees, int quad_order = 0);
  static BrokenSpace uniform(const Mesh& mesh, int degree, int quad_order = 0);

  const Mesh& mesh() const { return *mesh_; }
  int num_dofs() const { return ndofs_; }
  int degree(int e) const { return degrees_[static_cast<std::size_t>(e)]; }
  int min_degree() const { return p_min_; }
  int max_degree() const { return p_max_; }
  int offset(int e) const { return offsets_[static_cast<std::size_t>(e)]; }
  int block_size(int e) const { return (degree(e) + 1) * (degree(e) + 1); }
  int quad_order() const { return q_; }
  const Quadrature2D& quad() const { return quad2d_; }
  const QuadratureRule1D& line_rule() const { return line_; }

  /// Tabulations at the space's own rule (shared by all elements; the mesh
  /// is structured so every element has the same geometry).
  const ElementTables& tables(int degree) const;
  const FaceTables& face_tables(int degree) const;

  /// Basis values and physical gradients at a reference point of `element`.
  /// Output spans must have length block_size(element).
  void eval_basis(int element, double xi, double eta, double* values,
                  double* grad_x, double* grad_y) const;

  std::uint64_t fingerprint() const;

private:
  const Mesh* mesh_;
  std::vector<int> degrees_;
  std::vector<int> offsets_;
  int ndofs_ = 0, p_min_ = 0, p_max_ = 0, q_ = 0;
  QuadratureRule1D line_;
  Quadrature2D quad2d_;
  std::map<int, ElementTables> vol_tables_;
  std::map<int, FaceTables> face_tables_;
};

/// A function in the broken space: one coefficient per DOF.
struct DGFunction {
  const BrokenSpace* space = nullptr;
  Eigen::VectorXd coeffs;

  explicit DGFunction(const BrokenSpace& s)
      : space(&s), coeffs(Eigen::VectorXd::Zero(s.num_dofs())) {}
  DGFunction(const BrokenSpace& s, Eigen::VectorXd c);

  /// Value at a reference point of an element.
  double eval_ref(int element, double xi, double eta) const;
  /// Value at a physical point (element resolved through Mesh::locate).
  double eval(double x, double y) const;
  /// Physical gradient at a reference point of an element.
  std::array<double, 2> grad_ref(int element, double xi, double eta) const;
};

/// Element-wise L2 projection of f. Reproduces element-wise polynomials of
/// degree <= p_E exactly.
DGFunction project_l2(const BrokenSpace& space,
                      const std::function<double(double, double)>& f);

} // namespace dgrd
