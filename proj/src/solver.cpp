// SPDX-License-Identifier: Apache-2.0

#include "dgrd/solver.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>

#include "dgrd/common.hpp"

namespace dgrd {

namespace {

// Restarted GMRES(m) on the Jacobi-scaled system D^{-1} B c = D^{-1} b.
// Returns the iteration count; fills `history` with the true relative
// residual after every restart cycle.
int gmres_jacobi(const SparseMat& b_mat, const Eigen::VectorXd& rhs,
                 Eigen::VectorXd& x, double tol, int restart, int max_iters,
                 std::vector<double>& history) {
  const Eigen::Index n = rhs.size();
  Eigen::VectorXd dinv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = b_mat.coeff(i, i);
    dinv[i] = (std::abs(d) > 0.0) ? 1.0 / d : 1.0;
  }
  const double rhs_norm = rhs.norm();
  x.setZero();
  int total_iters = 0;
  while (total_iters < max_iters) {
    const Eigen::VectorXd true_res = rhs - b_mat * x;
    history.push_back(true_res.norm() / rhs_norm);
    if (history.back() <= tol) {
      return total_iters;
    }
    Eigen::VectorXd r0 = dinv.asDiagonal() * true_res;
    const double beta = r0.norm();
    if (beta == 0.0) {
      return total_iters;
    }
    const int m = restart;
    Eigen::MatrixXd v(n, m + 1);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(m + 1, m);
    std::vector<double> cs(static_cast<std::size_t>(m)),
        sn(static_cast<std::size_t>(m));
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m + 1);
    v.col(0) = r0 / beta;
    g[0] = beta;
    int k = 0;
    for (; k < m && total_iters < max_iters; ++k, ++total_iters) {
      Eigen::VectorXd w = dinv.asDiagonal() * (b_mat * v.col(k));
      for (int i = 0; i <= k; ++i) { // modified Gram-Schmidt
        hess(i, k) = w.dot(v.col(i));
        w -= hess(i, k) * v.col(i);
      }
      hess(k + 1, k) = w.norm();
      if (hess(k + 1, k) != 0.0) {
        v.col(k + 1) = w / hess(k + 1, k);
      }
      for (int i = 0; i < k; ++i) { // apply stored Givens rotations
        const double t = cs[static_cast<std::size_t>(i)] * hess(i, k) +
                         sn[static_cast<std::size_t>(i)] * hess(i + 1, k);
        hess(i + 1, k) = -sn[static_cast<std::size_t>(i)] * hess(i, k) +
                         cs[static_cast<std::size_t>(i)] * hess(i + 1, k);
        hess(i, k) = t;
      }
      const double denom = std::hypot(hess(k, k), hess(k + 1, k));
      if (denom == 0.0) {
        ++k;
        break;
      }
      cs[static_cast<std::size_t>(k)] = hess(k, k) / denom;
      sn[static_cast<std::size_t>(k)] = hess(k + 1, k) / denom;
      hess(k, k) = denom;
      hess(k + 1, k) = 0.0;
      g[k + 1] = -sn[static_cast<std::size_t>(k)] * g[k];
      g[k] = cs[static_cast<std::size_t>(k)] * g[k];
      if (std::abs(g[k + 1]) / rhs_norm <= 0.1 * tol) {
        ++k;
        break;
      }
    }
    // back-substitute the k x k triangular system
    Eigen::VectorXd y = Eigen::VectorXd::Zero(k);
    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int j = i + 1; j < k; ++j) {
        s -= hess(i, j) * y[j];
      }
      y[i] = s / hess(i, i);
    }
    x += v.leftCols(k) * y;
  }
  const double final_res = (rhs - b_mat * x).norm() / rhs_norm;
  history.push_back(final_res);
  if (final_res > tol) {
    throw solver_failure("gmres: no convergence after " +
                             std::to_string(total_iters) + " iterations",
                         history);
  }
  return total_iters;
}

} // namespace

std::pair<DGFunction, SolveReport> solve_linear(const BrokenSpace& space,
                                                const AssembledSystem& system) {
  if (system.B.rows() != space.num_dofs() ||
      system.rhs.size() != space.num_dofs()) {
    throw invalid_input("solve_linear: system/space size mismatch");
  }
  const auto t0 = std::chrono::steady_clock::now();
  DGFunction u(space);
  SolveReport rep;
  const double rhs_norm = system.rhs.norm();
  if (rhs_norm == 0.0) {
    rep.method = "direct";
    rep.rel_residual = 0.0; // b = 0 has the unique solution c = 0
  } else if (space.num_dofs() <= kDenseSolveLimit) {
    rep.method = "direct";
    const Eigen::MatrixXd dense(system.B);
    u.coeffs = Eigen::PartialPivLU<Eigen::MatrixXd>(dense).solve(system.rhs);
    rep.rel_residual = (system.rhs - system.B * u.coeffs).norm() / rhs_norm;
    if (!(rep.rel_residual <= 1e-10)) {
      throw solver_failure("direct solve residual " +
                               format17(rep.rel_residual) + " exceeds 1e-10",
                           {rep.rel_residual});
    }
  } else {
    rep.method = "gmres";
    std::vector<double> history;
    rep.iterations = gmres_jacobi(system.B, system.rhs, u.coeffs, 1e-12, 60,
                                  20000, history);
    rep.rel_residual = history.back();
  }
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return {std::move(u), rep};
}

VbvpResult solve_vbvp(const VbvpConfig& config) {
  if (!config.f) {
    throw invalid_input("solve_vbvp: no load function configured");
  }
  config.params.validate();
  VbvpResult r;
  r.mesh = std::make_unique<Mesh>(
      build_rect_mesh(config.domain, config.nx, config.ny));
  std::vector<int> degrees = config.degrees;
  if (degrees.empty()) {
    throw invalid_input("solve_vbvp: no polynomial degrees configured");
  }
  if (degrees.size() == 1) {
    degrees.assign(static_cast<std::size_t>(r.mesh->num_elements()),
                   degrees[0]);
  }
  r.space = std::make_unique<BrokenSpace>(*r.mesh, std::move(degrees),
                                          config.quad_order);
  r.coefficient = std::make_unique<CoefficientField>(
      make_coefficient(*r.space, config.coefficient));
  r.system = assemble_system(*r.space, *r.coefficient, config.params, config.f,
                             config.threads);
  auto [u, rep] = solve_linear(*r.space, r.system);
  r.u = std::make_unique<DGFunction>(std::move(u));
  r.report = rep;
  r.triple_norm_u = triple_norm(*r.u, *r.coefficient, config.params);
  return r;
}

} // namespace dgrd
