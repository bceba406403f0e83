// SPDX-License-Identifier: Apache-2.0
//
// Linear solve layer: dense LU at desk scale, restarted GMRES with diagonal
// (Jacobi) scaling above it, and the end-to-end variational pipeline
// mesh -> space -> coefficient -> assemble -> solve -> norms.
#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgrd/assembly.hpp"
#include "dgrd/coefficient.hpp"
#include "dgrd/norms.hpp"
#include "dgrd/space.hpp"

namespace dgrd {

struct SolveReport {
  std::string method;        // "direct" or "gmres"
  double rel_residual = 0.0; // ||B c - b||_2 / ||b||_2 (0 for b = 0)
  int iterations = 0;        // 0 for the direct path
  double seconds = 0.0;      // wall time; never written into report files
};

/// Thrown on breakdown or non-convergence; carries the residual history.
class solver_failure : public std::runtime_error {
public:
  solver_failure(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

/// DOF threshold up to which the dense factorization is used.
inline constexpr int kDenseSolveLimit = 5000;

/// Solve B c = rhs. Relative residual above 1e-10 is treated as failure.
std::pair<DGFunction, SolveReport> solve_linear(const BrokenSpace& space,
                                                const AssembledSystem& system);

struct VbvpConfig {
  Rect domain{0.0, 0.0, 1.0, 1.0};
  int nx = 8, ny = 8;
  std::vector<int> degrees; // one per element, or single entry = uniform
  int quad_order = 0;       // 0 -> max degree + 2
  CoefficientSpec coefficient;
  PenaltyParams params;
  std::function<double(double, double)> f;
  int threads = 1;
};

/// Owns every stage of one solve so the returned DGFunction stays valid.
struct VbvpResult {
  std::unique_ptr<Mesh> mesh;
  std::unique_ptr<BrokenSpace> space;
  std::unique_ptr<CoefficientField> coefficient;
  AssembledSystem system;
  std::unique_ptr<DGFunction> u;
  SolveReport report;
  double triple_norm_u = 0.0;
};

VbvpResult solve_vbvp(const VbvpConfig& config);

} // namespace dgrd
