// SPDX-License-Identifier: Apache-2.0
//
// Executable well-posedness analysis: closed-form theory constants, the
// u-hat test-function construction, measured continuity/inf-sup constants
// from the (B, G) matrix pair, and empirical lemma-level checks.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dgrd/assembly.hpp"
#include "dgrd/coefficient.hpp"
#include "dgrd/norms.hpp"
#include "dgrd/space.hpp"

namespace dgrd {

/// Closed-form constants:
///   M     = max{3, C p^theta/h^nu, C p^zeta/(4 sigma h^lambda) + 1}
///   xi1   = sqrt(max{2, (1+|beta|)^2 + 2 beta^2 p^theta/h^nu})
///   xi2   = min{1 - (9/4)|beta|, |beta| p^theta/(4 h^nu),
///               1 - |beta| - |beta| p^zeta/(sigma h^lambda)}
///   gamma_lb = xi2/xi1.
/// The formulas are evaluated in exact rational arithmetic when the inputs
/// have exact (shortest round-trip) decimal representations, so that e.g.
/// |beta| = 0.4 at flat exponents yields xi2 = 0.1 exactly; irrational
/// inputs fall back to double evaluation.
struct TheoryConstants {
  double beta = 0.0; // signed construction parameter
  double c = 1.0;    // coefficient continuity constant max{1/K0, 1}
  double m = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;
  double gamma_lb = 0.0;
  bool xi2_positive = false; // construction valid
  bool beta_negative = false;
  std::string note; // flags the sqrt(288)/sqrt(228) discrepancy (below)
};

/// Fixed wording of the xi1 evaluation note; emitted with every constants
/// report so downstream consumers can grep for it.
extern const char* const kXi1DiscrepancyNote;

TheoryConstants theory_constants(const PenaltyParams& params, double h, int p,
                                 double beta, double c);

/// u-hat = u + beta * sum_E Psi_E(z_E): each element's lifting, extended by
/// zero, scaled by beta and added onto u.
DGFunction build_uhat(const DGFunction& u, const CoefficientField& K,
                      double beta);

/// Extreme singular values of L^{-1} B L^{-T} where G = L L^T:
///   gamma_h = smallest (discrete inf-sup), M_h = largest (continuity).
struct MeasuredConstants {
  double gamma_h = 0.0;
  double m_h = 0.0;
  int dofs = 0;
  std::uint64_t fingerprint = 0;
};

/// Dense computation, guarded to 3000 DOFs (throws invalid_input beyond).
/// G must be SPD (internal_error otherwise).
MeasuredConstants measure_constants(const SparseMat& b,
                                    const Eigen::MatrixXd& g,
                                    std::uint64_t fingerprint = 0);

/// Empirical check of the two lemma-level inequalities on random samples:
///   r1 = |||u_hat||| / |||u|||     (compared against xi1)
///   r2 = B(u, u_hat) / |||u|||^2   (compared against xi2)
/// Failures are counted and reported, never fatal: the xi2 inequality is a
/// diagnostic (its derivation can fail on fine meshes), not a gate.
struct LemmaSample {
  double r1 = 0.0;
  double r2 = 0.0;
};

struct LemmaReport {
  TheoryConstants theory;
  std::vector<LemmaSample> samples;
  double r1_max = 0.0;
  double r2_min = 0.0;
  int r1_within = 0; // samples with r1 <= xi1 (1 + 1e-9 slack)
  int r2_within = 0; // samples with r2 >= xi2 (1 - 1e-9 slack)
  std::uint64_t seed = 0;
};

LemmaReport lemma_check(const BrokenSpace& space, const CoefficientField& K,
                        const PenaltyParams& params, double beta,
                        int n_samples, std::uint64_t seed);

} // namespace dgrd
