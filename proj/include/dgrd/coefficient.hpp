// SPDX-License-Identifier: Apache-2.0
//
// Diffusion coefficient fields K(x) with certified bounds 0 < K0 <= K <= K1.
//
// Piecewise-constant fields carry exact bounds from their value table;
// analytic fields are certified by sampling every quadrature point of the
// space they are built against (volume and face rules), which is also where
// the assembly evaluates them.
#pragma once

#include <functional>
#include <string>

#include "dgrd/space.hpp"

namespace dgrd {

enum class CoefficientKind { kConstant, kPiecewisePerElement, kAnalytic };

/// Parsed description of a coefficient; part of the run configuration.
/// kinds: "constant a" | "checkerboard a b" (element-parity table) |
/// "quadrant a b" (four quadrants about the domain midlines, a on the
/// lower-left/upper-right pair) | "one_plus_x2" (K = 1 + x^2).
struct CoefficientSpec {
  std::string kind = "constant";
  double a = 1.0;
  double b = 1.0;
};

class CoefficientField {
public:
  CoefficientKind kind() const { return kind_; }
  double k0() const { return k0_; }
  double k1() const { return k1_; }
  const std::string& describe() const { return describe_; }

  /// K at a physical point. `element` selects the side for fields that are
  /// discontinuous across faces; with element < 0 points on a jump line
  /// resolve to the side their half-open quadrant owns.
  double value(double x, double y, int element = -1) const {
    return eval_(x, y, element);
  }

private:
  friend CoefficientField make_coefficient(const BrokenSpace& space,
                                           const CoefficientSpec& spec);
  CoefficientKind kind_ = CoefficientKind::kConstant;
  double k0_ = 1.0, k1_ = 1.0;
  std::string describe_;
  std::function<double(double, double, int)> eval_;
};

/// Build a field and certify its bounds on the space's quadrature points.
/// Throws invalid_input for unknown kinds or a nonpositive sample.
CoefficientField make_coefficient(const BrokenSpace& space,
                                  const CoefficientSpec& spec);

/// Continuity constant C = max{1/K0, 1}.
double continuity_c(const CoefficientField& k);

} // namespace dgrd
