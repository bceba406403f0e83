// SPDX-License-Identifier: Apache-2.0

#include "dgrd/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dgrd/common.hpp"

namespace dgrd {

namespace {

// Visit every quadrature point the assembly can touch: volume points of
// each element and face points seen from each adjacent element.
template <class Fn>
void for_each_sample(const BrokenSpace& space, Fn&& fn) {
  const Mesh& mesh = space.mesh();
  const Quadrature2D& vol = space.quad();
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.elements[static_cast<std::size_t>(e)];
    for (std::size_t q = 0; q < vol.w.size(); ++q) {
      const double x = el.x0 + (vol.xi[q] + 1.0) * el.hx() / 2.0;
      const double y = el.y0 + (vol.eta[q] + 1.0) * el.hy() / 2.0;
      fn(x, y, e);
    }
  }
  const QuadratureRule1D& line = space.line_rule();
  auto on_face = [&](double x0, double y0, double x1, double y1, int e) {
    for (int q = 0; q < line.n; ++q) {
      const double t = (line.points[static_cast<std::size_t>(q)] + 1.0) / 2.0;
      fn(x0 + t * (x1 - x0), y0 + t * (y1 - y0), e);
    }
  };
  for (const InteriorFace& f : mesh.interior_faces) {
    on_face(f.x0, f.y0, f.x1, f.y1, f.owner);
    on_face(f.x0, f.y0, f.x1, f.y1, f.neighbor);
  }
  for (const BoundaryFace& f : mesh.boundary_faces) {
    on_face(f.x0, f.y0, f.x1, f.y1, f.element);
  }
}

} // namespace

CoefficientField make_coefficient(const BrokenSpace& space,
                                  const CoefficientSpec& spec) {
  const Mesh& mesh = space.mesh();
  CoefficientField field;
  bool exact_bounds = false;
  if (spec.kind == "constant") {
    const double k = spec.a;
    field.kind_ = CoefficientKind::kConstant;
    field.eval_ = [k](double, double, int) { return k; };
    field.k0_ = field.k1_ = k;
    field.describe_ = "constant " + format17(k);
    exact_bounds = true;
  } else if (spec.kind == "checkerboard") {
    // Element-parity table: value a on elements with even ix+iy.
    std::vector<double> table(static_cast<std::size_t>(mesh.num_elements()));
    for (const Element& el : mesh.elements) {
      table[static_cast<std::size_t>(mesh.element_index(el.ix, el.iy))] =
          ((el.ix + el.iy) % 2 == 0) ? spec.a : spec.b;
    }
    const Mesh* m = &mesh;
    field.kind_ = CoefficientKind::kPiecewisePerElement;
    field.eval_ = [m, table = std::move(table)](double x, double y, int e) {
      if (e < 0) {
        e = m->locate(x, y);
      }
      return table[static_cast<std::size_t>(e)];
    };
    field.k0_ = std::min(spec.a, spec.b);
    field.k1_ = std::max(spec.a, spec.b);
    field.describe_ =
        "checkerboard " + format17(spec.a) + " " + format17(spec.b);
    exact_bounds = true;
  } else if (spec.kind == "quadrant") {
    const double xm = (mesh.domain.xmin + mesh.domain.xmax) / 2.0;
    const double ym = (mesh.domain.ymin + mesh.domain.ymax) / 2.0;
    const double a = spec.a, b = spec.b;
    const Mesh* m = &mesh;
    field.kind_ = CoefficientKind::kAnalytic;
    field.eval_ = [m, xm, ym, a, b](double x, double y, int e) {
      // Classify by element centre when a side is given, so that traces on
      // faces lying on a midline take the value of their own element.
      if (e >= 0) {
        const Element& el = m->elements[static_cast<std::size_t>(e)];
        x = (el.x0 + el.x1) / 2.0;
        y = (el.y0 + el.y1) / 2.0;
      }
      return ((x < xm) == (y < ym)) ? a : b;
    };
    field.describe_ = "quadrant " + format17(spec.a) + " " + format17(spec.b);
  } else if (spec.kind == "one_plus_x2") {
    field.kind_ = CoefficientKind::kAnalytic;
    field.eval_ = [](double x, double, int) { return 1.0 + x * x; };
    field.describe_ = "one_plus_x2";
  } else {
    throw invalid_input("make_coefficient: unknown kind '" + spec.kind + "'");
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for_each_sample(space, [&](double x, double y, int e) {
    const double v = field.eval_(x, y, e);
    if (!(v > 0.0)) {
      throw invalid_input("make_coefficient: nonpositive sample K(" +
                          format17(x) + ", " + format17(y) + ") = " +
                          format17(v));
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  });
  if (!exact_bounds) {
    field.k0_ = lo;
    field.k1_ = hi;
  }
  return field;
}

double continuity_c(const CoefficientField& k) {
  return std::max(1.0 / k.k0(), 1.0);
}

} // namespace dgrd
