// SPDX-License-Identifier: Apache-2.0

#include "local_ops.hpp"

#include "dgrd/common.hpp"
#include "dgrd/kernels.hpp"

namespace dgrd::detail {

EdgeGeom edge_geom(const Element& el, int edge) {
  switch (edge) {
  case kLeft:
    return {el.x0, el.y0, el.x0, el.y1, -1.0, 0.0, el.hy()};
  case kRight:
    return {el.x1, el.y0, el.x1, el.y1, 1.0, 0.0, el.hy()};
  case kBottom:
    return {el.x0, el.y0, el.x1, el.y0, 0.0, -1.0, el.hx()};
  case kTop:
    return {el.x0, el.y1, el.x1, el.y1, 0.0, 1.0, el.hx()};
  default:
    throw internal_error("edge_geom: bad edge id");
  }
}

TraceTable trace_table(const BrokenSpace& space, const CoefficientField& K,
                       int element, int edge, double nx, double ny) {
  const Element& el = space.mesh().elements[static_cast<std::size_t>(element)];
  const int p = space.degree(element);
  const FaceTables& ft = space.face_tables(p);
  const QuadratureRule1D& line = space.line_rule();
  const EdgeGeom g = edge_geom(el, edge);
  const double sx = 2.0 / el.hx(), sy = 2.0 / el.hy();

  TraceTable t;
  t.nb = ft.nb;
  t.nq = ft.nq;
  t.phi = ft.phi[static_cast<std::size_t>(edge)];
  t.flux.resize(static_cast<std::size_t>(t.nb) * t.nq);
  t.wq.resize(static_cast<std::size_t>(t.nq));
  const std::vector<double>& dxi = ft.dxi[static_cast<std::size_t>(edge)];
  const std::vector<double>& deta = ft.deta[static_cast<std::size_t>(edge)];
  for (int q = 0; q < t.nq; ++q) {
    const double s = (line.points[static_cast<std::size_t>(q)] + 1.0) / 2.0;
    const double x = g.x0 + s * (g.x1 - g.x0);
    const double y = g.y0 + s * (g.y1 - g.y0);
    const double kq = K.value(x, y, element);
    t.wq[static_cast<std::size_t>(q)] =
        line.weights[static_cast<std::size_t>(q)] * g.length / 2.0;
    const std::size_t row = static_cast<std::size_t>(q) * t.nb;
    for (int k = 0; k < t.nb; ++k) {
      t.flux[row + static_cast<std::size_t>(k)] =
          kq * (sx * dxi[row + static_cast<std::size_t>(k)] * nx +
                sy * deta[row + static_cast<std::size_t>(k)] * ny);
    }
  }
  return t;
}

RowMat local_star_gram(const BrokenSpace& space, const CoefficientField& K,
                       int element) {
  const Element& el = space.mesh().elements[static_cast<std::size_t>(element)];
  const ElementTables& tab = space.tables(space.degree(element));
  const Quadrature2D& rule = space.quad();
  const double detj = el.hx() * el.hy() / 4.0;
  const double cx0 = 4.0 / (el.hx() * el.hx());
  const double cy0 = 4.0 / (el.hy() * el.hy());

  RowMat a = RowMat::Zero(tab.nb, tab.nb);
  for (int q = 0; q < tab.nq; ++q) {
    const double x =
        el.x0 + (rule.xi[static_cast<std::size_t>(q)] + 1.0) * el.hx() / 2.0;
    const double y =
        el.y0 + (rule.eta[static_cast<std::size_t>(q)] + 1.0) * el.hy() / 2.0;
    const double w = rule.w[static_cast<std::size_t>(q)] * detj;
    const double kq = K.value(x, y, element);
    const double wm = w, wx = w * kq * cx0, wy = w * kq * cy0;
    const std::size_t row = static_cast<std::size_t>(q) * tab.nb;
    const double* phi = &tab.phi[row];
    const double* dxi = &tab.dxi[row];
    const double* deta = &tab.deta[row];
    for (int i = 0; i < tab.nb; ++i) {
      double* out = a.row(i).data();
      kernels::axpy(wm * phi[i], phi, out, static_cast<std::size_t>(i) + 1);
      kernels::axpy(wx * dxi[i], dxi, out, static_cast<std::size_t>(i) + 1);
      kernels::axpy(wy * deta[i], deta, out, static_cast<std::size_t>(i) + 1);
    }
  }
  for (int i = 0; i < tab.nb; ++i) {
    for (int j = i + 1; j < tab.nb; ++j) {
      a(i, j) = a(j, i);
    }
  }
  return a;
}

RowMat local_flux_moments(const BrokenSpace& space, const CoefficientField& K,
                          int element) {
  const int nb = space.block_size(element);
  RowMat t = RowMat::Zero(nb, nb);
  for (int edge = 0; edge < 4; ++edge) {
    const EdgeGeom g = edge_geom(
        space.mesh().elements[static_cast<std::size_t>(element)], edge);
    const TraceTable tt = trace_table(space, K, element, edge, g.nx, g.ny);
    for (int q = 0; q < tt.nq; ++q) {
      const std::size_t row = static_cast<std::size_t>(q) * tt.nb;
      const double* phi = &tt.phi[row];
      const double* flux = &tt.flux[row];
      const double w = tt.wq[static_cast<std::size_t>(q)];
      for (int k = 0; k < nb; ++k) {
        kernels::axpy(w * phi[k], flux, t.row(k).data(),
                      static_cast<std::size_t>(nb));
      }
    }
  }
  return t;
}

} // namespace dgrd::detail
