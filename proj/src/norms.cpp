// SPDX-License-Identifier: Apache-2.0

#include "dgrd/norms.hpp"

#include <cmath>
#include <map>

#include "dgrd/common.hpp"
#include "dgrd/kernels.hpp"
#include "local_ops.hpp"

namespace dgrd {

using detail::RowMat;
using detail::TraceTable;

double star_norm_sq(const DGFunction& u, const CoefficientField& K,
                    int element) {
  const BrokenSpace& space = *u.space;
  const Element& el = space.mesh().elements[static_cast<std::size_t>(element)];
  const ElementTables& tab = space.tables(space.degree(element));
  const Quadrature2D& rule = space.quad();
  const double detj = el.hx() * el.hy() / 4.0;
  const double sx = 2.0 / el.hx(), sy = 2.0 / el.hy();
  const double* c = u.coeffs.data() + space.offset(element);
  double acc = 0.0;
  for (int q = 0; q < tab.nq; ++q) {
    const std::size_t row = static_cast<std::size_t>(q) * tab.nb;
    const double x =
        el.x0 + (rule.xi[static_cast<std::size_t>(q)] + 1.0) * el.hx() / 2.0;
    const double y =
        el.y0 + (rule.eta[static_cast<std::size_t>(q)] + 1.0) * el.hy() / 2.0;
    const double w = rule.w[static_cast<std::size_t>(q)] * detj;
    const double kq = K.value(x, y, element);
    const double v = kernels::dot(c, &tab.phi[row],
                                  static_cast<std::size_t>(tab.nb));
    const double gx =
        sx * kernels::dot(c, &tab.dxi[row], static_cast<std::size_t>(tab.nb));
    const double gy =
        sy * kernels::dot(c, &tab.deta[row], static_cast<std::size_t>(tab.nb));
    acc += w * (kq * (gx * gx + gy * gy) + v * v);
  }
  return acc;
}

LocalLifting local_lifting(const DGFunction& u, const CoefficientField& K,
                           int element) {
  const BrokenSpace& space = *u.space;
  const RowMat a = detail::local_star_gram(space, K, element);
  const RowMat t = detail::local_flux_moments(space, K, element);
  const int nb = space.block_size(element);
  const Eigen::VectorXd c =
      u.coeffs.segment(space.offset(element), nb);
  const Eigen::VectorXd b = t * c;
  Eigen::LLT<Eigen::MatrixXd> llt{Eigen::MatrixXd(a)};
  if (llt.info() != Eigen::Success) {
    throw internal_error("local_lifting: local star Gram not SPD");
  }
  LocalLifting lift;
  lift.element = element;
  lift.z = llt.solve(b);
  lift.source = &u;
  return lift;
}

double dual_norm_flux(const DGFunction& u, const CoefficientField& K,
                      int element) {
  const BrokenSpace& space = *u.space;
  const RowMat t = detail::local_flux_moments(space, K, element);
  const int nb = space.block_size(element);
  const Eigen::VectorXd c = u.coeffs.segment(space.offset(element), nb);
  const Eigen::VectorXd b = t * c;
  const RowMat a = detail::local_star_gram(space, K, element);
  Eigen::LLT<Eigen::MatrixXd> llt{Eigen::MatrixXd(a)};
  if (llt.info() != Eigen::Success) {
    throw internal_error("dual_norm_flux: local star Gram not SPD");
  }
  const Eigen::VectorXd z = llt.solve(b);
  return std::sqrt(std::max(0.0, z.dot(b)));
}

double jump_flux_norm_sq(const DGFunction& u, const CoefficientField& K) {
  const BrokenSpace& space = *u.space;
  const Mesh& mesh = space.mesh();
  double acc = 0.0;
  for (const InteriorFace& f : mesh.interior_faces) {
    const TraceTable to = detail::trace_table(space, K, f.owner, f.owner_edge,
                                              f.normal[0], f.normal[1]);
    const TraceTable tn = detail::trace_table(space, K, f.neighbor,
                                              f.neighbor_edge, f.normal[0],
                                              f.normal[1]);
    const double* co = u.coeffs.data() + space.offset(f.owner);
    const double* cn = u.coeffs.data() + space.offset(f.neighbor);
    for (int q = 0; q < to.nq; ++q) {
      const double fo = kernels::dot(
          co, &to.flux[static_cast<std::size_t>(q) * to.nb],
          static_cast<std::size_t>(to.nb));
      const double fn = kernels::dot(
          cn, &tn.flux[static_cast<std::size_t>(q) * tn.nb],
          static_cast<std::size_t>(tn.nb));
      const double j = fo - fn;
      acc += to.wq[static_cast<std::size_t>(q)] * j * j;
    }
  }
  return acc;
}

double triple_norm(const DGFunction& u, const CoefficientField& K,
                   const PenaltyParams& params) {
  params.validate();
  const BrokenSpace& space = *u.space;
  const double h = space.mesh().h;
  const int p = space.min_degree();
  const double omega = params.omega(h, p);
  const double tau = params.tau(h, p);
  double acc = 0.0;
  for (int e = 0; e < space.mesh().num_elements(); ++e) {
    const double d = dual_norm_flux(u, K, e);
    acc += star_norm_sq(u, K, e) + omega * d * d;
  }
  acc += tau * jump_flux_norm_sq(u, K);
  return std::sqrt(std::max(0.0, acc));
}

Eigen::MatrixXd build_gram(const BrokenSpace& space, const CoefficientField& K,
                           const PenaltyParams& params, int threads) {
  params.validate();
  const Mesh& mesh = space.mesh();
  const double h = mesh.h;
  const int p = space.min_degree();
  const double omega = params.omega(h, p);
  const double tau = params.tau(h, p);
  const int ne = mesh.num_elements();
  const int nf = static_cast<int>(mesh.interior_faces.size());
  threads = std::max(1, threads);

  std::vector<RowMat> elem_blocks(static_cast<std::size_t>(ne));
  parallel_for(ne, threads, [&](int begin, int end) {
    for (int e = begin; e < end; ++e) {
      RowMat a = detail::local_star_gram(space, K, e);
      const RowMat t = detail::local_flux_moments(space, K, e);
      Eigen::LLT<Eigen::MatrixXd> llt{Eigen::MatrixXd(a)};
      if (llt.info() != Eigen::Success) {
        throw internal_error("build_gram: local star Gram not SPD");
      }
      const Eigen::MatrixXd x = llt.solve(Eigen::MatrixXd(t)); // A^{-1} T
      Eigen::MatrixXd m = Eigen::MatrixXd(t).transpose() * x;
      m = 0.5 * (m + m.transpose()).eval();
      elem_blocks[static_cast<std::size_t>(e)] = a + omega * m;
    }
  });

  // tau-weighted flux-jump penalty blocks, test side a / trial side b with
  // jump signs sa, sb.
  struct PenaltyBlocks {
    RowMat oo, on, no, nn;
  };
  std::vector<PenaltyBlocks> face_blocks(static_cast<std::size_t>(nf));
  if (tau != 0.0) {
    parallel_for(nf, threads, [&](int begin, int end) {
      for (int fi = begin; fi < end; ++fi) {
        const InteriorFace& f =
            mesh.interior_faces[static_cast<std::size_t>(fi)];
        const TraceTable to = detail::trace_table(
            space, K, f.owner, f.owner_edge, f.normal[0], f.normal[1]);
        const TraceTable tn = detail::trace_table(
            space, K, f.neighbor, f.neighbor_edge, f.normal[0], f.normal[1]);
        PenaltyBlocks& b = face_blocks[static_cast<std::size_t>(fi)];
        b.oo = RowMat::Zero(to.nb, to.nb);
        b.on = RowMat::Zero(to.nb, tn.nb);
        b.no = RowMat::Zero(tn.nb, to.nb);
        b.nn = RowMat::Zero(tn.nb, tn.nb);
        auto add = [tau](const TraceTable& ta, double sa, const TraceTable& tb,
                         double sb, RowMat& out) {
          for (int q = 0; q < ta.nq; ++q) {
            const double w = ta.wq[static_cast<std::size_t>(q)];
            const double* fa = &ta.flux[static_cast<std::size_t>(q) * ta.nb];
            const double* fb = &tb.flux[static_cast<std::size_t>(q) * tb.nb];
            for (int i = 0; i < ta.nb; ++i) {
              kernels::axpy(tau * w * sa * sb * fa[i], fb, out.row(i).data(),
                            static_cast<std::size_t>(tb.nb));
            }
          }
        };
        add(to, 1.0, to, 1.0, b.oo);
        add(to, 1.0, tn, -1.0, b.on);
        add(tn, -1.0, to, 1.0, b.no);
        add(tn, -1.0, tn, -1.0, b.nn);
      }
    });
  }

  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(space.num_dofs(), space.num_dofs());
  for (int e = 0; e < ne; ++e) {
    const int o = space.offset(e);
    const RowMat& b = elem_blocks[static_cast<std::size_t>(e)];
    g.block(o, o, b.rows(), b.cols()) += b;
  }
  if (tau != 0.0) {
    for (int fi = 0; fi < nf; ++fi) {
      const InteriorFace& f = mesh.interior_faces[static_cast<std::size_t>(fi)];
      const int oo = space.offset(f.owner);
      const int no = space.offset(f.neighbor);
      const PenaltyBlocks& b = face_blocks[static_cast<std::size_t>(fi)];
      g.block(oo, oo, b.oo.rows(), b.oo.cols()) += b.oo;
      g.block(oo, no, b.on.rows(), b.on.cols()) += b.on;
      g.block(no, oo, b.no.rows(), b.no.cols()) += b.no;
      g.block(no, no, b.nn.rows(), b.nn.cols()) += b.nn;
    }
  }
  g = 0.5 * (g + g.transpose()).eval();
  return g;
}

namespace {

// Evaluate a DG function and its physical gradient from a tabulation row.
void eval_from_tables(const ElementTables& tab, const double* coeffs, int q,
                      double sx, double sy, double& val, double& gx,
                      double& gy) {
  const std::size_t row = static_cast<std::size_t>(q) * tab.nb;
  val = kernels::dot(coeffs, &tab.phi[row], static_cast<std::size_t>(tab.nb));
  gx = sx *
       kernels::dot(coeffs, &tab.dxi[row], static_cast<std::size_t>(tab.nb));
  gy = sy *
       kernels::dot(coeffs, &tab.deta[row], static_cast<std::size_t>(tab.nb));
}

} // namespace

ErrorReport
error_norms(const DGFunction& u_h,
            const std::function<double(double, double)>& exact,
            const std::function<std::array<double, 2>(double, double)>& exact_grad,
            const CoefficientField& K, const PenaltyParams& params) {
  const BrokenSpace& space = *u_h.space;
  const Mesh& mesh = space.mesh();
  const QuadratureRule1D line = gauss_legendre(space.quad_order() + 3);
  const Quadrature2D rule = tensor_rule(line);
  std::map<int, ElementTables> tabs;
  std::map<int, FaceTables> ftabs;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const int p = space.degree(e);
    if (!tabs.count(p)) {
      tabs.emplace(p, tabulate_volume(p, rule));
      ftabs.emplace(p, tabulate_faces(p, line));
    }
  }

  const DGFunction pu = project_l2(space, exact);
  DGFunction e_h(space, Eigen::VectorXd(u_h.coeffs - pu.coeffs));

  double l2 = 0.0, h1 = 0.0, star_rem = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.elements[static_cast<std::size_t>(e)];
    const ElementTables& tab = tabs.at(space.degree(e));
    const double detj = el.hx() * el.hy() / 4.0;
    const double sx = 2.0 / el.hx(), sy = 2.0 / el.hy();
    const double* ch = u_h.coeffs.data() + space.offset(e);
    const double* cp = pu.coeffs.data() + space.offset(e);
    for (int q = 0; q < tab.nq; ++q) {
      const double x =
          el.x0 + (rule.xi[static_cast<std::size_t>(q)] + 1.0) * el.hx() / 2.0;
      const double y =
          el.y0 + (rule.eta[static_cast<std::size_t>(q)] + 1.0) * el.hy() / 2.0;
      const double w = rule.w[static_cast<std::size_t>(q)] * detj;
      const double ue = exact(x, y);
      const std::array<double, 2> ge = exact_grad(x, y);
      double vh, gxh, gyh;
      eval_from_tables(tab, ch, q, sx, sy, vh, gxh, gyh);
      const double d = vh - ue, dx = gxh - ge[0], dy = gyh - ge[1];
      l2 += w * d * d;
      h1 += w * (d * d + dx * dx + dy * dy);
      // projection remainder u - P u (star part)
      double vp, gxp, gyp;
      eval_from_tables(tab, cp, q, sx, sy, vp, gxp, gyp);
      const double r = ue - vp, rx = ge[0] - gxp, ry = ge[1] - gyp;
      const double kq = K.value(x, y, e);
      star_rem += w * (kq * (rx * rx + ry * ry) + r * r);
    }
  }

  // Flux-jump terms of the projection remainder over interior faces.
  const double h = mesh.h;
  const int pmin = space.min_degree();
  const double tau = params.tau(h, pmin);
  double jump_rem = 0.0;
  if (tau != 0.0) {
    for (const InteriorFace& f : mesh.interior_faces) {
      const FaceTables& fo = ftabs.at(space.degree(f.owner));
      const FaceTables& fn = ftabs.at(space.degree(f.neighbor));
      const Element& eo = mesh.elements[static_cast<std::size_t>(f.owner)];
      const Element& en = mesh.elements[static_cast<std::size_t>(f.neighbor)];
      const double* co = pu.coeffs.data() + space.offset(f.owner);
      const double* cn = pu.coeffs.data() + space.offset(f.neighbor);
      for (int q = 0; q < line.n; ++q) {
        const double t = (line.points[static_cast<std::size_t>(q)] + 1.0) / 2.0;
        const double x = f.x0 + t * (f.x1 - f.x0);
        const double y = f.y0 + t * (f.y1 - f.y0);
        const double w =
            line.weights[static_cast<std::size_t>(q)] * f.length / 2.0;
        const std::array<double, 2> ge = exact_grad(x, y);
        auto side_flux = [&](const FaceTables& ft, const Element& el, int elem,
                             int edge, const double* c) {
          const std::size_t row =
              static_cast<std::size_t>(q) * ft.nb;
          const double sx = 2.0 / el.hx(), sy = 2.0 / el.hy();
          const double gx = sx * kernels::dot(
              c, &ft.dxi[static_cast<std::size_t>(edge)][row],
              static_cast<std::size_t>(ft.nb));
          const double gy = sy * kernels::dot(
              c, &ft.deta[static_cast<std::size_t>(edge)][row],
              static_cast<std::size_t>(ft.nb));
          const double kq = K.value(x, y, elem);
          const double exact_f =
              kq * (ge[0] * f.normal[0] + ge[1] * f.normal[1]);
          return exact_f - kq * (gx * f.normal[0] + gy * f.normal[1]);
        };
        const double ro = side_flux(fo, eo, f.owner, f.owner_edge, co);
        const double rn = side_flux(fn, en, f.neighbor, f.neighbor_edge, cn);
        const double j = ro - rn;
        jump_rem += w * j * j;
      }
    }
  }

  const double trip_eh = triple_norm(e_h, K, params);
  ErrorReport rep;
  rep.l2 = std::sqrt(std::max(0.0, l2));
  rep.broken_h1 = std::sqrt(std::max(0.0, h1));
  rep.triple =
      std::sqrt(std::max(0.0, trip_eh * trip_eh + star_rem + tau * jump_rem));
  return rep;
}

} // namespace dgrd
