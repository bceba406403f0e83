// SPDX-License-Identifier: Apache-2.0

#include "dgrd/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "dgrd/analysis.hpp"
#include "dgrd/common.hpp"
#include "dgrd/kernels.hpp"
#include "local_ops.hpp"

namespace dgrd {

namespace {

constexpr double kPi = std::numbers::pi;

double quadrant_k(double x, double y, double a, double b) {
  return ((x < 0.5) == (y < 0.5)) ? a : b;
}

} // namespace

ManufacturedCase manufactured(const std::string& id) {
  ManufacturedCase c;
  c.id = id;
  if (id == "a") {
    c.k_spec = {"constant", 1.0, 1.0};
    c.u = [](double x, double y) {
      return std::sin(kPi * x) * std::sin(kPi * y);
    };
    c.grad_u = [](double x, double y) -> std::array<double, 2> {
      return {kPi * std::cos(kPi * x) * std::sin(kPi * y),
              kPi * std::sin(kPi * x) * std::cos(kPi * y)};
    };
    c.f = [](double x, double y) {
      return (2.0 * kPi * kPi + 1.0) * std::sin(kPi * x) * std::sin(kPi * y);
    };
    // independently grouped: -u_xx - u_yy + u
    c.lhs = [](double x, double y) {
      const double s = std::sin(kPi * x) * std::sin(kPi * y);
      return kPi * kPi * s + kPi * kPi * s + s;
    };
  } else if (id == "b") {
    c.k_spec = {"one_plus_x2", 1.0, 1.0};
    c.u = [](double x, double y) {
      return std::sin(kPi * x) * std::sin(kPi * y);
    };
    c.grad_u = [](double x, double y) -> std::array<double, 2> {
      return {kPi * std::cos(kPi * x) * std::sin(kPi * y),
              kPi * std::sin(kPi * x) * std::cos(kPi * y)};
    };
    // fully expanded form
    c.f = [](double x, double y) {
      const double sx = std::sin(kPi * x), sy = std::sin(kPi * y);
      return -2.0 * kPi * x * std::cos(kPi * x) * sy +
             2.0 * kPi * kPi * (1.0 + x * x) * sx * sy + sx * sy;
    };
    // product-rule pieces: -(K_x u_x + K u_xx + K u_yy) + u
    c.lhs = [](double x, double y) {
      const double k = 1.0 + x * x, kx = 2.0 * x;
      const double ux = kPi * std::cos(kPi * x) * std::sin(kPi * y);
      const double uxx = -kPi * kPi * std::sin(kPi * x) * std::sin(kPi * y);
      const double uyy = uxx;
      const double u = std::sin(kPi * x) * std::sin(kPi * y);
      return -(kx * ux + k * uxx + k * uyy) + u;
    };
  } else if (id == "c") {
    c.k_spec = {"quadrant", 1.0, 10.0};
    c.u = [](double x, double y) {
      return x * (1.0 - x) * y * (1.0 - y);
    };
    c.grad_u = [](double x, double y) -> std::array<double, 2> {
      return {(1.0 - 2.0 * x) * y * (1.0 - y),
              x * (1.0 - x) * (1.0 - 2.0 * y)};
    };
    c.f = [](double x, double y) {
      const double k = quadrant_k(x, y, 1.0, 10.0);
      return k * (2.0 * y * (1.0 - y) + 2.0 * x * (1.0 - x)) +
             x * (1.0 - x) * y * (1.0 - y);
    };
    c.lhs = [](double x, double y) {
      const double k = quadrant_k(x, y, 1.0, 10.0);
      const double uxx = -2.0 * y * (1.0 - y);
      const double uyy = -2.0 * x * (1.0 - x);
      return -k * (uxx + uyy) + x * (1.0 - x) * y * (1.0 - y);
    };
  } else {
    throw invalid_input("manufactured: unknown case id '" + id + "'");
  }
  c.boundary_compatible = true;
  return c;
}

ConvergenceTable convergence_study(const ManufacturedCase& c,
                                   const PenaltyParams& params,
                                   const std::vector<int>& levels, int p,
                                   int threads) {
  if (levels.size() < 3) {
    throw invalid_input("convergence_study: need at least 3 levels");
  }
  std::vector<int> sorted = levels;
  std::sort(sorted.begin(), sorted.end());
  ConvergenceTable table;
  table.gated = (p != 1);
  if (p == 1) {
    std::fprintf(stderr,
                 "note: p = 1 is outside the p >= 2 range the stability "
                 "theory assumes; convergence gates are skipped for this "
                 "run\n");
  }
  for (int nx : sorted) {
    VbvpConfig cfg;
    cfg.nx = nx;
    cfg.ny = nx;
    cfg.degrees = {p};
    cfg.coefficient = c.k_spec;
    cfg.params = params;
    cfg.f = c.f;
    cfg.threads = threads;
    VbvpResult r = solve_vbvp(cfg);
    const ErrorReport err =
        error_norms(*r.u, c.u, c.grad_u, *r.coefficient, params);
    ConvergenceRow row;
    row.nx = nx;
    row.h = r.mesh->h;
    row.dofs = r.space->num_dofs();
    row.l2 = err.l2;
    row.h1 = err.broken_h1;
    row.triple = err.triple;
    if (!table.rows.empty()) {
      const ConvergenceRow& prev = table.rows.back();
      const double lh = std::log(prev.h / row.h);
      row.order_l2 = std::log(prev.l2 / row.l2) / lh;
      row.order_h1 = std::log(prev.h1 / row.h1) / lh;
    }
    table.rows.push_back(row);
  }
  return table;
}

namespace {

// Diagonal of the triple-norm Gram matrix: |||phi_k|||^2 per basis function
// (each basis function lives on one element, so no cross terms appear).
Eigen::VectorXd triple_norm_diag(const BrokenSpace& space,
                                 const CoefficientField& K,
                                 const PenaltyParams& params) {
  const Mesh& mesh = space.mesh();
  const double omega = params.omega(mesh.h, space.min_degree());
  const double tau = params.tau(mesh.h, space.min_degree());
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(space.num_dofs());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const detail::RowMat a = detail::local_star_gram(space, K, e);
    const detail::RowMat t = detail::local_flux_moments(space, K, e);
    Eigen::LLT<Eigen::MatrixXd> llt{Eigen::MatrixXd(a)};
    if (llt.info() != Eigen::Success) {
      throw internal_error("triple_norm_diag: local star Gram not SPD");
    }
    const Eigen::MatrixXd x = llt.solve(Eigen::MatrixXd(t));
    const int off = space.offset(e);
    for (int k = 0; k < space.block_size(e); ++k) {
      diag[off + k] = a(k, k) + omega * t.col(k).dot(x.col(k));
    }
  }
  if (tau != 0.0) {
    for (const InteriorFace& f : mesh.interior_faces) {
      const detail::TraceTable to = detail::trace_table(
          space, K, f.owner, f.owner_edge, f.normal[0], f.normal[1]);
      const detail::TraceTable tn = detail::trace_table(
          space, K, f.neighbor, f.neighbor_edge, f.normal[0], f.normal[1]);
      auto add = [&](const detail::TraceTable& t, int element) {
        const int off = space.offset(element);
        for (int q = 0; q < t.nq; ++q) {
          const double w = t.wq[static_cast<std::size_t>(q)];
          const double* flux = &t.flux[static_cast<std::size_t>(q) * t.nb];
          for (int k = 0; k < t.nb; ++k) {
            diag[off + k] += tau * w * flux[k] * flux[k];
          }
        }
      };
      add(to, f.owner);
      add(tn, f.neighbor);
    }
  }
  return diag;
}

} // namespace

double consistency_residual(const ManufacturedCase& c, const BrokenSpace& space,
                            const CoefficientField& K,
                            const PenaltyParams& params, int quad_boost) {
  params.validate();
  const Mesh& mesh = space.mesh();
  const double tau = params.tau(mesh.h, space.min_degree());
  const QuadratureRule1D line = gauss_legendre(space.quad_order() + quad_boost);
  const Quadrature2D rule = tensor_rule(line);
  std::map<int, ElementTables> vol;
  std::map<int, FaceTables> face;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const int p = space.degree(e);
    if (!vol.count(p)) {
      vol.emplace(p, tabulate_volume(p, rule));
      face.emplace(p, tabulate_faces(p, line));
    }
  }

  Eigen::VectorXd r = Eigen::VectorXd::Zero(space.num_dofs());

  // volume terms int_E (K grad u . grad v + u v) at the elevated rule; the
  // load is subtracted at the end through the space's own quadrature (the
  // exact vector the solver assembles), so the residual measures the
  // identity against the implemented system rather than an idealized one.
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.elements[static_cast<std::size_t>(e)];
    const ElementTables& tab = vol.at(space.degree(e));
    const double detj = el.hx() * el.hy() / 4.0;
    const double sx = 2.0 / el.hx(), sy = 2.0 / el.hy();
    double* out = r.data() + space.offset(e);
    for (int q = 0; q < tab.nq; ++q) {
      const double x =
          el.x0 + (rule.xi[static_cast<std::size_t>(q)] + 1.0) * el.hx() / 2.0;
      const double y =
          el.y0 + (rule.eta[static_cast<std::size_t>(q)] + 1.0) * el.hy() / 2.0;
      const double w = rule.w[static_cast<std::size_t>(q)] * detj;
      const double kq = K.value(x, y, e);
      const double uv = c.u(x, y);
      const std::array<double, 2> g = c.grad_u(x, y);
      const std::size_t row = static_cast<std::size_t>(q) * tab.nb;
      kernels::axpy(w * kq * g[0] * sx, &tab.dxi[row], out,
                    static_cast<std::size_t>(tab.nb));
      kernels::axpy(w * kq * g[1] * sy, &tab.deta[row], out,
                    static_cast<std::size_t>(tab.nb));
      kernels::axpy(w * uv, &tab.phi[row], out,
                    static_cast<std::size_t>(tab.nb));
    }
  }

  // element-boundary terms: -int_{dE} (v K grad u . mu - u K grad v . mu)
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.elements[static_cast<std::size_t>(e)];
    const FaceTables& ft = face.at(space.degree(e));
    const double sx = 2.0 / el.hx(), sy = 2.0 / el.hy();
    double* out = r.data() + space.offset(e);
    for (int edge = 0; edge < 4; ++edge) {
      const detail::EdgeGeom g = detail::edge_geom(el, edge);
      for (int q = 0; q < line.n; ++q) {
        const double t = (line.points[static_cast<std::size_t>(q)] + 1.0) / 2.0;
        const double x = g.x0 + t * (g.x1 - g.x0);
        const double y = g.y0 + t * (g.y1 - g.y0);
        const double w =
            line.weights[static_cast<std::size_t>(q)] * g.length / 2.0;
        const double kq = K.value(x, y, e);
        const double uv = c.u(x, y);
        const std::array<double, 2> gu = c.grad_u(x, y);
        const double flux_u = kq * (gu[0] * g.nx + gu[1] * g.ny);
        const std::size_t row = static_cast<std::size_t>(q) * ft.nb;
        const std::size_t eg = static_cast<std::size_t>(edge);
        for (int i = 0; i < ft.nb; ++i) {
          const double flux_i =
              kq * (sx * ft.dxi[eg][row + static_cast<std::size_t>(i)] * g.nx +
                    sy * ft.deta[eg][row + static_cast<std::size_t>(i)] * g.ny);
          out[i] += w * (-ft.phi[eg][row + static_cast<std::size_t>(i)] * flux_u +
                         uv * flux_i);
        }
      }
    }
  }

  // interface terms: +int (<v>[K grad u . n] - <u>[K grad v . n]) + penalty
  for (const InteriorFace& f : mesh.interior_faces) {
    const FaceTables& fo = face.at(space.degree(f.owner));
    const FaceTables& fn = face.at(space.degree(f.neighbor));
    const Element& eo = mesh.elements[static_cast<std::size_t>(f.owner)];
    const Element& en = mesh.elements[static_cast<std::size_t>(f.neighbor)];
    for (int q = 0; q < line.n; ++q) {
      const double t = (line.points[static_cast<std::size_t>(q)] + 1.0) / 2.0;
      const double x = f.x0 + t * (f.x1 - f.x0);
      const double y = f.y0 + t * (f.y1 - f.y0);
      const double w =
          line.weights[static_cast<std::size_t>(q)] * f.length / 2.0;
      const double ko = K.value(x, y, f.owner);
      const double kn = K.value(x, y, f.neighbor);
      const double uv = c.u(x, y);
      const std::array<double, 2> gu = c.grad_u(x, y);
      const double gun = gu[0] * f.normal[0] + gu[1] * f.normal[1];
      const double jump_flux_u = ko * gun - kn * gun;
      auto side = [&](const FaceTables& ft, const Element& el, int element,
                      int edge, double sign) {
        const double sx = 2.0 / el.hx(), sy = 2.0 / el.hy();
        const double kq = K.value(x, y, element);
        const std::size_t row = static_cast<std::size_t>(q) * ft.nb;
        const std::size_t eg = static_cast<std::size_t>(edge);
        double* out = r.data() + space.offset(element);
        for (int i = 0; i < ft.nb; ++i) {
          const double flux_i =
              kq *
              (sx * ft.dxi[eg][row + static_cast<std::size_t>(i)] * f.normal[0] +
               sy * ft.deta[eg][row + static_cast<std::size_t>(i)] * f.normal[1]);
          const double phi_i = ft.phi[eg][row + static_cast<std::size_t>(i)];
          out[i] += w * (0.5 * phi_i * jump_flux_u - uv * sign * flux_i +
                         tau * jump_flux_u * sign * flux_i);
        }
      };
      side(fo, eo, f.owner, f.owner_edge, 1.0);
      side(fn, en, f.neighbor, f.neighbor_edge, -1.0);
    }
  }

  r -= assemble_rhs(space, c.f);

  const Eigen::VectorXd diag = triple_norm_diag(space, K, params);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    worst = std::max(worst, std::abs(r[i]) / std::sqrt(diag[i]));
  }
  return worst;
}

ConservationReport
conservation_check(const DGFunction& u_h,
                   const std::function<double(double, double)>& f,
                   const CoefficientField& K) {
  const BrokenSpace& space = *u_h.space;
  const Mesh& mesh = space.mesh();
  const Quadrature2D& rule = space.quad();
  ConservationReport rep;
  rep.residuals.assign(static_cast<std::size_t>(mesh.num_elements()), 0.0);
  double f_sq = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.elements[static_cast<std::size_t>(e)];
    const ElementTables& tab = space.tables(space.degree(e));
    const double detj = el.hx() * el.hy() / 4.0;
    const double* c = u_h.coeffs.data() + space.offset(e);
    double acc = 0.0;
    for (int q = 0; q < tab.nq; ++q) {
      const double x =
          el.x0 + (rule.xi[static_cast<std::size_t>(q)] + 1.0) * el.hx() / 2.0;
      const double y =
          el.y0 + (rule.eta[static_cast<std::size_t>(q)] + 1.0) * el.hy() / 2.0;
      const double w = rule.w[static_cast<std::size_t>(q)] * detj;
      const double fv = f(x, y);
      const double uv = kernels::dot(
          c, &tab.phi[static_cast<std::size_t>(q) * tab.nb],
          static_cast<std::size_t>(tab.nb));
      acc += w * (fv - uv);
      f_sq += w * fv * fv;
    }
    rep.residuals[static_cast<std::size_t>(e)] = acc;
  }
  for (const InteriorFace& fc : mesh.interior_faces) {
    const detail::TraceTable to = detail::trace_table(
        space, K, fc.owner, fc.owner_edge, fc.normal[0], fc.normal[1]);
    const detail::TraceTable tn = detail::trace_table(
        space, K, fc.neighbor, fc.neighbor_edge, fc.normal[0], fc.normal[1]);
    const double* co = u_h.coeffs.data() + space.offset(fc.owner);
    const double* cn = u_h.coeffs.data() + space.offset(fc.neighbor);
    double avg_int = 0.0;
    for (int q = 0; q < to.nq; ++q) {
      const double fo = kernels::dot(
          co, &to.flux[static_cast<std::size_t>(q) * to.nb],
          static_cast<std::size_t>(to.nb));
      const double fn = kernels::dot(
          cn, &tn.flux[static_cast<std::size_t>(q) * tn.nb],
          static_cast<std::size_t>(tn.nb));
      avg_int += to.wq[static_cast<std::size_t>(q)] * 0.5 * (fo + fn);
    }
    // owner's outward normal is +n, neighbor's is -n
    rep.residuals[static_cast<std::size_t>(fc.owner)] += avg_int;
    rep.residuals[static_cast<std::size_t>(fc.neighbor)] -= avg_int;
  }
  for (const BoundaryFace& fc : mesh.boundary_faces) {
    const detail::TraceTable t = detail::trace_table(
        space, K, fc.element, fc.edge, fc.normal[0], fc.normal[1]);
    const double* c = u_h.coeffs.data() + space.offset(fc.element);
    double own = 0.0;
    for (int q = 0; q < t.nq; ++q) {
      own += t.wq[static_cast<std::size_t>(q)] *
             kernels::dot(c, &t.flux[static_cast<std::size_t>(q) * t.nb],
                          static_cast<std::size_t>(t.nb));
    }
    rep.residuals[static_cast<std::size_t>(fc.element)] += own;
  }
  rep.f_l2 = std::sqrt(std::max(0.0, f_sq));
  for (double v : rep.residuals) {
    rep.max_abs = std::max(rep.max_abs, std::abs(v));
    rep.global_sum += v;
  }
  return rep;
}

StabilityReport
stability_probe(const ManufacturedCase& c, const PenaltyParams& params, int nx,
                int ny, int p,
                const std::function<double(double, double)>& delta_f,
                int threads) {
  params.validate();
  const Mesh mesh = build_rect_mesh({0.0, 0.0, 1.0, 1.0}, nx, ny);
  const BrokenSpace space = BrokenSpace::uniform(mesh, p);
  const CoefficientField k = make_coefficient(space, c.k_spec);
  AssembledSystem sys = assemble_system(space, k, params, c.f, threads);
  const DGFunction u0 = solve_linear(space, sys).first;
  AssembledSystem sys2 = sys;
  sys2.rhs = assemble_rhs(space, [&](double x, double y) {
    return c.f(x, y) + delta_f(x, y);
  });
  const DGFunction u1 = solve_linear(space, sys2).first;
  DGFunction du(space, Eigen::VectorXd(u1.coeffs - u0.coeffs));

  StabilityReport out;
  out.delta_triple = triple_norm(du, k, params);
  // ||delta f|| by the space quadrature (matches the discrete duality bound)
  double df_sq = 0.0;
  const Quadrature2D& rule = space.quad();
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.elements[static_cast<std::size_t>(e)];
    const double detj = el.hx() * el.hy() / 4.0;
    for (std::size_t q = 0; q < rule.w.size(); ++q) {
      const double x = el.x0 + (rule.xi[q] + 1.0) * el.hx() / 2.0;
      const double y = el.y0 + (rule.eta[q] + 1.0) * el.hy() / 2.0;
      const double dv = delta_f(x, y);
      df_sq += rule.w[q] * detj * dv * dv;
    }
  }
  out.delta_f_l2 = std::sqrt(std::max(0.0, df_sq));
  const Eigen::MatrixXd g = build_gram(space, k, params, threads);
  out.gamma_h = measure_constants(sys.B, g, sys.fingerprint).gamma_h;
  if (out.delta_f_l2 == 0.0) {
    out.ratio = 0.0;
    out.within = (out.delta_triple == 0.0);
  } else {
    out.ratio = out.delta_triple / out.delta_f_l2;
    out.within = out.delta_triple <=
                 (1.0 / out.gamma_h) * out.delta_f_l2 * (1.0 + 1e-6);
  }
  return out;
}

namespace {

// 1D Lagrange basis on p+1 equispaced nodes in [-1, 1].
void lagrange_eval(int p, double x, double* vals, double* ders) {
  const int n = p + 1;
  std::vector<double> nodes(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    nodes[static_cast<std::size_t>(a)] = -1.0 + 2.0 * a / p;
  }
  for (int a = 0; a < n; ++a) {
    double v = 1.0;
    for (int m = 0; m < n; ++m) {
      if (m != a) {
        v *= (x - nodes[static_cast<std::size_t>(m)]) /
             (nodes[static_cast<std::size_t>(a)] -
              nodes[static_cast<std::size_t>(m)]);
      }
    }
    vals[a] = v;
    double d = 0.0;
    for (int m = 0; m < n; ++m) {
      if (m == a) {
        continue;
      }
      double term = 1.0 / (nodes[static_cast<std::size_t>(a)] -
                           nodes[static_cast<std::size_t>(m)]);
      for (int l = 0; l < n; ++l) {
        if (l != a && l != m) {
          term *= (x - nodes[static_cast<std::size_t>(l)]) /
                  (nodes[static_cast<std::size_t>(a)] -
                   nodes[static_cast<std::size_t>(l)]);
        }
      }
      d += term;
    }
    ders[a] = d;
  }
}

} // namespace

CgReport solve_cg_reference(const ManufacturedCase& c, const Mesh& mesh,
                            int p) {
  if (p < 1) {
    throw invalid_input("solve_cg_reference: degree must be >= 1");
  }
  // Coefficient with certified bounds, reusing the DG machinery.
  const BrokenSpace probe = BrokenSpace::uniform(mesh, p);
  const CoefficientField k = make_coefficient(probe, c.k_spec);

  const int nx = mesh.nx, ny = mesh.ny;
  const int gx_n = nx * p + 1, gy_n = ny * p + 1;
  auto gid = [gx_n](int gx, int gy) { return gy * gx_n + gx; };
  auto on_boundary = [&](int gx, int gy) {
    return gx == 0 || gx == gx_n - 1 || gy == 0 || gy == gy_n - 1;
  };
  std::vector<int> free_id(static_cast<std::size_t>(gx_n) * gy_n, -1);
  int nfree = 0;
  for (int gy = 0; gy < gy_n; ++gy) {
    for (int gx = 0; gx < gx_n; ++gx) {
      if (!on_boundary(gx, gy)) {
        free_id[static_cast<std::size_t>(gid(gx, gy))] = nfree++;
      }
    }
  }

  // tensor Lagrange tabulation at a Gauss rule of order p + 3
  const QuadratureRule1D line = gauss_legendre(p + 3);
  const int n1 = p + 1, nq1 = line.n;
  std::vector<double> lv(static_cast<std::size_t>(nq1) * n1),
      ld(static_cast<std::size_t>(nq1) * n1);
  for (int q = 0; q < nq1; ++q) {
    lagrange_eval(p, line.points[static_cast<std::size_t>(q)],
                  &lv[static_cast<std::size_t>(q) * n1],
                  &ld[static_cast<std::size_t>(q) * n1]);
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nfree, nfree);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nfree);
  const int nb = n1 * n1;
  std::vector<int> dofs(static_cast<std::size_t>(nb));
  for (const Element& el : mesh.elements) {
    const double detj = el.hx() * el.hy() / 4.0;
    const double sx = 2.0 / el.hx(), sy = 2.0 / el.hy();
    for (int b = 0; b < n1; ++b) {
      for (int aa = 0; aa < n1; ++aa) {
        dofs[static_cast<std::size_t>(b * n1 + aa)] =
            free_id[static_cast<std::size_t>(
                gid(el.ix * p + aa, el.iy * p + b))];
      }
    }
    const int e = mesh.element_index(el.ix, el.iy);
    for (int qy = 0; qy < nq1; ++qy) {
      for (int qx = 0; qx < nq1; ++qx) {
        const double x =
            el.x0 + (line.points[static_cast<std::size_t>(qx)] + 1.0) *
                        el.hx() / 2.0;
        const double y =
            el.y0 + (line.points[static_cast<std::size_t>(qy)] + 1.0) *
                        el.hy() / 2.0;
        const double w = line.weights[static_cast<std::size_t>(qx)] *
                         line.weights[static_cast<std::size_t>(qy)] * detj;
        const double kq = k.value(x, y, e);
        const double fv = c.f(x, y);
        for (int i = 0; i < nb; ++i) {
          const int gi = dofs[static_cast<std::size_t>(i)];
          if (gi < 0) {
            continue;
          }
          const double vi = lv[static_cast<std::size_t>(qx) * n1 + i % n1] *
                            lv[static_cast<std::size_t>(qy) * n1 + i / n1];
          const double gxi = sx *
                             ld[static_cast<std::size_t>(qx) * n1 + i % n1] *
                             lv[static_cast<std::size_t>(qy) * n1 + i / n1];
          const double gyi = sy *
                             lv[static_cast<std::size_t>(qx) * n1 + i % n1] *
                             ld[static_cast<std::size_t>(qy) * n1 + i / n1];
          rhs[gi] += w * fv * vi;
          for (int j = 0; j < nb; ++j) {
            const int gj = dofs[static_cast<std::size_t>(j)];
            if (gj < 0) {
              continue;
            }
            const double vj = lv[static_cast<std::size_t>(qx) * n1 + j % n1] *
                              lv[static_cast<std::size_t>(qy) * n1 + j / n1];
            const double gxj = sx *
                               ld[static_cast<std::size_t>(qx) * n1 + j % n1] *
                               lv[static_cast<std::size_t>(qy) * n1 + j / n1];
            const double gyj = sy *
                               lv[static_cast<std::size_t>(qx) * n1 + j % n1] *
                               ld[static_cast<std::size_t>(qy) * n1 + j / n1];
            a(gi, gj) += w * (kq * (gxi * gxj + gyi * gyj) + vi * vj);
          }
        }
      }
    }
  }

  CgReport rep;
  rep.dofs = nfree;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  rep.spd = (llt.info() == Eigen::Success);
  if (!rep.spd) {
    throw internal_error("solve_cg_reference: stiffness+mass matrix not SPD");
  }
  const Eigen::VectorXd w = llt.solve(rhs);

  // errors at an elevated rule
  const QuadratureRule1D eline = gauss_legendre(p + 5);
  const int enq = eline.n;
  std::vector<double> elv(static_cast<std::size_t>(enq) * n1),
      eld(static_cast<std::size_t>(enq) * n1);
  for (int q = 0; q < enq; ++q) {
    lagrange_eval(p, eline.points[static_cast<std::size_t>(q)],
                  &elv[static_cast<std::size_t>(q) * n1],
                  &eld[static_cast<std::size_t>(q) * n1]);
  }
  double l2 = 0.0, h1 = 0.0;
  for (const Element& el : mesh.elements) {
    const double detj = el.hx() * el.hy() / 4.0;
    const double sx = 2.0 / el.hx(), sy = 2.0 / el.hy();
    for (int b = 0; b < n1; ++b) {
      for (int aa = 0; aa < n1; ++aa) {
        dofs[static_cast<std::size_t>(b * n1 + aa)] =
            free_id[static_cast<std::size_t>(
                gid(el.ix * p + aa, el.iy * p + b))];
      }
    }
    for (int qy = 0; qy < enq; ++qy) {
      for (int qx = 0; qx < enq; ++qx) {
        const double x =
            el.x0 + (eline.points[static_cast<std::size_t>(qx)] + 1.0) *
                        el.hx() / 2.0;
        const double y =
            el.y0 + (eline.points[static_cast<std::size_t>(qy)] + 1.0) *
                        el.hy() / 2.0;
        const double wq = eline.weights[static_cast<std::size_t>(qx)] *
                          eline.weights[static_cast<std::size_t>(qy)] * detj;
        double wh = 0.0, whx = 0.0, why = 0.0;
        for (int i = 0; i < nb; ++i) {
          const int gi = dofs[static_cast<std::size_t>(i)];
          const double ci = (gi >= 0) ? w[gi] : 0.0; // boundary nodes are 0
          if (ci == 0.0) {
            continue;
          }
          wh += ci * elv[static_cast<std::size_t>(qx) * n1 + i % n1] *
                elv[static_cast<std::size_t>(qy) * n1 + i / n1];
          whx += ci * sx * eld[static_cast<std::size_t>(qx) * n1 + i % n1] *
                 elv[static_cast<std::size_t>(qy) * n1 + i / n1];
          why += ci * sy * elv[static_cast<std::size_t>(qx) * n1 + i % n1] *
                 eld[static_cast<std::size_t>(qy) * n1 + i / n1];
        }
        const double du = wh - c.u(x, y);
        const std::array<double, 2> ge = c.grad_u(x, y);
        const double dx = whx - ge[0], dy = why - ge[1];
        l2 += wq * du * du;
        h1 += wq * (du * du + dx * dx + dy * dy);
      }
    }
  }
  rep.l2 = std::sqrt(std::max(0.0, l2));
  rep.h1 = std::sqrt(std::max(0.0, h1));
  return rep;
}

} // namespace dgrd
