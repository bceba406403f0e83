// SPDX-License-Identifier: Apache-2.0

#include "dgrd/space.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "dgrd/common.hpp"

namespace dgrd {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre_pair(int n, double x, double& pn, double& dpn) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    pn = 1.0;
    dpn = 0.0;
    return;
  }
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  pn = p1;
  dpn = n * (x * p1 - p0) / (x * x - 1.0);
}

} // namespace

QuadratureRule1D gauss_legendre(int n) {
  if (n < 1) {
    throw invalid_input("gauss_legendre: need at least one point");
  }
  QuadratureRule1D rule;
  rule.n = n;
  rule.points.assign(static_cast<std::size_t>(n), 0.0);
  rule.weights.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int k = 0; k < half; ++k) {
    // Tricomi-type initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double pn = 0.0, dpn = 0.0;
    for (int it = 0; it < 100; ++it) {
      legendre_pair(n, x, pn, dpn);
      const double dx = pn / dpn;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        break;
      }
    }
    legendre_pair(n, x, pn, dpn);
    const double w = 2.0 / ((1.0 - x * x) * dpn * dpn);
    // Mirror so the rule is exactly symmetric about the origin.
    rule.points[static_cast<std::size_t>(n - 1 - k)] = x;
    rule.weights[static_cast<std::size_t>(n - 1 - k)] = w;
    rule.points[static_cast<std::size_t>(k)] = -x;
    rule.weights[static_cast<std::size_t>(k)] = w;
  }
  if (n % 2 == 1) {
    rule.points[static_cast<std::size_t>(half - 1)] = 0.0;
  }
  return rule;
}

Quadrature2D tensor_rule(const QuadratureRule1D& line) {
  Quadrature2D q;
  q.n1d = line.n;
  const std::size_t nq = static_cast<std::size_t>(line.n) * line.n;
  q.xi.reserve(nq);
  q.eta.reserve(nq);
  q.w.reserve(nq);
  for (int j = 0; j < line.n; ++j) {
    for (int i = 0; i < line.n; ++i) {
      q.xi.push_back(line.points[static_cast<std::size_t>(i)]);
      q.eta.push_back(line.points[static_cast<std::size_t>(j)]);
      q.w.push_back(line.weights[static_cast<std::size_t>(i)] *
                    line.weights[static_cast<std::size_t>(j)]);
    }
  }
  return q;
}

void legendre_values(int p, double x, double* vals, double* ders) {
  vals[0] = 1.0;
  ders[0] = 0.0;
  if (p == 0) {
    return;
  }
  vals[1] = x;
  ders[1] = 1.0;
  for (int n = 1; n < p; ++n) {
    vals[n + 1] = ((2.0 * n + 1.0) * x * vals[n] - n * vals[n - 1]) / (n + 1.0);
    ders[n + 1] = ders[n - 1] + (2.0 * n + 1.0) * vals[n];
  }
}

namespace {

// Tabulate the tensor basis of `degree` at one reference point.
void eval_tensor_basis(int degree, double xi, double eta, double* phi,
                       double* dxi, double* deta) {
  const int n1 = degree + 1;
  std::vector<double> px(static_cast<std::size_t>(n1)),
      dpx(static_cast<std::size_t>(n1)), py(static_cast<std::size_t>(n1)),
      dpy(static_cast<std::size_t>(n1));
  legendre_values(degree, xi, px.data(), dpx.data());
  legendre_values(degree, eta, py.data(), dpy.data());
  for (int b = 0; b < n1; ++b) {
    for (int a = 0; a < n1; ++a) {
      const int k = b * n1 + a;
      phi[k] = px[static_cast<std::size_t>(a)] * py[static_cast<std::size_t>(b)];
      dxi[k] = dpx[static_cast<std::size_t>(a)] * py[static_cast<std::size_t>(b)];
      deta[k] = px[static_cast<std::size_t>(a)] * dpy[static_cast<std::size_t>(b)];
    }
  }
}

} // namespace

ElementTables tabulate_volume(int degree, const Quadrature2D& rule) {
  ElementTables t;
  t.degree = degree;
  t.nb = (degree + 1) * (degree + 1);
  t.nq = static_cast<int>(rule.w.size());
  const std::size_t total = static_cast<std::size_t>(t.nb) * t.nq;
  t.phi.resize(total);
  t.dxi.resize(total);
  t.deta.resize(total);
  for (int q = 0; q < t.nq; ++q) {
    const std::size_t row = static_cast<std::size_t>(q) * t.nb;
    eval_tensor_basis(degree, rule.xi[static_cast<std::size_t>(q)],
                      rule.eta[static_cast<std::size_t>(q)], &t.phi[row],
                      &t.dxi[row], &t.deta[row]);
  }
  return t;
}

FaceTables tabulate_faces(int degree, const QuadratureRule1D& rule) {
  FaceTables t;
  t.degree = degree;
  t.nb = (degree + 1) * (degree + 1);
  t.nq = rule.n;
  const std::size_t total = static_cast<std::size_t>(t.nb) * t.nq;
  for (int e = 0; e < 4; ++e) {
    t.phi[static_cast<std::size_t>(e)].resize(total);
    t.dxi[static_cast<std::size_t>(e)].resize(total);
    t.deta[static_cast<std::size_t>(e)].resize(total);
  }
  for (int q = 0; q < t.nq; ++q) {
    const double s = rule.points[static_cast<std::size_t>(q)];
    const std::size_t row = static_cast<std::size_t>(q) * t.nb;
    // The edge parameter follows the increasing global coordinate (y on
    // vertical edges, x on horizontal ones).
    const struct {
      double xi, eta;
    } pts[4] = {{-1.0, s}, {1.0, s}, {s, -1.0}, {s, 1.0}};
    for (int e = 0; e < 4; ++e) {
      auto& te = t;
      eval_tensor_basis(degree, pts[e].xi, pts[e].eta,
                        &te.phi[static_cast<std::size_t>(e)][row],
                        &te.dxi[static_cast<std::size_t>(e)][row],
                        &te.deta[static_cast<std::size_t>(e)][row]);
    }
  }
  return t;
}

BrokenSpace::BrokenSpace(const Mesh& mesh, std::vector<int> degrees,
                         int quad_order)
    : mesh_(&mesh), degrees_(std::move(degrees)) {
  if (degrees_.size() != static_cast<std::size_t>(mesh.num_elements())) {
    throw invalid_input("BrokenSpace: one degree per element required");
  }
  p_min_ = degrees_[0];
  p_max_ = degrees_[0];
  for (int p : degrees_) {
    if (p < 1) {
      throw invalid_input("BrokenSpace: polynomial degrees must be >= 1");
    }
    p_min_ = std::min(p_min_, p);
    p_max_ = std::max(p_max_, p);
  }
  if (p_min_ == 1) {
    std::fprintf(stderr,
                 "note: minimum polynomial degree is 1; the stability theory "
                 "assumes p >= 2 when the jump penalty vanishes\n");
  }
  offsets_.resize(degrees_.size());
  for (std::size_t e = 0; e < degrees_.size(); ++e) {
    offsets_[e] = ndofs_;
    ndofs_ += (degrees_[e] + 1) * (degrees_[e] + 1);
  }
  q_ = quad_order > 0 ? quad_order : p_max_ + 2;
  line_ = gauss_legendre(q_);
  quad2d_ = tensor_rule(line_);
  for (int p : degrees_) {
    if (!vol_tables_.count(p)) {
      vol_tables_.emplace(p, tabulate_volume(p, quad2d_));
      face_tables_.emplace(p, tabulate_faces(p, line_));
    }
  }
}

BrokenSpace BrokenSpace::uniform(const Mesh& mesh, int degree, int quad_order) {
  return BrokenSpace(
      mesh, std::vector<int>(static_cast<std::size_t>(mesh.num_elements()),
                             degree),
      quad_order);
}

const ElementTables& BrokenSpace::tables(int degree) const {
  auto it = vol_tables_.find(degree);
  if (it == vol_tables_.end()) {
    throw internal_error("BrokenSpace: no tables for requested degree");
  }
  return it->second;
}

const FaceTables& BrokenSpace::face_tables(int degree) const {
  auto it = face_tables_.find(degree);
  if (it == face_tables_.end()) {
    throw internal_error("BrokenSpace: no face tables for requested degree");
  }
  return it->second;
}

void BrokenSpace::eval_basis(int element, double xi, double eta, double* values,
                             double* grad_x, double* grad_y) const {
  const int p = degree(element);
  const int nb = (p + 1) * (p + 1);
  std::vector<double> dxi(static_cast<std::size_t>(nb)),
      deta(static_cast<std::size_t>(nb));
  eval_tensor_basis(p, xi, eta, values, dxi.data(), deta.data());
  const Element& el = mesh_->elements[static_cast<std::size_t>(element)];
  const double sx = 2.0 / el.hx(), sy = 2.0 / el.hy();
  for (int k = 0; k < nb; ++k) {
    grad_x[k] = sx * dxi[static_cast<std::size_t>(k)];
    grad_y[k] = sy * deta[static_cast<std::size_t>(k)];
  }
}

std::uint64_t BrokenSpace::fingerprint() const {
  std::uint64_t h = mesh_->fingerprint();
  h = fnv1a(static_cast<std::uint64_t>(q_), h);
  for (int p : degrees_) {
    h = fnv1a(static_cast<std::uint64_t>(p), h);
  }
  return h;
}

DGFunction::DGFunction(const BrokenSpace& s, Eigen::VectorXd c)
    : space(&s), coeffs(std::move(c)) {
  if (coeffs.size() != space->num_dofs()) {
    throw invalid_input("DGFunction: coefficient size mismatch");
  }
}

double DGFunction::eval_ref(int element, double xi, double eta) const {
  const int nb = space->block_size(element);
  std::vector<double> phi(static_cast<std::size_t>(nb)),
      gx(static_cast<std::size_t>(nb)), gy(static_cast<std::size_t>(nb));
  space->eval_basis(element, xi, eta, phi.data(), gx.data(), gy.data());
  double v = 0.0;
  const int off = space->offset(element);
  for (int k = 0; k < nb; ++k) {
    v += coeffs[off + k] * phi[static_cast<std::size_t>(k)];
  }
  return v;
}

double DGFunction::eval(double x, double y) const {
  const int e = space->mesh().locate(x, y);
  const Element& el = space->mesh().elements[static_cast<std::size_t>(e)];
  const double xi = 2.0 * (x - el.x0) / el.hx() - 1.0;
  const double eta = 2.0 * (y - el.y0) / el.hy() - 1.0;
  return eval_ref(e, xi, eta);
}

std::array<double, 2> DGFunction::grad_ref(int element, double xi,
                                           double eta) const {
  const int nb = space->block_size(element);
  std::vector<double> phi(static_cast<std::size_t>(nb)),
      gx(static_cast<std::size_t>(nb)), gy(static_cast<std::size_t>(nb));
  space->eval_basis(element, xi, eta, phi.data(), gx.data(), gy.data());
  double dx = 0.0, dy = 0.0;
  const int off = space->offset(element);
  for (int k = 0; k < nb; ++k) {
    dx += coeffs[off + k] * gx[static_cast<std::size_t>(k)];
    dy += coeffs[off + k] * gy[static_cast<std::size_t>(k)];
  }
  return {dx, dy};
}

DGFunction project_l2(const BrokenSpace& space,
                      const std::function<double(double, double)>& f) {
  DGFunction out(space);
  const Mesh& mesh = space.mesh();
  const Quadrature2D& rule = space.quad();
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.elements[static_cast<std::size_t>(e)];
    const ElementTables& tab = space.tables(space.degree(e));
    const double detj = el.hx() * el.hy() / 4.0;
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(tab.nb, tab.nb);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(tab.nb);
    for (int q = 0; q < tab.nq; ++q) {
      const double x =
          el.x0 + (rule.xi[static_cast<std::size_t>(q)] + 1.0) * el.hx() / 2.0;
      const double y =
          el.y0 + (rule.eta[static_cast<std::size_t>(q)] + 1.0) * el.hy() / 2.0;
      const double wq = rule.w[static_cast<std::size_t>(q)] * detj;
      const double fq = f(x, y);
      const double* phi = &tab.phi[static_cast<std::size_t>(q) * tab.nb];
      for (int i = 0; i < tab.nb; ++i) {
        rhs[i] += wq * fq * phi[i];
        for (int j = 0; j <= i; ++j) {
          mass(i, j) += wq * phi[i] * phi[j];
        }
      }
    }
    mass = mass.selfadjointView<Eigen::Lower>();
    const Eigen::VectorXd c = Eigen::LLT<Eigen::MatrixXd>(mass).solve(rhs);
    out.coeffs.segment(space.offset(e), tab.nb) = c;
  }
  return out;
}

} // namespace dgrd
