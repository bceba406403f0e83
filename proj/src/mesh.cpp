// SPDX-License-Identifier: Apache-2.0
#include "dgrd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dgrd {

double Element::diameter() const { return std::hypot(hx(), hy()); }

int Mesh::locate(double x, double y) const {
  const double tol = 1e-12 * std::max(domain.width(), domain.height());
  if (x < domain.xmin - tol || x > domain.xmax + tol || y < domain.ymin - tol ||
      y > domain.ymax + tol)
    throw invalid_input("Mesh::locate: point outside domain");
  const double rx = (x - domain.xmin) / domain.width() * nx;
  const double ry = (y - domain.ymin) / domain.height() * ny;
  // floor puts points on an interior grid line into the higher cell; shift
  // them back so shared boundaries resolve to the lower-index element.
  int ix = static_cast<int>(std::floor(rx));
  int iy = static_cast<int>(std::floor(ry));
  if (ix > 0 && rx - ix < 1e-12 * nx) --ix;
  if (iy > 0 && ry - iy < 1e-12 * ny) --iy;
  ix = std::clamp(ix, 0, nx - 1);
  iy = std::clamp(iy, 0, ny - 1);
  return element_index(ix, iy);
}

std::uint64_t Mesh::fingerprint() const {
  std::uint64_t f = fnv1a(std::string("mesh"));
  f = fnv1a(domain.xmin, f);
  f = fnv1a(domain.ymin, f);
  f = fnv1a(domain.xmax, f);
  f = fnv1a(domain.ymax, f);
  f = fnv1a(static_cast<std::uint64_t>(nx), f);
  f = fnv1a(static_cast<std::uint64_t>(ny), f);
  return f;
}

Mesh build_rect_mesh(const Rect& domain, int nx, int ny) {
  if (nx < 1 || ny < 1)
    throw invalid_input("build_rect_mesh: nx and ny must be >= 1");
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0))
    throw invalid_input("build_rect_mesh: degenerate domain (zero width or height)");

  Mesh m;
  m.domain = domain;
  m.nx = nx;
  m.ny = ny;
  const double dx = domain.width() / nx;
  const double dy = domain.height() / ny;

  m.elements.reserve(static_cast<std::size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      Element e;
      e.ix = ix;
      e.iy = iy;
      e.x0 = domain.xmin + ix * dx;
      e.x1 = (ix + 1 == nx) ? domain.xmax : domain.xmin + (ix + 1) * dx;
      e.y0 = domain.ymin + iy * dy;
      e.y1 = (iy + 1 == ny) ? domain.ymax : domain.ymin + (iy + 1) * dy;
      m.elements.push_back(e);
    }

  // Interior faces. Owner is the higher row-major index, so for a vertical
  // face the owner is the right element and n = (-1, 0); for a horizontal
  // face the owner is the upper element and n = (0, -1).
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix + 1 < nx; ++ix) {
      const Element& left = m.elements[m.element_index(ix, iy)];
      InteriorFace f;
      f.owner = m.element_index(ix + 1, iy);
      f.neighbor = m.element_index(ix, iy);
      f.normal = {-1.0, 0.0};
      f.x0 = f.x1 = left.x1;
      f.y0 = left.y0;
      f.y1 = left.y1;
      f.length = left.hy();
      f.owner_edge = kLeft;
      f.neighbor_edge = kRight;
      m.interior_faces.push_back(f);
    }
  for (int iy = 0; iy + 1 < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const Element& bottom = m.elements[m.element_index(ix, iy)];
      InteriorFace f;
      f.owner = m.element_index(ix, iy + 1);
      f.neighbor = m.element_index(ix, iy);
      f.normal = {0.0, -1.0};
      f.y0 = f.y1 = bottom.y1;
      f.x0 = bottom.x0;
      f.x1 = bottom.x1;
      f.length = bottom.hx();
      f.owner_edge = kBottom;
      f.neighbor_edge = kTop;
      m.interior_faces.push_back(f);
    }

  auto add_boundary = [&m](int e, int edge) {
    const Element& el = m.elements[e];
    BoundaryFace f;
    f.element = e;
    f.edge = edge;
    switch (edge) {
      case kLeft:
        f.normal = {-1.0, 0.0};
        f.x0 = f.x1 = el.x0;
        f.y0 = el.y0;
        f.y1 = el.y1;
        f.length = el.hy();
        break;
      case kRight:
        f.normal = {1.0, 0.0};
        f.x0 = f.x1 = el.x1;
        f.y0 = el.y0;
        f.y1 = el.y1;
        f.length = el.hy();
        break;
      case kBottom:
        f.normal = {0.0, -1.0};
        f.y0 = f.y1 = el.y0;
        f.x0 = el.x0;
        f.x1 = el.x1;
        f.length = el.hx();
        break;
      case kTop:
        f.normal = {0.0, 1.0};
        f.y0 = f.y1 = el.y1;
        f.x0 = el.x0;
        f.x1 = el.x1;
        f.length = el.hx();
        break;
    }
    m.boundary_faces.push_back(f);
  };

  for (int iy = 0; iy < ny; ++iy) {
    add_boundary(m.element_index(0, iy), kLeft);
    add_boundary(m.element_index(nx - 1, iy), kRight);
  }
  for (int ix = 0; ix < nx; ++ix) {
    add_boundary(m.element_index(ix, 0), kBottom);
    add_boundary(m.element_index(ix, ny - 1), kTop);
  }

  m.h = 0.0;
  m.h_min = std::numeric_limits<double>::max();
  for (const Element& e : m.elements) {
    m.h = std::max(m.h, e.diameter());
    m.h_min = std::min(m.h_min, e.diameter());
  }
  return m;
}

std::pair<double, double> mesh_metrics(const Mesh& mesh) {
  return {mesh.h, mesh.h_min};
}

std::string mesh_summary(const Mesh& mesh) {
  double len_int = 0.0, len_bnd = 0.0;
  for (const auto& f : mesh.interior_faces) len_int += f.length;
  for (const auto& f : mesh.boundary_faces) len_bnd += f.length;
  std::ostringstream os;
  os << "mesh: " << mesh.nx << " x " << mesh.ny << " on ["
     << format17(mesh.domain.xmin) << "," << format17(mesh.domain.xmax) << "] x ["
     << format17(mesh.domain.ymin) << "," << format17(mesh.domain.ymax) << "]\n"
     << "elements: " << mesh.num_elements() << "\n"
     << "interior_faces: " << mesh.interior_faces.size() << "\n"
     << "boundary_faces: " << mesh.boundary_faces.size() << "\n"
     << "h: " << format17(mesh.h) << "\n"
     << "h_min: " << format17(mesh.h_min) << "\n"
     << "interior_face_length: " << format17(len_int) << "\n"
     << "boundary_face_length: " << format17(len_bnd) << "\n";
  return os.str();
}

} // namespace dgrd
