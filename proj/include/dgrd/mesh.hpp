// SPDX-License-Identifier: Apache-2.0
//
// Structured rectangular partitions of a 2D box with fully resolved,
// oriented face topology. The mesh is immutable after construction and
// safe to share across threads.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "dgrd/common.hpp"

namespace dgrd {

struct Rect {
  double xmin = 0.0, ymin = 0.0, xmax = 1.0, ymax = 1.0;
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

/// Local edge ids of an axis-aligned element.
enum Edge : int { kLeft = 0, kRight = 1, kBottom = 2, kTop = 3 };

struct Element {
  double x0, y0, x1, y1; // axis-aligned bounds
  int ix, iy;            // structured grid coordinates
  double hx() const { return x1 - x0; }
  double hy() const { return y1 - y0; }
  double area() const { return hx() * hy(); }
  double diameter() const;
};

/// An interior face stores the owner/neighbor pair with owner > neighbor
/// and the unit normal pointing from the owner element into the neighbor.
/// The jump of a quantity v across the face is v|owner - v|neighbor.
struct InteriorFace {
  int owner;         // element index i (i > j)
  int neighbor;      // element index j
  std::array<double, 2> normal; // unit, from owner into neighbor
  double x0, y0, x1, y1;        // endpoints, sorted by increasing coordinate
  double length;
  int owner_edge;    // Edge of the owner this face lies on
  int neighbor_edge; // Edge of the neighbor
};

struct BoundaryFace {
  int element;
  std::array<double, 2> normal; // outward unit normal of the domain
  double x0, y0, x1, y1;
  double length;
  int edge; // Edge of the element
};

struct Mesh {
  Rect domain;
  int nx = 0, ny = 0;
  std::vector<Element> elements;          // row-major: index = iy*nx + ix
  std::vector<InteriorFace> interior_faces;
  std::vector<BoundaryFace> boundary_faces;
  double h = 0.0;     // max element diameter
  double h_min = 0.0; // min element diameter

  int num_elements() const { return static_cast<int>(elements.size()); }
  int element_index(int ix, int iy) const { return iy * nx + ix; }
  /// Element containing (x, y); points on element boundaries resolve to
  /// the lower-index element. Throws invalid_input outside the domain.
  int locate(double x, double y) const;
  std::uint64_t fingerprint() const;
};

/// Partition `domain` into nx*ny congruent rectangles.
/// Throws invalid_input for nx < 1, ny < 1 or a degenerate domain.
Mesh build_rect_mesh(const Rect& domain, int nx, int ny);

/// (h, h_min): max and min element diameter.
std::pair<double, double> mesh_metrics(const Mesh& mesh);

/// Plain-text summary (counts, h metrics, face-length totals).
std::string mesh_summary(const Mesh& mesh);

} // namespace dgrd
