// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <set>

#include "dgrd/common.hpp"
#include "dgrd/mesh.hpp"

using namespace dgrd;

TEST_SUITE("mesh") {

TEST_CASE("single-element unit square") {
  const Mesh m = build_rect_mesh({0, 0, 1, 1}, 1, 1);
  CHECK(m.num_elements() == 1);
  CHECK(m.interior_faces.empty());
  CHECK(m.boundary_faces.size() == 4);
  CHECK(m.h == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("2x2 unit square counts and mesh size") {
  const Mesh m = build_rect_mesh({0, 0, 1, 1}, 2, 2);
  CHECK(m.num_elements() == 4);
  CHECK(m.interior_faces.size() == 4);
  CHECK(m.boundary_faces.size() == 8);
  CHECK(m.h == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
  const auto [h, h_min] = mesh_metrics(m);
  CHECK(h == m.h);
  CHECK(h_min == m.h); // congruent elements
}

TEST_CASE("4x2 unit square face count and anisotropic diameter") {
  const Mesh m = build_rect_mesh({0, 0, 1, 1}, 4, 2);
  CHECK(m.num_elements() == 8);
  // brute-force count: 3 vertical interior lines x 2 rows + 4 columns x 1
  // horizontal interior line
  CHECK(m.interior_faces.size() == 10);
  CHECK(m.boundary_faces.size() == 12); // 2*nx + 2*ny
  CHECK(m.h == doctest::Approx(std::sqrt(5.0) / 4.0).epsilon(1e-15));
}

TEST_CASE("interior faces honor the owner > neighbor convention") {
  const Mesh m = build_rect_mesh({0, 0, 1, 1}, 3, 3);
  for (const InteriorFace& f : m.interior_faces) {
    CHECK(f.owner > f.neighbor);
    CHECK(f.owner < m.num_elements());
    CHECK(f.neighbor >= 0);
    const double nn = std::hypot(f.normal[0], f.normal[1]);
    CHECK(nn == 1.0); // exactly, for axis-aligned faces
    // the normal points from the owner into the neighbor
    const Element& eo = m.elements[static_cast<std::size_t>(f.owner)];
    const Element& en = m.elements[static_cast<std::size_t>(f.neighbor)];
    const double cox = (eo.x0 + eo.x1) / 2, coy = (eo.y0 + eo.y1) / 2;
    const double cnx = (en.x0 + en.x1) / 2, cny = (en.y0 + en.y1) / 2;
    CHECK((cnx - cox) * f.normal[0] + (cny - coy) * f.normal[1] > 0.0);
  }
}

TEST_CASE("each interior face is shared; boundary faces point outward") {
  const Mesh m = build_rect_mesh({0.5, -1.0, 2.5, 1.0}, 3, 2);
  std::set<std::pair<int, int>> pairs;
  for (const InteriorFace& f : m.interior_faces) {
    CHECK(pairs.insert({f.owner, f.neighbor}).second); // no duplicates
  }
  for (const BoundaryFace& f : m.boundary_faces) {
    const Element& e = m.elements[static_cast<std::size_t>(f.element)];
    const double cx = (e.x0 + e.x1) / 2, cy = (e.y0 + e.y1) / 2;
    const double mx = (f.x0 + f.x1) / 2, my = (f.y0 + f.y1) / 2;
    // outward: from element centroid toward the face midpoint
    CHECK((mx - cx) * f.normal[0] + (my - cy) * f.normal[1] > 0.0);
  }
}

TEST_CASE("face lengths sum to the closed-form totals") {
  const int nx = 4, ny = 3;
  const Mesh m = build_rect_mesh({0, 0, 1, 1}, nx, ny);
  double interior = 0.0, boundary = 0.0;
  for (const InteriorFace& f : m.interior_faces) {
    interior += f.length;
  }
  for (const BoundaryFace& f : m.boundary_faces) {
    boundary += f.length;
  }
  // (nx-1) full-height vertical lines + (ny-1) full-width horizontal lines
  CHECK(interior == doctest::Approx((nx - 1) * 1.0 + (ny - 1) * 1.0)
                        .epsilon(1e-14));
  CHECK(boundary == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("locate resolves points and tie-breaks to the lower index") {
  const Mesh m = build_rect_mesh({0, 0, 1, 1}, 2, 2);
  CHECK(m.locate(0.25, 0.25) == 0);
  CHECK(m.locate(0.75, 0.25) == 1);
  CHECK(m.locate(0.25, 0.75) == 2);
  CHECK(m.locate(0.75, 0.75) == 3);
  CHECK(m.locate(0.5, 0.25) == 0);  // interior grid line -> lower index
  CHECK(m.locate(0.25, 0.5) == 0);
  CHECK(m.locate(1.0, 1.0) == 3);   // domain corner stays inside
  CHECK_THROWS_AS(m.locate(1.5, 0.5), invalid_input);
}

TEST_CASE("invalid construction is rejected") {
  CHECK_THROWS_AS(build_rect_mesh({0, 0, 1, 1}, 0, 2), invalid_input);
  CHECK_THROWS_AS(build_rect_mesh({0, 0, 1, 1}, 2, -1), invalid_input);
  CHECK_THROWS_AS(build_rect_mesh({0, 0, 0, 1}, 2, 2), invalid_input);
  CHECK_THROWS_AS(build_rect_mesh({0, 2, 1, 2}, 2, 2), invalid_input);
}

TEST_CASE("summary and fingerprint reflect the mesh") {
  const Mesh a = build_rect_mesh({0, 0, 1, 1}, 2, 2);
  const Mesh b = build_rect_mesh({0, 0, 1, 1}, 2, 3);
  CHECK(a.fingerprint() != b.fingerprint());
  CHECK(a.fingerprint() ==
        build_rect_mesh({0, 0, 1, 1}, 2, 2).fingerprint());
  const std::string s = mesh_summary(a);
  CHECK(s.find("4") != std::string::npos);        // element count
  CHECK(s.find("elements") != std::string::npos);
}

} // TEST_SUITE
