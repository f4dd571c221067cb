#include <doctest.h>

#include <sstream>

#include "ucflow/cases.hpp"
#include "ucflow/mesh.hpp"

using namespace ucflow;

TEST_SUITE("mesh") {
  TEST_CASE("smallest mesh topology") {
    const Mesh m = build_unit_square_mesh(1);
    CHECK(m.num_vertices() == 4);
    CHECK(m.num_elements() == 2);
    CHECK(m.num_faces() == 5);
    const FaceLists f = classify_faces(m);
    CHECK(f.interior.size() == 1);
    CHECK(f.boundary.size() == 4);
  }

  TEST_CASE("two-by-two mesh topology") {
    const Mesh m = build_unit_square_mesh(2);
    CHECK(m.num_vertices() == 9);
    CHECK(m.num_elements() == 8);
    CHECK(m.num_faces() == 16);
    CHECK(classify_faces(m).interior.size() == 8);
  }

  TEST_CASE("face and element invariants") {
    for (int n : {1, 3, 8}) {
      const Mesh m = build_unit_square_mesh(n);
      const FaceLists f = classify_faces(m);
      CHECK(f.interior.size() + f.boundary.size() == static_cast<std::size_t>(m.num_faces()));

      double area = 0.0;
      for (int e = 0; e < m.num_elements(); ++e) {
        const auto p = m.element_points(e);
        const double signed2 = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
        CHECK(signed2 > 0.0);  // counterclockwise
        area += m.element_area(e);
        CHECK(m.element_diameter(e) <= m.h() + 1e-15);
      }
      CHECK(area == doctest::Approx(1.0).epsilon(1e-12));

      std::vector<int> seen(m.num_elements(), 0);
      for (const Face& face : m.faces()) {
        CHECK(std::hypot(face.normal[0], face.normal[1]) == doctest::Approx(1.0));
        const Point& a = m.vertices()[face.vertices[0]];
        const Point& b = m.vertices()[face.vertices[1]];
        CHECK(face.length == doctest::Approx(std::hypot(b[0] - a[0], b[1] - a[1])));
        // Normal is orthogonal to the edge and points away from the minus element.
        CHECK(std::abs(face.normal[0] * (b[0] - a[0]) + face.normal[1] * (b[1] - a[1])) < 1e-14);
        const auto pm = m.element_points(face.minus);
        const Point cm{(pm[0][0] + pm[1][0] + pm[2][0]) / 3, (pm[0][1] + pm[1][1] + pm[2][1]) / 3};
        CHECK((cm[0] - a[0]) * face.normal[0] + (cm[1] - a[1]) * face.normal[1] < 0.0);
        ++seen[face.minus];
        if (face.interior()) {
          ++seen[face.plus];
        } else {
          CHECK(m.boundary_vertex_flags()[face.vertices[0]]);
          CHECK(m.boundary_vertex_flags()[face.vertices[1]]);
        }
      }
      for (int s : seen) CHECK(s == 3);
    }
  }

  TEST_CASE("mesh size is the element diameter") {
    CHECK(build_unit_square_mesh(4).h() == doctest::Approx(std::sqrt(2.0) / 4));
    CHECK_THROWS_AS(build_unit_square_mesh(0), std::invalid_argument);
  }

  TEST_CASE("regions of the experiments") {
    const ProblemCase convex = stokes_case(Geometry::Convex);
    CHECK(region_contains(convex.measurement, {0.05, 0.5}));
    CHECK_FALSE(region_contains(convex.measurement, {0.5, 0.5}));
    CHECK(region_contains(convex.measurement, {0.5, 0.25}));  // hole is open
    CHECK(convex.measurement.area() == doctest::Approx(0.4));

    const ProblemCase nonconvex = stokes_case(Geometry::NonConvex);
    CHECK(region_contains(nonconvex.target, {0.5, 0.9}));
    CHECK_FALSE(region_contains(nonconvex.target, {0.05, 0.9}));
    CHECK(region_contains(nonconvex.measurement, {0.25, 0.05}));
    CHECK_FALSE(region_contains(nonconvex.measurement, {0.8, 0.3}));
  }

  TEST_CASE("text dump lists every entity") {
    const Mesh m = build_unit_square_mesh(2);
    std::ostringstream out;
    write_mesh(out, m);
    std::istringstream in(out.str());
    int v = 0, t = 0, f = 0;
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("v ", 0) == 0) ++v;
      if (line.rfind("t ", 0) == 0) ++t;
      if (line.rfind("f ", 0) == 0) ++f;
    }
    CHECK(v == 9);
    CHECK(t == 8);
    CHECK(f == 16);
  }
}
