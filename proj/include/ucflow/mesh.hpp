#pragma once

#include <array>
#include <iosfwd>
#include <vector>

namespace ucflow {

using Point = std::array<double, 2>;

/// Axis-aligned box [lo, hi] in domain coordinates.
struct Box {
  Point lo{0.0, 0.0};
  Point hi{1.0, 1.0};

  [[nodiscard]] double area() const { return (hi[0] - lo[0]) * (hi[1] - lo[1]); }
};

/// Mesh edge. Interior faces have both neighbours; boundary faces have
/// `plus == -1`. The normal points from `minus` to `plus` (outward for
/// boundary faces).
struct Face {
  std::array<int, 2> vertices{};
  int minus = -1;
  int plus = -1;
  Point normal{};
  double length = 0.0;

  [[nodiscard]] bool interior() const { return plus >= 0; }
};

/// Structured simplicial triangulation of a rectangle.
///
/// Every grid square is split along its lower-left to upper-right diagonal,
/// so all elements are congruent right triangles. Elements are stored
/// counterclockwise. The element-to-face table lists, for local vertex i,
/// the face opposite to it.
class Mesh {
 public:
  [[nodiscard]] const std::vector<Point>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<std::array<int, 3>>& elements() const { return elements_; }
  [[nodiscard]] const std::vector<Face>& faces() const { return faces_; }
  [[nodiscard]] const std::vector<std::array<int, 3>>& element_faces() const { return element_faces_; }
  [[nodiscard]] const std::vector<bool>& boundary_vertex_flags() const { return boundary_vertex_; }

  [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices_.size()); }
  [[nodiscard]] int num_elements() const { return static_cast<int>(elements_.size()); }
  [[nodiscard]] int num_faces() const { return static_cast<int>(faces_.size()); }

  [[nodiscard]] int n_div() const { return n_div_; }
  [[nodiscard]] const Box& domain() const { return domain_; }
  /// Global mesh size: maximum element diameter.
  [[nodiscard]] double h() const { return h_; }

  [[nodiscard]] std::array<Point, 3> element_points(int e) const;
  [[nodiscard]] double element_diameter(int e) const;
  [[nodiscard]] double element_area(int e) const;

  friend Mesh build_rectangle_mesh(const Box& domain, int n_div);

 private:
  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> elements_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 3>> element_faces_;
  std::vector<bool> boundary_vertex_;
  int n_div_ = 0;
  Box domain_;
  double h_ = 0.0;
};

/// Structured mesh with `n_div` subdivisions per unit length along each
/// axis. Throws std::invalid_argument for n_div < 1.
Mesh build_rectangle_mesh(const Box& domain, int n_div);

inline Mesh build_unit_square_mesh(int n_div) { return build_rectangle_mesh(Box{}, n_div); }

struct FaceLists {
  std::vector<int> interior;
  std::vector<int> boundary;
};

FaceLists classify_faces(const Mesh& mesh);

/// Point set built from closed rectangles. A complement region is
/// `domain \ open(hole)`, so the hole's boundary belongs to the region.
class Region {
 public:
  enum class Kind { Rectangle, Complement, Union };

  static Region rectangle(const Box& box);
  static Region complement(const Box& domain, const Box& hole);
  static Region union_of(std::vector<Box> boxes);

  [[nodiscard]] bool contains(const Point& x) const;
  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const std::vector<Box>& bounds() const { return boxes_; }
  /// Exact measure of the region (the union is assumed disjoint).
  [[nodiscard]] double area() const;

 private:
  Kind kind_ = Kind::Rectangle;
  std::vector<Box> boxes_;
};

inline bool region_contains(const Region& region, const Point& x) { return region.contains(x); }

/// Text dump: `v x y`, `t i j k`, `f i j minus plus|-1`.
void write_mesh(std::ostream& out, const Mesh& mesh);

}  // namespace ucflow
