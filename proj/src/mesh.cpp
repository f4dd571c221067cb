#include "ucflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace ucflow {

std::array<Point, 3> Mesh::element_points(int e) const {
  const auto& t = elements_[e];
  return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
}

double Mesh::element_diameter(int e) const {
  const auto p = element_points(e);
  double d = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto& a = p[i];
    const auto& b = p[(i + 1) % 3];
    d = std::max(d, std::hypot(a[0] - b[0], a[1] - b[1]));
  }
  return d;
}

double Mesh::element_area(int e) const {
  const auto p = element_points(e);
  return 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]));
}

Mesh build_rectangle_mesh(const Box& domain, int n_div) {
  if (n_div < 1) throw std::invalid_argument("build_rectangle_mesh: n_div must be >= 1");
  const double lx = domain.hi[0] - domain.lo[0];
  const double ly = domain.hi[1] - domain.lo[1];
  if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("build_rectangle_mesh: empty domain");
  const int nx = std::max(1, static_cast<int>(std::lround(lx * n_div)));
  const int ny = std::max(1, static_cast<int>(std::lround(ly * n_div)));

  Mesh mesh;
  mesh.n_div_ = n_div;
  mesh.domain_ = domain;

  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh.vertices_.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  mesh.boundary_vertex_.reserve(mesh.vertices_.capacity());
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      // Snap the last row/column onto the bound exactly.
      const double x = i == nx ? domain.hi[0] : domain.lo[0] + lx * i / nx;
      const double y = j == ny ? domain.hi[1] : domain.lo[1] + ly * j / ny;
      mesh.vertices_.push_back({x, y});
      mesh.boundary_vertex_.push_back(i == 0 || j == 0 || i == nx || j == ny);
    }
  }

  mesh.elements_.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      mesh.elements_.push_back({a, b, c});
      mesh.elements_.push_back({a, c, d});
    }
  }

  // Faces, keyed by sorted vertex pair, in order of first appearance.
  std::map<std::pair<int, int>, int> lookup;
  mesh.element_faces_.resize(mesh.elements_.size());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& t = mesh.elements_[e];
    for (int local = 0; local < 3; ++local) {
      const int v0 = t[(local + 1) % 3];
      const int v1 = t[(local + 2) % 3];
      const auto key = std::minmax(v0, v1);
      auto [it, inserted] = lookup.try_emplace({key.first, key.second}, mesh.num_faces());
      if (inserted) {
        Face f;
        f.vertices = {key.first, key.second};
        f.minus = e;
        const auto& p0 = mesh.vertices_[v0];
        const auto& p1 = mesh.vertices_[v1];
        f.length = std::hypot(p1[0] - p0[0], p1[1] - p0[1]);
        // Counterclockwise edge v0 -> v1: outward normal of e is (dy, -dx).
        f.normal = {(p1[1] - p0[1]) / f.length, -(p1[0] - p0[0]) / f.length};
        mesh.faces_.push_back(f);
      } else {
        mesh.faces_[it->second].plus = e;
      }
      mesh.element_faces_[e][local] = it->second;
    }
  }

  for (int e = 0; e < mesh.num_elements(); ++e) mesh.h_ = std::max(mesh.h_, mesh.element_diameter(e));
  return mesh;
}

FaceLists classify_faces(const Mesh& mesh) {
  FaceLists lists;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    (mesh.faces()[f].interior() ? lists.interior : lists.boundary).push_back(f);
  }
  return lists;
}

namespace {

bool in_closed(const Box& b, const Point& x) {
  return x[0] >= b.lo[0] && x[0] <= b.hi[0] && x[1] >= b.lo[1] && x[1] <= b.hi[1];
}

bool in_open(const Box& b, const Point& x) {
  return x[0] > b.lo[0] && x[0] < b.hi[0] && x[1] > b.lo[1] && x[1] < b.hi[1];
}

}  // namespace

Region Region::rectangle(const Box& box) {
  Region r;
  r.kind_ = Kind::Rectangle;
  r.boxes_ = {box};
  return r;
}

Region Region::complement(const Box& domain, const Box& hole) {
  Region r;
  r.kind_ = Kind::Complement;
  r.boxes_ = {domain, hole};
  return r;
}

Region Region::union_of(std::vector<Box> boxes) {
  if (boxes.empty()) throw std::invalid_argument("Region::union_of: no boxes");
  Region r;
  r.kind_ = Kind::Union;
  r.boxes_ = std::move(boxes);
  return r;
}

bool Region::contains(const Point& x) const {
  switch (kind_) {
    case Kind::Rectangle:
      return in_closed(boxes_[0], x);
    case Kind::Complement:
      return in_closed(boxes_[0], x) && !in_open(boxes_[1], x);
    case Kind::Union:
      return std::any_of(boxes_.begin(), boxes_.end(), [&](const Box& b) { return in_closed(b, x); });
  }
  return false;
}

double Region::area() const {
  switch (kind_) {
    case Kind::Rectangle:
      return boxes_[0].area();
    case Kind::Complement: {
      const Box& d = boxes_[0];
      const Box& h = boxes_[1];
      const double wx = std::max(0.0, std::min(d.hi[0], h.hi[0]) - std::max(d.lo[0], h.lo[0]));
      const double wy = std::max(0.0, std::min(d.hi[1], h.hi[1]) - std::max(d.lo[1], h.lo[1]));
      return d.area() - wx * wy;
    }
    case Kind::Union: {
      double a = 0.0;
      for (const auto& b : boxes_) a += b.area();
      return a;
    }
  }
  return 0.0;
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  const auto old = out.precision(17);
  for (const auto& v : mesh.vertices()) out << "v " << v[0] << ' ' << v[1] << '\n';
  for (const auto& t : mesh.elements()) out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& f : mesh.faces()) {
    out << "f " << f.vertices[0] << ' ' << f.vertices[1] << ' ' << f.minus << ' ' << f.plus << '\n';
  }
  out.precision(old);
}

}  // namespace ucflow
