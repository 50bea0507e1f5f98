#pragma once
// Convex cells of the octet truss: regular tetrahedra, regular octahedra and the
// square pyramid obtained by halving an octahedron.

#include <algorithm>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "octet/errors.hpp"
#include "octet/geom.hpp"

namespace octet {

using Rational = boost::rational<long long>;

enum class Species : std::uint8_t { TetraUp, TetraDown, Octa, HalfOcta };

/// Congruence class of a species; the two tetra orientations share one shape.
enum class Shape : std::uint8_t { Tetra, Octa, HalfOcta };

constexpr Shape shape_of(Species s) {
  switch (s) {
    case Species::TetraUp:
    case Species::TetraDown: return Shape::Tetra;
    case Species::Octa: return Shape::Octa;
    case Species::HalfOcta: return Shape::HalfOcta;
  }
  return Shape::Tetra;
}

constexpr std::string_view to_string(Species s) {
  switch (s) {
    case Species::TetraUp: return "tetra_up";
    case Species::TetraDown: return "tetra_down";
    case Species::Octa: return "octa";
    case Species::HalfOcta: return "half_octa";
  }
  return "?";
}

constexpr std::string_view to_string(Shape s) {
  switch (s) {
    case Shape::Tetra: return "tetra";
    case Shape::Octa: return "octa";
    case Shape::HalfOcta: return "half_octa";
  }
  return "?";
}

inline Species species_from_string(std::string_view name) {
  for (Species s : {Species::TetraUp, Species::TetraDown, Species::Octa, Species::HalfOcta})
    if (to_string(s) == name) return s;
  throw Error("UnknownSpecies", std::string(name));
}

inline Shape shape_from_string(std::string_view name) {
  for (Shape s : {Shape::Tetra, Shape::Octa, Shape::HalfOcta})
    if (to_string(s) == name) return s;
  throw Error("UnknownShape", std::string(name));
}

/// Exact volume in lattice units^3 (edge sqrt(2)).
constexpr Rational exact_volume(Shape s) {
  switch (s) {
    case Shape::Tetra: return Rational(1, 3);
    case Shape::Octa: return Rational(4, 3);
    case Shape::HalfOcta: return Rational(2, 3);
  }
  return Rational(0);
}
constexpr Rational exact_volume(Species s) { return exact_volume(shape_of(s)); }

/// A convex polyhedron with outward-oriented faces. Immutable after construction.
class ConvexCell {
 public:
  using Face = std::vector<int>;

  ConvexCell(Species species, std::vector<Vec3> vertices, std::vector<Face> faces)
      : species_(species), vertices_(std::move(vertices)), faces_(std::move(faces)) {
    const Vec3 c = centroid();
    for (Face& f : faces_) {
      if (dot(raw_normal(f), face_center(f) - c) < 0) std::reverse(f.begin(), f.end());
    }
    for (const Face& f : faces_) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        int a = f[i], b = f[(i + 1) % f.size()];
        if (a > b) std::swap(a, b);
        edges_.emplace_back(a, b);
      }
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  }

  Species species() const { return species_; }
  Shape shape() const { return shape_of(species_); }
  std::span<const Vec3> vertices() const { return vertices_; }
  const Vec3& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  std::span<const Face> faces() const { return faces_; }
  const Face& face(int i) const { return faces_[static_cast<std::size_t>(i)]; }
  int face_count() const { return static_cast<int>(faces_.size()); }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }

  /// Undirected edges as sorted vertex-index pairs, lexicographically ordered.
  std::span<const std::pair<int, int>> edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  Vec3 centroid() const {
    Vec3 c;
    for (const Vec3& v : vertices_) c += v;
    return c / static_cast<double>(vertices_.size());
  }

  Vec3 face_center(int i) const { return face_center(face(i)); }
  Vec3 face_normal(int i) const { return normalized(raw_normal(face(i))); }

  /// Volume by the divergence theorem over a fan triangulation of each face.
  double volume() const {
    double v = 0;
    const Vec3 o = vertices_.front();
    for (const Face& f : faces_)
      for (std::size_t i = 1; i + 1 < f.size(); ++i)
        v += dot(vertex(f[0]) - o, cross(vertex(f[i]) - o, vertex(f[i + 1]) - o));
    return v / 6.0;
  }

  /// True when `p` lies inside every face plane by at least `margin`.
  bool contains_strictly(const Vec3& p, double margin = kTol) const {
    for (int i = 0; i < face_count(); ++i)
      if (dot(face_normal(i), p - vertex(face(i)[0])) > -margin) return false;
    return true;
  }

  ConvexCell transformed(const Isometry& iso) const {
    std::vector<Vec3> vs;
    vs.reserve(vertices_.size());
    for (const Vec3& v : vertices_) vs.push_back(iso(v));
    return ConvexCell(species_, std::move(vs), faces_);
  }

  ConvexCell with_species(Species s) const { return ConvexCell(s, vertices_, faces_); }

 private:
  Vec3 face_center(const Face& f) const {
    Vec3 c;
    for (int i : f) c += vertex(i);
    return c / static_cast<double>(f.size());
  }
  /// Newell normal; robust for planar polygons of any size.
  Vec3 raw_normal(const Face& f) const {
    Vec3 n;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Vec3& a = vertex(f[i]);
      const Vec3& b = vertex(f[(i + 1) % f.size()]);
      n.x += (a.y - b.y) * (a.z + b.z);
      n.y += (a.z - b.z) * (a.x + b.x);
      n.z += (a.x - b.x) * (a.y + b.y);
    }
    return n;
  }

  Species species_;
  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
  std::vector<std::pair<int, int>> edges_;
};

namespace detail {

inline std::vector<ConvexCell::Face> tetra_faces() { return {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}}; }

// Octa vertex order: -x, +x, +y, -y, +z, -z about the centre. Face k takes the
// vertex on the sign-selected side of each axis, k = 4*[sx>0] + 2*[sy>0] + [sz>0].
inline std::vector<ConvexCell::Face> octa_faces() {
  std::vector<ConvexCell::Face> f;
  for (int sx = 0; sx < 2; ++sx)
    for (int sy = 0; sy < 2; ++sy)
      for (int sz = 0; sz < 2; ++sz) f.push_back({sx ? 1 : 0, sy ? 2 : 3, sz ? 4 : 5});
  return f;
}

// Four triangles first, the square base last.
inline std::vector<ConvexCell::Face> half_octa_faces() {
  return {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}, {0, 3, 2, 1}};
}

}  // namespace detail

enum class TetraOrientation { Up, Down };

/// Up: (0,0,0),(1,1,0),(1,0,1),(0,1,1). Down: the point reflection of Up, translated
/// back onto the lattice: (0,0,0),(1,1,0),(1,0,-1),(0,1,-1).
inline ConvexCell canonical_tetra(TetraOrientation o) {
  if (o == TetraOrientation::Up)
    return ConvexCell(Species::TetraUp, {{0, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}},
                      detail::tetra_faces());
  return ConvexCell(Species::TetraDown, {{0, 0, 0}, {1, 1, 0}, {1, 0, -1}, {0, 1, -1}},
                    detail::tetra_faces());
}

inline ConvexCell canonical_octa() {
  return ConvexCell(Species::Octa, {{0, 0, 0}, {2, 0, 0}, {1, 1, 0}, {1, -1, 0}, {1, 0, 1}, {1, 0, -1}},
                    detail::octa_faces());
}

/// Upper half (z >= 0) of canonical_octa().
inline ConvexCell canonical_half_octa() {
  return ConvexCell(Species::HalfOcta, {{0, 0, 0}, {1, 1, 0}, {2, 0, 0}, {1, -1, 0}, {1, 0, 1}},
                    detail::half_octa_faces());
}

inline ConvexCell canonical_cell(Species s) {
  switch (s) {
    case Species::TetraUp: return canonical_tetra(TetraOrientation::Up);
    case Species::TetraDown: return canonical_tetra(TetraOrientation::Down);
    case Species::Octa: return canonical_octa();
    case Species::HalfOcta: return canonical_half_octa();
  }
  return canonical_octa();
}

inline ConvexCell canonical_cell(Shape s) {
  switch (s) {
    case Shape::Tetra: return canonical_tetra(TetraOrientation::Up);
    case Shape::Octa: return canonical_octa();
    case Shape::HalfOcta: return canonical_half_octa();
  }
  return canonical_octa();
}

/// Checks the structural invariants of a cell; returns an empty string when valid.
inline std::string check_cell(const ConvexCell& c, double tol = kTol) {
  const int nv = c.vertex_count(), nf = c.face_count();
  switch (c.shape()) {
    case Shape::Tetra: if (nv != 4 || nf != 4) return "tetra must have 4 vertices and 4 faces"; break;
    case Shape::Octa: if (nv != 6 || nf != 8) return "octa must have 6 vertices and 8 faces"; break;
    case Shape::HalfOcta: if (nv != 5 || nf != 5) return "half-octa must have 5 vertices and 5 faces"; break;
  }
  const auto e0 = c.edges().front();
  const double ref = distance(c.vertex(e0.first), c.vertex(e0.second));
  for (auto [a, b] : c.edges())
    if (std::abs(distance(c.vertex(a), c.vertex(b)) - ref) > tol * std::max(1.0, ref))
      return "unequal edge lengths";
  for (int i = 0; i < nf; ++i) {
    const Vec3 n = c.face_normal(i);
    const Vec3 p = c.vertex(c.face(i)[0]);
    for (int v : c.face(i))
      if (std::abs(dot(n, c.vertex(v) - p)) > tol * std::max(1.0, ref)) return "non-planar face";
  }
  if (c.volume() <= 0) return "faces not outward oriented";
  return {};
}

}  // namespace octet
