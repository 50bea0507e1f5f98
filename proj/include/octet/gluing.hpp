#pragma once
// Face gluing and pose recovery.

#include <cmath>
#include <vector>

#include "octet/cell.hpp"
#include "octet/errors.hpp"

namespace octet {

/// The three proper isometries taking `b` so that face `face_b` lands on face
/// `face_a` of `a` with opposed outward normals. Entry k sends the first vertex of
/// face_b onto vertex k of face_a.
inline std::vector<Isometry> face_gluings(const ConvexCell& a, int face_a, const ConvexCell& b, int face_b) {
  if (face_a < 0 || face_a >= a.face_count() || face_b < 0 || face_b >= b.face_count())
    throw UnknownFeature("face index out of range");
  const auto& fa = a.face(face_a);
  const auto& fb = b.face(face_b);
  if (fa.size() != 3 || fb.size() != 3) {
    if (fa.size() != fb.size()) throw FaceMismatch("cannot glue a square face to a triangle");
    throw NotTriangle("square faces are not glued");
  }
  const double la = distance(a.vertex(fa[0]), a.vertex(fa[1]));
  for (int i = 0; i < 3; ++i) {
    const double ea = distance(a.vertex(fa[i]), a.vertex(fa[(i + 1) % 3]));
    const double eb = distance(b.vertex(fb[i]), b.vertex(fb[(i + 1) % 3]));
    if (std::abs(ea - la) > kTol * std::max(1.0, la) || std::abs(eb - la) > kTol * std::max(1.0, la))
      throw FaceMismatch("faces are not congruent equilateral triangles");
  }
  const Vec3 nb = b.face_normal(face_b);
  const Vec3 na = a.face_normal(face_a);
  const Vec3 q0 = b.vertex(fb[0]);
  const Vec3 e1 = normalized(b.vertex(fb[1]) - q0);
  const Mat3 from = Mat3::from_cols(e1, cross(nb, e1), nb);
  std::vector<Isometry> out;
  for (int k = 0; k < 3; ++k) {
    // Counter-clockwise about nb becomes clockwise about na.
    const Vec3 p0 = a.vertex(fa[static_cast<std::size_t>(k)]);
    const Vec3 p1 = a.vertex(fa[static_cast<std::size_t>((k + 2) % 3)]);
    const Vec3 f1 = normalized(p1 - p0);
    const Mat3 to = Mat3::from_cols(f1, cross(-na, f1), -na);
    out.push_back(frame_map(q0, from, p0, to));
  }
  return out;
}

/// Isometry taking canonical_cell(c.species()) vertex-for-vertex onto `c`.
inline Isometry pose_of(const ConvexCell& c, double tol = 1e-7) {
  const ConvexCell ref = canonical_cell(c.species());
  if (ref.vertex_count() != c.vertex_count()) throw InvalidParams("vertex count does not match species");
  const int n = c.vertex_count();
  for (int i = 1; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const Mat3 D = Mat3::from_cols(ref.vertex(i) - ref.vertex(0), ref.vertex(j) - ref.vertex(0),
                                       ref.vertex(k) - ref.vertex(0));
        if (std::abs(D.determinant()) < 0.5) continue;
        const Mat3 E = Mat3::from_cols(c.vertex(i) - c.vertex(0), c.vertex(j) - c.vertex(0), c.vertex(k) - c.vertex(0));
        const Mat3 L = E * D.inverse();
        Isometry iso{L, c.vertex(0) - L * ref.vertex(0), L.determinant() > 0};
        if (!iso.is_valid(tol)) throw InvalidParams("cell is not a rigid image of its canonical form");
        for (int v = 0; v < n; ++v)
          if (!near(iso(ref.vertex(v)), c.vertex(v), tol))
            throw InvalidParams("cell is not a rigid image of its canonical form");
        return iso;
      }
  throw InvalidParams("degenerate cell");
}

/// Number of vertices of `a` coinciding (within tol) with a vertex of `b`.
inline int shared_vertex_count(const ConvexCell& a, const ConvexCell& b, double tol = 1e-7) {
  int n = 0;
  for (const Vec3& p : a.vertices())
    for (const Vec3& q : b.vertices())
      if (near(p, q, tol)) {
        ++n;
        break;
      }
  return n;
}

}  // namespace octet
