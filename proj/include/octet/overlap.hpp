#pragma once
// Separating-axis interior-overlap test for convex cells.

#include <limits>
#include <vector>

#include "octet/cell.hpp"

namespace octet {

namespace detail {

inline void project(const ConvexCell& c, const Vec3& axis, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (const Vec3& v : c.vertices()) {
    const double d = dot(v, axis);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
}

inline bool separates(const ConvexCell& a, const ConvexCell& b, const Vec3& axis, double tol) {
  double alo, ahi, blo, bhi;
  project(a, axis, alo, ahi);
  project(b, axis, blo, bhi);
  return ahi - blo <= tol || bhi - alo <= tol;
}

}  // namespace detail

/// True iff the open interiors of `a` and `b` intersect. Touching within `tol`
/// (shared faces, edges or vertices) is not overlap.
inline bool interiors_overlap(const ConvexCell& a, const ConvexCell& b, double tol = kTol) {
  for (int i = 0; i < a.face_count(); ++i)
    if (detail::separates(a, b, a.face_normal(i), tol)) return false;
  for (int i = 0; i < b.face_count(); ++i)
    if (detail::separates(a, b, b.face_normal(i), tol)) return false;
  for (auto [a0, a1] : a.edges()) {
    const Vec3 da = a.vertex(a1) - a.vertex(a0);
    for (auto [b0, b1] : b.edges()) {
      const Vec3 axis = cross(da, b.vertex(b1) - b.vertex(b0));
      const double n = norm(axis);
      if (n < 1e-12) continue;
      if (detail::separates(a, b, axis / n, tol)) return false;
    }
  }
  return true;
}

}  // namespace octet
