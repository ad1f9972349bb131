#pragma once

#include "gonb/polytope.hpp"

#include <algorithm>
#include <vector>

namespace gonb {

namespace detail {

inline double cross2(const Vector& o, const Vector& a, const Vector& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

/// Andrew's monotone chain; counter-clockwise, starting at the lowest-x point.
inline std::vector<Vector> convex_hull_2d(std::vector<Vector> pts) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vector& a, const Vector& b) { return (a - b).lpNorm<Eigen::Infinity>() <= kGeomTol; }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vector> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], p) <= kGeomTol) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross2(hull[k - 2], hull[k - 1], pts[i]) <= kGeomTol) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace detail

/// H-representation of conv(points) for d <= 3.
///
/// In d = 2 the half-spaces follow the counter-clockwise edge order starting
/// at the lexicographically smallest vertex. Collinear input in d = 2 yields a
/// degenerate segment. In d = 3 every triple of points spanning a supporting
/// plane contributes a half-space; duplicates are merged by canonicalization.
inline HPolytope from_vertices(const std::vector<Vector>& points, int d) {
  if (d < 1 || d > 3) throw Error(ErrorKind::InvalidArgument, "vertex input is supported for d <= 3 only");
  if (points.empty()) throw Error(ErrorKind::EmptyPolytope, "no vertices given");
  for (const auto& p : points)
    if (p.size() != d) throw Error(ErrorKind::InvalidArgument, "vertex dimension mismatch");
  std::vector<HalfSpace> hs;
  if (d == 1) {
    auto [lo, hi] = std::minmax_element(points.begin(), points.end(), [](const Vector& a, const Vector& b) { return a[0] < b[0]; });
    hs.push_back({make_vector({1.0}), (*hi)[0]});
    hs.push_back({make_vector({-1.0}), -(*lo)[0]});
  } else if (d == 2) {
    const auto hull = detail::convex_hull_2d(points);
    if (hull.size() < 3) {
      const Vector a = hull.front(), b = hull.back();
      Vector dir = b - a;
      if (dir.norm() <= kGeomTol) dir = make_vector({1.0, 0.0});
      dir.normalize();
      const Vector nrm = make_vector({-dir[1], dir[0]});
      hs = {{nrm, nrm.dot(a)}, {-nrm, -nrm.dot(a)}, {dir, dir.dot(b)}, {-dir, -dir.dot(a)}};
    } else {
      for (std::size_t i = 0; i < hull.size(); ++i) {
        const Vector& a = hull[i];
        const Vector& b = hull[(i + 1) % hull.size()];
        const Vector nrm = make_vector({b[1] - a[1], a[0] - b[0]}).normalized();
        hs.push_back({nrm, nrm.dot(a)});
      }
    }
  } else {
    const int n = static_cast<int>(points.size());
    detail::for_each_subset(n, 3, [&](const std::vector<int>& idx) {
      const Vector& a = points[static_cast<std::size_t>(idx[0])];
      const Vector u = points[static_cast<std::size_t>(idx[1])] - a;
      const Vector v = points[static_cast<std::size_t>(idx[2])] - a;
      Vector nrm = Eigen::Vector3d(u[0], u[1], u[2]).cross(Eigen::Vector3d(v[0], v[1], v[2]));
      if (nrm.norm() <= kGeomTol) return;
      nrm.normalize();
      bool pos = false, neg = false;
      for (const auto& p : points) {
        const double s = nrm.dot(p - a);
        if (s > kGeomTol) pos = true;
        if (s < -kGeomTol) neg = true;
      }
      if (pos && neg) return;
      if (pos) nrm = -nrm;
      hs.push_back({nrm, nrm.dot(a)});
    });
    if (hs.empty() || affine_rank(points) < 3) throw Error(ErrorKind::DegeneratePolytope, "coplanar vertex input in d = 3");
  }
  return normalize(std::move(hs), d);
}

}  // namespace gonb
