#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace gonb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Geometric tolerance for vertex dedup, facet membership and normal matching.
inline constexpr double kGeomTol = 1e-9;

inline Vector make_vector(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Vector to_vector(const std::vector<double>& xs) {
  return Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

/// e^{-2 pi i x}
inline Complex phase(double x) { return std::polar(1.0, -kTwoPi * x); }

/// Orthonormal basis of the complement of `normal` (d x (d-1)), from a
/// Householder reflection, so it is a deterministic function of the input.
inline Matrix complement_basis(const Vector& normal) {
  const auto d = normal.size();
  Eigen::HouseholderQR<Matrix> qr(Matrix(normal.normalized()));
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  return q.rightCols(d - 1);
}

/// Full orthonormal frame whose first column is `axis` (normalized).
inline Matrix frame_with_axis(const Vector& axis) {
  const auto d = axis.size();
  Matrix basis(d, d);
  basis.col(0) = axis.normalized();
  if (d > 1) basis.rightCols(d - 1) = complement_basis(axis);
  return basis;
}

/// Dimension of the affine hull of `points` (rows are not used; each entry is a point).
inline int affine_rank(const std::vector<Vector>& points, double tol = kGeomTol) {
  if (points.empty()) return -1;
  const auto d = points.front().size();
  if (points.size() == 1 || d == 0) return 0;
  Matrix m(d, static_cast<Eigen::Index>(points.size() - 1));
  for (std::size_t i = 1; i < points.size(); ++i) m.col(static_cast<Eigen::Index>(i - 1)) = points[i] - points[0];
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > tol) ++rank;
  return rank;
}

inline Vector centroid(const std::vector<Vector>& points) {
  Vector c = Vector::Zero(points.front().size());
  for (const auto& p : points) c += p;
  return c / static_cast<double>(points.size());
}

inline bool lex_less(const Vector& a, const Vector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

/// Map near-zero coordinates to +0 so printed output has no "-0" noise.
inline Vector snap_zero(Vector v, double tol = 1e-13) {
  for (auto& x : v)
    if (std::abs(x) < tol) x = 0.0;
  return v;
}

}  // namespace gonb
