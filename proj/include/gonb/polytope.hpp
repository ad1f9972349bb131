#pragma once

#include "gonb/error.hpp"
#include "gonb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gonb {

/// {x : <normal, x> <= offset}
struct HalfSpace {
  Vector normal;
  double offset = 0.0;

  double slack(const Vector& x) const { return offset - normal.dot(x); }
};

enum class PolytopeStatus { Full, Degenerate, Empty };

struct Facet;
class HPolytope;

inline HPolytope make_canonical(std::vector<HalfSpace> raw, int d, bool check_bounded, bool throw_on_empty);
inline HPolytope point_polytope();
inline double volume(const HPolytope& p);

/// Bounded intersection of half-spaces in canonical form.
///
/// Canonical means unit normals, no two normals within kGeomTol of each other
/// and, for full-dimensional polytopes, every half-space supports a facet of
/// positive (d-1)-volume. Vertices and facets are computed once at
/// construction; the object is immutable afterwards and safe to share across
/// threads.
class HPolytope {
 public:
  HPolytope() = default;

  int dimension() const { return dim_; }
  const std::vector<HalfSpace>& halfspaces() const { return halfspaces_; }
  PolytopeStatus status() const { return status_; }
  bool is_full() const { return status_ == PolytopeStatus::Full; }
  bool is_empty() const { return status_ == PolytopeStatus::Empty; }
  bool is_degenerate() const { return status_ == PolytopeStatus::Degenerate; }

  /// Vertex cache; also populated for degenerate polytopes, empty when Empty.
  const std::vector<Vector>& vertex_cache() const { return vertices_; }

  /// Facets aligned with halfspaces(); empty unless is_full().
  const std::vector<Facet>& facet_cache() const;

  bool contains(const Vector& x, double tol = kGeomTol) const {
    for (const auto& h : halfspaces_)
      if (h.slack(x) < -tol * std::max(1.0, std::abs(h.offset))) return false;
    return true;
  }

 private:
  friend HPolytope make_canonical(std::vector<HalfSpace>, int, bool, bool);
  friend HPolytope point_polytope();

  int dim_ = 0;
  std::vector<HalfSpace> halfspaces_;
  PolytopeStatus status_ = PolytopeStatus::Empty;
  std::vector<Vector> vertices_;
  std::shared_ptr<const std::vector<Facet>> facets_;
};

/// A facet F = Omega ∩ {<normal,x> = offset} with an isometric chart
/// x = origin + tangent * y mapping the (d-1)-dimensional polytope `local`
/// onto F.
struct Facet {
  HalfSpace supporting;
  std::vector<Vector> vertices;
  double volume_dm1 = 0.0;
  Vector origin;
  Matrix tangent;
  HPolytope local;

  const Vector& normal() const { return supporting.normal; }
};

inline const std::vector<Facet>& HPolytope::facet_cache() const {
  static const std::vector<Facet> none;
  return facets_ ? *facets_ : none;
}

struct SymmetryReport {
  bool symmetric = true;
  /// (F, parallel of F or nullopt for the empty facet) when non-symmetric.
  std::optional<std::pair<Facet, std::optional<Facet>>> witness;
  double margin = 0.0;
};

namespace detail {

inline double feas_tol(double offset) { return kGeomTol * std::max(1.0, std::abs(offset)); }

inline bool same_direction(const Vector& a, const Vector& b) { return (a - b).lpNorm<Eigen::Infinity>() <= kGeomTol; }

/// Calls fn(indices) for every k-subset of {0..n-1} in lexicographic order.
inline void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  if (k > n || k < 0) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

/// Brute force over all d-subsets of constraints: solve, keep feasible, dedup.
inline std::vector<Vector> enumerate_vertices(const std::vector<HalfSpace>& hs, int d) {
  std::vector<Vector> out;
  if (d == 0) {
    out.emplace_back(Vector(0));
    return out;
  }
  Matrix a(d, d);
  Vector b(d);
  for_each_subset(static_cast<int>(hs.size()), d, [&](const std::vector<int>& idx) {
    for (int r = 0; r < d; ++r) {
      a.row(r) = hs[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].normal.transpose();
      b[r] = hs[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].offset;
    }
    Eigen::FullPivLU<Matrix> lu(a);
    lu.setThreshold(1e-12);
    if (lu.rank() < d) return;
    Vector x = lu.solve(b);
    if (!x.allFinite()) return;
    for (const auto& h : hs)
      if (h.slack(x) < -feas_tol(h.offset)) return;
    for (const auto& v : out)
      if ((v - x).lpNorm<Eigen::Infinity>() <= kGeomTol) return;
    out.push_back(std::move(x));
  });
  return out;
}

/// True iff {u : <a_i,u> <= 0 for all i} contains a nonzero direction.
inline bool has_recession_direction(const std::vector<HalfSpace>& hs, int d) {
  std::vector<HalfSpace> cone;
  cone.reserve(hs.size() + 2 * static_cast<std::size_t>(d));
  for (const auto& h : hs) cone.push_back({h.normal, 0.0});
  for (int j = 0; j < d; ++j) {
    Vector e = Vector::Zero(d);
    e[j] = 1.0;
    cone.push_back({e, 1.0});
    cone.push_back({-e, 1.0});
  }
  for (const auto& v : enumerate_vertices(cone, d))
    if (v.lpNorm<Eigen::Infinity>() > 0.5) return true;
  return false;
}

inline std::vector<HalfSpace> unit_and_merge(std::vector<HalfSpace> raw, int d) {
  std::vector<HalfSpace> merged;
  for (auto& h : raw) {
    if (h.normal.size() != d) throw Error(ErrorKind::InvalidArgument, "half-space dimension mismatch");
    const double n = h.normal.norm();
    if (!(n > 0.0) || !std::isfinite(n) || !std::isfinite(h.offset))
      throw Error(ErrorKind::InvalidArgument, "half-space normal must be finite and nonzero");
    if (std::abs(n - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) {
      h.normal /= n;
      h.offset /= n;
    }
    bool dup = false;
    for (auto& m : merged) {
      if (same_direction(m.normal, h.normal)) {
        m.offset = std::min(m.offset, h.offset);
        dup = true;
        break;
      }
    }
    if (!dup) merged.push_back(std::move(h));
  }
  return merged;
}

}  // namespace detail

/// 0-dimensional polytope (a point). Facets of 1-dimensional polytopes use it
/// as their local chart; its volume is 1 (counting measure).
inline HPolytope point_polytope() {
  HPolytope p;
  p.dim_ = 0;
  p.status_ = PolytopeStatus::Full;
  p.vertices_.emplace_back(Vector(0));
  p.facets_ = std::make_shared<const std::vector<Facet>>();
  return p;
}

namespace detail {

/// Intersect the constraint system with the hyperplane of hs[i] and express
/// the result in an orthonormal chart of that hyperplane.
inline Facet restrict_to_hyperplane(const std::vector<HalfSpace>& hs, std::size_t i, int d,
                                    const std::vector<Vector>& vertices);

}  // namespace detail

/// Canonicalize raw half-spaces. With check_bounded the recession cone is
/// tested; with throw_on_empty an infeasible system raises EmptyPolytope,
/// otherwise an Empty-status polytope is returned.
inline HPolytope make_canonical(std::vector<HalfSpace> raw, int d, bool check_bounded, bool throw_on_empty) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  HPolytope p;
  p.dim_ = d;
  auto hs = detail::unit_and_merge(std::move(raw), d);

  if (check_bounded && detail::has_recession_direction(hs, d)) {
    auto boxed = hs;
    for (int j = 0; j < d; ++j) {
      Vector e = Vector::Zero(d);
      e[j] = 1.0;
      boxed.push_back({e, 1e7});
      boxed.push_back({-e, 1e7});
    }
    if (detail::enumerate_vertices(boxed, d).empty()) throw Error(ErrorKind::EmptyPolytope, "half-spaces are infeasible");
    throw Error(ErrorKind::UnboundedPolytope, "half-spaces admit a recession direction");
  }

  auto verts = detail::enumerate_vertices(hs, d);
  if (verts.empty()) {
    if (throw_on_empty) throw Error(ErrorKind::EmptyPolytope, "half-spaces are infeasible");
    p.halfspaces_ = std::move(hs);
    p.status_ = PolytopeStatus::Empty;
    p.facets_ = std::make_shared<const std::vector<Facet>>();
    return p;
  }
  std::sort(verts.begin(), verts.end(), lex_less);
  for (auto& v : verts) v = snap_zero(v);

  if (affine_rank(verts) < d) {
    p.halfspaces_ = std::move(hs);
    p.status_ = PolytopeStatus::Degenerate;
    p.vertices_ = std::move(verts);
    p.facets_ = std::make_shared<const std::vector<Facet>>();
    return p;
  }

  std::vector<HalfSpace> kept;
  auto facets = std::make_shared<std::vector<Facet>>();
  for (std::size_t i = 0; i < hs.size(); ++i) {
    std::vector<Vector> on;
    for (const auto& v : verts)
      if (std::abs(hs[i].slack(v)) <= detail::feas_tol(hs[i].offset)) on.push_back(v);
    if (on.empty() || affine_rank(on) < d - 1) continue;
    Facet f = detail::restrict_to_hyperplane(hs, i, d, on);
    if (!(f.volume_dm1 > kGeomTol)) continue;
    kept.push_back(hs[i]);
    facets->push_back(std::move(f));
  }
  p.halfspaces_ = std::move(kept);
  p.status_ = PolytopeStatus::Full;
  p.vertices_ = std::move(verts);
  p.facets_ = std::move(facets);
  return p;
}

namespace detail {

inline Facet restrict_to_hyperplane(const std::vector<HalfSpace>& hs, std::size_t i, int d,
                                    const std::vector<Vector>& vertices) {
  Facet f;
  f.supporting = hs[i];
  f.vertices = vertices;
  f.origin = hs[i].offset * hs[i].normal;
  f.tangent = complement_basis(hs[i].normal);
  if (d == 1) {
    f.local = point_polytope();
    f.volume_dm1 = 1.0;
    return f;
  }
  std::vector<HalfSpace> local;
  for (std::size_t j = 0; j < hs.size(); ++j) {
    if (j == i) continue;
    Vector a = f.tangent.transpose() * hs[j].normal;
    const double b = hs[j].offset - hs[j].normal.dot(f.origin);
    if (a.norm() <= kGeomTol) continue;  // parallel to the facet; satisfied on it since the facet is nonempty
    local.push_back({std::move(a), b});
  }
  f.local = make_canonical(std::move(local), d - 1, false, false);
  f.volume_dm1 = volume(f.local);
  return f;
}

}  // namespace detail

/// Canonical H-representation of raw half-spaces.
///
/// Normals are scaled to unit length, duplicate normals merged keeping the
/// smallest offset and redundant half-spaces dropped. Throws UnboundedPolytope
/// or EmptyPolytope. A lower-dimensional result is returned with status
/// Degenerate.
inline HPolytope normalize(std::vector<HalfSpace> raw, int d) { return make_canonical(std::move(raw), d, true, true); }

/// All vertices, lexicographically ordered.
inline std::vector<Vector> vertices(const HPolytope& p) {
  if (p.is_empty()) throw Error(ErrorKind::EmptyPolytope, "polytope has no points");
  if (p.is_degenerate()) throw Error(ErrorKind::DegeneratePolytope, "polytope has empty interior");
  return p.vertex_cache();
}

/// d-volume via the pyramid decomposition over facets; 0 for empty or degenerate input.
inline double volume(const HPolytope& p) {
  if (!p.is_full()) return 0.0;
  const int d = p.dimension();
  if (d == 0) return 1.0;
  const auto& vs = p.vertex_cache();
  if (d == 1) {
    auto [lo, hi] = std::minmax_element(vs.begin(), vs.end(), [](const Vector& a, const Vector& b) { return a[0] < b[0]; });
    return (*hi)[0] - (*lo)[0];
  }
  const Vector c = centroid(vs);
  double sum = 0.0;
  for (const auto& f : p.facet_cache()) sum += f.supporting.slack(c) * f.volume_dm1;
  return sum / d;
}

inline const std::vector<Facet>& facets(const HPolytope& p) { return p.facet_cache(); }

/// Facet whose outward normal matches `normal` within kGeomTol, if any.
inline const Facet* find_facet(const HPolytope& p, const Vector& normal) {
  for (const auto& f : p.facet_cache())
    if (detail::same_direction(f.normal(), normal)) return &f;
  return nullptr;
}

inline std::optional<Facet> parallel_facet(const HPolytope& p, const Facet& f) {
  const Facet* self = find_facet(p, f.normal());
  if (self == nullptr || std::abs(self->supporting.offset - f.supporting.offset) > detail::feas_tol(f.supporting.offset))
    throw Error(ErrorKind::FacetNotInPolytope, "facet does not support this polytope");
  if (const Facet* par = find_facet(p, -f.normal())) return *par;
  return std::nullopt;
}

/// Minkowski's criterion: symmetric iff every facet has a parallel facet of
/// equal (d-1)-volume (within tol).
///
/// The witness prefers a facet that has a parallel partner, taking the pair
/// with the largest volume gap (first one in facet order on ties). Only when
/// every paired facet is balanced does it fall back to the largest unpaired
/// facet, whose parallel is the empty facet of volume 0.
inline SymmetryReport is_symmetric(const HPolytope& p, double tol = kGeomTol) {
  if (p.is_empty()) throw Error(ErrorKind::EmptyPolytope, "polytope has no points");
  if (p.is_degenerate()) throw Error(ErrorKind::DegeneratePolytope, "polytope has empty interior");
  const auto& fs = p.facet_cache();
  SymmetryReport report;
  double paired_gap = -1.0, unpaired_gap = -1.0, worst = 0.0;
  std::size_t paired_i = 0, unpaired_i = 0;
  const Facet* paired_j = nullptr;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const Facet* par = find_facet(p, -fs[i].normal());
    const double gap = par ? std::abs(fs[i].volume_dm1 - par->volume_dm1) : fs[i].volume_dm1;
    worst = std::max(worst, gap);
    if (par && gap > paired_gap) {
      paired_gap = gap;
      paired_i = i;
      paired_j = par;
    }
    if (!par && gap > unpaired_gap) {
      unpaired_gap = gap;
      unpaired_i = i;
    }
  }
  if (worst <= tol) {
    report.symmetric = true;
    report.margin = worst;
    return report;
  }
  report.symmetric = false;
  if (paired_j != nullptr && paired_gap > tol) {
    report.witness.emplace(fs[paired_i], *paired_j);
    report.margin = paired_gap;
  } else {
    report.witness.emplace(fs[unpaired_i], std::nullopt);
    report.margin = unpaired_gap;
  }
  return report;
}

/// Omega ∩ (Omega + t): each offset b_i becomes min(b_i, b_i + <a_i, t>).
/// Empty or lower-dimensional results are returned flagged, never thrown.
inline HPolytope translate_intersection(const HPolytope& p, const Vector& t) {
  if (t.size() != p.dimension()) throw Error(ErrorKind::InvalidArgument, "shift dimension mismatch");
  if (p.is_empty()) return p;
  std::vector<HalfSpace> hs;
  hs.reserve(p.halfspaces().size());
  for (const auto& h : p.halfspaces()) hs.push_back({h.normal, std::min(h.offset, h.offset + h.normal.dot(t))});
  return make_canonical(std::move(hs), p.dimension(), false, false);
}

/// P + v
inline HPolytope translate(const HPolytope& p, const Vector& v) {
  std::vector<HalfSpace> hs;
  for (const auto& h : p.halfspaces()) hs.push_back({h.normal, h.offset + h.normal.dot(v)});
  return make_canonical(std::move(hs), p.dimension(), false, false);
}

/// The facet as a (degenerate) polytope in the ambient space.
inline HPolytope facet_polytope(const Facet& f) {
  std::vector<HalfSpace> hs{f.supporting, {-f.supporting.normal, -f.supporting.offset}};
  for (const auto& h : f.local.halfspaces()) {
    Vector a = f.tangent * h.normal;
    hs.push_back({a, h.offset + a.dot(f.origin)});
  }
  return make_canonical(std::move(hs), static_cast<int>(f.supporting.normal.size()), false, false);
}

namespace detail {

/// Euclidean distance from x to the polytope: the projection lies in the
/// relative interior of some face, so the closest feasible projection onto
/// the affine hulls of all constraint subsets of size <= d is exact.
inline double distance_to(const HPolytope& q, const Vector& x) {
  if (q.contains(x)) return 0.0;
  const auto& hs = q.halfspaces();
  const int d = q.dimension();
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= std::min<int>(d, static_cast<int>(hs.size())); ++k) {
    for_each_subset(static_cast<int>(hs.size()), k, [&](const std::vector<int>& idx) {
      Matrix a(k, d);
      Vector r(k);
      for (int i = 0; i < k; ++i) {
        const auto& h = hs[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        a.row(i) = h.normal.transpose();
        r[i] = h.normal.dot(x) - h.offset;
      }
      Matrix gram = a * a.transpose();
      Eigen::FullPivLU<Matrix> lu(gram);
      lu.setThreshold(1e-12);
      if (lu.rank() < k) return;
      Vector y = x - a.transpose() * lu.solve(r);
      if (!q.contains(y)) return;
      best = std::min(best, (y - x).norm());
    });
  }
  return best;
}

}  // namespace detail

/// Hausdorff distance between bounded nonempty polytopes (degenerate allowed).
/// For convex polytopes the maximum of the distance to the other set is
/// attained at a vertex.
inline double hausdorff_distance(const HPolytope& p, const HPolytope& q) {
  if (p.is_empty() || q.is_empty()) throw Error(ErrorKind::EmptyPolytope, "Hausdorff distance needs nonempty sets");
  if (p.dimension() != q.dimension()) throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  double d = 0.0;
  for (const auto& v : p.vertex_cache()) d = std::max(d, detail::distance_to(q, v));
  for (const auto& v : q.vertex_cache()) d = std::max(d, detail::distance_to(p, v));
  return d;
}

/// Deterministic polar sample of the closed ball {|t| <= radius} in R^d:
/// the origin plus n radial shells, each carrying the directions of the
/// (n+1)^d grid points on the surface of [-1,1]^d.
inline std::vector<Vector> ball_samples(int d, double radius, int n) {
  std::vector<Vector> out{Vector::Zero(d)};
  if (radius <= 0.0 || n <= 0 || d == 0) return out;
  if (d == 1) {
    for (int k = -n; k <= n; ++k)
      if (k != 0) out.push_back(make_vector({radius * k / n}));
    return out;
  }
  std::vector<Vector> dirs;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    Vector g(d);
    bool surface = false;
    for (int j = 0; j < d; ++j) {
      g[j] = -1.0 + 2.0 * idx[static_cast<std::size_t>(j)] / n;
      if (idx[static_cast<std::size_t>(j)] == 0 || idx[static_cast<std::size_t>(j)] == n) surface = true;
    }
    if (surface) dirs.push_back(g.normalized());
    int j = 0;
    while (j < d && ++idx[static_cast<std::size_t>(j)] > n) idx[static_cast<std::size_t>(j++)] = 0;
    if (j == d) break;
  }
  for (int k = 1; k <= n; ++k)
    for (const auto& u : dirs) out.push_back(radius * k / n * u);
  return out;
}

struct MarginSample {
  double value = 0.0;
  Vector argmin;
};

/// Sampled min over |t| <= eps of |V(A(t)) - V(B(t))| for the witness pair
/// of is_symmetric; a facet that disappears from Omega_t counts as volume 0.
inline MarginSample nonsymmetry_margin_scan(const HPolytope& p, double eps, int n_samples) {
  const auto report = is_symmetric(p);
  if (report.symmetric || !report.witness) throw Error(ErrorKind::SymmetricInput, "polytope is centrally symmetric");
  const Vector na = report.witness->first.normal();
  const std::optional<Vector> nb =
      report.witness->second ? std::optional<Vector>(report.witness->second->normal()) : std::nullopt;
  MarginSample best{std::numeric_limits<double>::infinity(), Vector::Zero(p.dimension())};
  for (const auto& t : ball_samples(p.dimension(), eps, n_samples)) {
    const HPolytope q = translate_intersection(p, t);
    const Facet* fa = find_facet(q, na);
    const Facet* fb = nb ? find_facet(q, *nb) : nullptr;
    const double gap = std::abs((fa ? fa->volume_dm1 : 0.0) - (fb ? fb->volume_dm1 : 0.0));
    if (gap < best.value) best = {gap, t};
  }
  return best;
}

inline double nonsymmetry_margin(const HPolytope& p, double eps, int n_samples) {
  return nonsymmetry_margin_scan(p, eps, n_samples).value;
}

/// Bisection for the largest eps in [0, eps_max] whose sampled margin stays
/// at or above fraction * margin(0).
inline double persistence_radius(const HPolytope& p, double eps_max, int n_samples, double fraction = 0.75,
                                 int iterations = 30) {
  const double target = fraction * nonsymmetry_margin(p, 0.0, n_samples);
  if (nonsymmetry_margin(p, eps_max, n_samples) >= target) return eps_max;
  double lo = 0.0, hi = eps_max;
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    (nonsymmetry_margin(p, mid, n_samples) >= target ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace gonb
