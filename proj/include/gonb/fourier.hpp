#pragma once

#include "gonb/parallel.hpp"
#include "gonb/polytope.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace gonb {

// ---------------------------------------------------------------------------
// Divided differences of exp
// ---------------------------------------------------------------------------

/// Clusters of three or more nodes with spread below this are evaluated by
/// the confluent series about their mean. Every recursion level divides by
/// the spread and amplifies rounding in e^{z} by |z|/spread, so the series
/// (accurate to a few ulps up to spreads of order one) takes over early.
/// Two-node differences use the cancellation-free expm1 ratio at any spread.
inline constexpr double kClusterTol = 1.0;

inline double cluster_threshold(std::size_t k) { return k <= 2 ? 0.0 : kClusterTol; }

enum class DdBranch { Auto, Recursive, Series };

namespace detail {

/// (e^h - 1) / h without cancellation for small |h|.
inline Complex expm1_ratio(Complex h) {
  if (std::abs(h) < 1e-5) return 1.0 + h * (0.5 + h * (1.0 / 6.0 + h / 24.0));
  const double x = h.real(), y = h.imag();
  const double s = std::sin(0.5 * y);
  const Complex num(std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y));
  return num / h;
}

/// Sum_{m>=0} h_m(w) / (m+n)!, w = z - mean(z), times e^{mean}. h_m is the
/// complete homogeneous symmetric polynomial; |h_m| <= C(m+n,n) r^m bounds
/// the tail so the loop stops once r^m / (m! n!) is below 1e-17 of the sum.
inline Complex dd_series(std::span<const Complex> z) {
  const std::size_t n = z.size() - 1;
  Complex mu = 0.0;
  for (auto zi : z) mu += zi;
  mu /= static_cast<double>(z.size());
  std::vector<Complex> w(z.size());
  double r = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    w[j] = z[j] - mu;
    r = std::max(r, std::abs(w[j]));
  }
  double inv_nfact = 1.0;
  for (std::size_t k = 2; k <= n; ++k) inv_nfact /= static_cast<double>(k);
  // h[j] holds h_m(w_0..w_j) for the current m.
  std::vector<Complex> h(z.size(), Complex(1.0));
  double coef = inv_nfact;  // 1/(m+n)!
  Complex sum = h[n] * coef;
  double bound = inv_nfact;  // r^m/(m! n!)
  for (std::size_t m = 1; m < 1000; ++m) {
    h[0] *= w[0];
    for (std::size_t j = 1; j < h.size(); ++j) h[j] = h[j - 1] + w[j] * h[j];
    coef /= static_cast<double>(m + n);
    sum += h[n] * coef;
    bound *= r / static_cast<double>(m);
    if (static_cast<double>(m) > r && bound <= 1e-17 * std::abs(sum)) break;
    if (bound == 0.0) break;
  }
  return std::exp(mu) * sum;
}

class DividedDifference {
 public:
  DividedDifference(std::span<const Complex> z, DdBranch branch) : z_(z), branch_(branch), memo_(std::size_t{1} << z.size()) {}

  Complex eval(std::uint32_t mask) {
    auto& slot = memo_[mask];
    if (slot) return *slot;
    slot = compute(mask);
    return *slot;
  }

 private:
  Complex compute(std::uint32_t mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < z_.size(); ++i)
      if (mask & (1u << i)) idx.push_back(i);
    if (idx.size() == 1) return std::exp(z_[idx[0]]);
    std::size_t bi = idx[0], bj = idx[1];
    double spread = -1.0;
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        const double s = std::abs(z_[idx[a]] - z_[idx[b]]);
        if (s > spread) {
          spread = s;
          bi = idx[a];
          bj = idx[b];
        }
      }
    if (branch_ == DdBranch::Series || (branch_ == DdBranch::Auto && spread < cluster_threshold(idx.size()))) {
      std::vector<Complex> sub;
      for (auto i : idx) sub.push_back(z_[i]);
      return dd_series(sub);
    }
    if (idx.size() == 2) return std::exp(z_[bi]) * expm1_ratio(z_[bj] - z_[bi]);
    return (eval(mask & ~(1u << bi)) - eval(mask & ~(1u << bj))) / (z_[bj] - z_[bi]);
  }

  std::span<const Complex> z_;
  DdBranch branch_;
  std::vector<std::optional<Complex>> memo_;
};

}  // namespace detail

/// Divided difference of exp at the nodes z (any multiplicity in Auto/Series).
inline Complex divided_difference_exp(std::span<const Complex> z, DdBranch branch = DdBranch::Auto) {
  if (z.empty() || z.size() > 20) throw Error(ErrorKind::InvalidArgument, "divided difference needs 1..20 nodes");
  detail::DividedDifference dd(z, branch);
  return dd.eval(static_cast<std::uint32_t>((std::uint64_t{1} << z.size()) - 1));
}

// ---------------------------------------------------------------------------
// Transforms of simplices and polytopes
// ---------------------------------------------------------------------------

struct Simplex {
  std::vector<Vector> vertices;  // d+1 points
  double abs_det = 0.0;          // d! * volume
};

using Triangulation = std::vector<Simplex>;

namespace detail {

inline double simplex_abs_det(const std::vector<Vector>& v) {
  const auto d = static_cast<Eigen::Index>(v.size()) - 1;
  if (d == 0) return 1.0;
  Matrix m(d, d);
  for (Eigen::Index j = 0; j < d; ++j) m.col(j) = v[static_cast<std::size_t>(j + 1)] - v[0];
  return std::abs(m.determinant());
}

inline Complex simplex_transform(const Simplex& s, const Vector& lambda) {
  Complex z[21];
  const std::size_t n = s.vertices.size();
  for (std::size_t j = 0; j < n; ++j) z[j] = Complex(0.0, -kTwoPi * lambda.dot(s.vertices[j]));
  return s.abs_det * divided_difference_exp(std::span<const Complex>(z, n));
}

}  // namespace detail

/// Fan triangulation: centroid of the vertices coned over the recursively
/// triangulated facets. Empty for empty or degenerate polytopes.
inline Triangulation triangulate(const HPolytope& p) {
  Triangulation out;
  if (!p.is_full()) return out;
  const int d = p.dimension();
  const auto& vs = p.vertex_cache();
  if (d == 0) {
    out.push_back({{Vector(0)}, 1.0});
    return out;
  }
  if (d == 1) {
    auto [lo, hi] = std::minmax_element(vs.begin(), vs.end(), [](const Vector& a, const Vector& b) { return a[0] < b[0]; });
    out.push_back({{*lo, *hi}, (*hi)[0] - (*lo)[0]});
    return out;
  }
  const Vector c = centroid(vs);
  for (const auto& f : p.facet_cache()) {
    for (const auto& sub : triangulate(f.local)) {
      Simplex s;
      s.vertices.push_back(c);
      for (const auto& y : sub.vertices) s.vertices.push_back(f.origin + f.tangent * y);
      s.abs_det = detail::simplex_abs_det(s.vertices);
      out.push_back(std::move(s));
    }
  }
  return out;
}

/// Integral of e^{-2 pi i <lambda, x>} over the simplex with the given d+1
/// vertices: d! vol(T) times the divided difference of exp at
/// z_j = -2 pi i <lambda, v_j>.
inline Complex ft_simplex(const std::vector<Vector>& simplex_vertices, const Vector& lambda) {
  if (simplex_vertices.empty()) throw Error(ErrorKind::InvalidArgument, "simplex needs vertices");
  const auto d = lambda.size();
  if (static_cast<Eigen::Index>(simplex_vertices.size()) != d + 1)
    throw Error(ErrorKind::InvalidArgument, "simplex needs d+1 vertices");
  for (const auto& v : simplex_vertices)
    if (v.size() != d) throw Error(ErrorKind::InvalidArgument, "vertex dimension mismatch");
  Simplex s{simplex_vertices, detail::simplex_abs_det(simplex_vertices)};
  double scale = 0.0;
  for (const auto& v : simplex_vertices) scale = std::max(scale, (v - simplex_vertices[0]).norm());
  if (!(s.abs_det > 1e-14 * std::pow(std::max(scale, 1e-300), static_cast<double>(d))))
    throw Error(ErrorKind::DegenerateSimplex, "simplex vertices are affinely dependent");
  return detail::simplex_transform(s, lambda);
}

inline Complex ft_indicator(const Triangulation& tri, const Vector& lambda) {
  Complex sum = 0.0;
  for (const auto& s : tri) sum += detail::simplex_transform(s, lambda);
  return sum;
}

/// Fourier transform of the indicator of P at lambda; 0 for degenerate P.
inline Complex ft_indicator(const HPolytope& p, const Vector& lambda) {
  if (lambda.size() != p.dimension()) throw Error(ErrorKind::InvalidArgument, "frequency dimension mismatch");
  return ft_indicator(triangulate(p), lambda);
}

/// Surface-measure transform of a facet: chart phase times the
/// (d-1)-dimensional indicator transform of the facet's local polytope.
inline Complex ft_facet_measure(const Facet& f, const Vector& lambda) {
  if (!(f.volume_dm1 > kGeomTol)) throw Error(ErrorKind::DegenerateFacet, "facet has zero (d-1)-volume");
  return phase(lambda.dot(f.origin)) * ft_indicator(f.local, Vector(f.tangent.transpose() * lambda));
}

/// Triangulations of P and of all its facets, built once for repeated evaluation.
class PolytopeTransform {
 public:
  explicit PolytopeTransform(const HPolytope& p) : poly_(p), tri_(triangulate(p)) {
    for (const auto& f : p.facet_cache()) facet_tri_.push_back(triangulate(f.local));
  }

  const HPolytope& polytope() const { return poly_; }
  Complex operator()(const Vector& lambda) const { return ft_indicator(tri_, lambda); }

  Complex facet(std::size_t i, const Vector& lambda) const {
    const auto& f = poly_.facet_cache()[i];
    return phase(lambda.dot(f.origin)) * ft_indicator(facet_tri_[i], Vector(f.tangent.transpose() * lambda));
  }

 private:
  HPolytope poly_;
  Triangulation tri_;
  std::vector<Triangulation> facet_tri_;
};

// ---------------------------------------------------------------------------
// Quadrature oracle
// ---------------------------------------------------------------------------

enum class QuadratureRule {
  /// Midpoint grid on the bounding box with an inside-P indicator.
  Midpoint,
  /// Slice along x_1 with composite 20-point Gauss-Legendre between vertex
  /// breakpoints, recurse on the slice, integrate the last axis exactly.
  GaussSliced,
};

namespace detail {

/// Exact integral of e^{-2 pi i mu y} over [lo, hi].
inline Complex interval_transform(double lo, double hi, double mu) {
  const double len = hi - lo;
  if (!(len > 0.0)) return 0.0;
  const double x = std::numbers::pi * mu * len;
  const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return len * sinc * phase(mu * 0.5 * (lo + hi));
}

inline Complex sliced_integral(const std::vector<HalfSpace>& hs, int d, const Vector& lambda, int n_per_axis) {
  if (d == 1) {
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    for (const auto& h : hs) {
      const double a = h.normal[0];
      if (std::abs(a) <= 1e-14) {
        if (h.offset < -1e-12) return 0.0;
      } else if (a > 0) {
        hi = std::min(hi, h.offset / a);
      } else {
        lo = std::max(lo, h.offset / a);
      }
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) return 0.0;
    return interval_transform(lo, hi, lambda[0]);
  }
  const auto verts = enumerate_vertices(hs, d);
  if (verts.size() < 2) return 0.0;
  std::vector<double> cuts;
  for (const auto& v : verts) cuts.push_back(v[0]);
  std::sort(cuts.begin(), cuts.end());
  const double total = cuts.back() - cuts.front();
  if (!(total > 0.0)) return 0.0;
  const Vector rest = lambda.tail(d - 1);
  auto slice = [&](double x) -> Complex {
    std::vector<HalfSpace> sub;
    for (const auto& h : hs) {
      Vector a = h.normal.tail(d - 1);
      const double b = h.offset - h.normal[0] * x;
      if (a.norm() <= 1e-14) {
        if (b < -1e-12) return 0.0;
        continue;
      }
      sub.push_back({std::move(a), b});
    }
    return phase(lambda[0] * x) * sliced_integral(sub, d - 1, rest, n_per_axis);
  };
  using Gauss = boost::math::quadrature::gauss<double, 20>;
  Complex sum = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (!(b - a > 1e-15 * total)) continue;
    const int pieces = std::max(1, static_cast<int>(std::ceil(n_per_axis * (b - a) / (20.0 * total))));
    const double h = (b - a) / pieces;
    for (int p = 0; p < pieces; ++p) sum += Gauss::integrate(slice, a + p * h, a + (p + 1) * h);
  }
  return sum;
}

}  // namespace detail

/// Brute-force transform of the indicator of P, independent of the
/// triangulation and divided-difference kernel.
inline Complex ft_indicator_quadrature(const HPolytope& p, const Vector& lambda, int n_per_axis,
                                       QuadratureRule rule = QuadratureRule::GaussSliced) {
  if (n_per_axis < 2) throw Error(ErrorKind::InvalidArgument, "quadrature needs n_per_axis >= 2");
  if (lambda.size() != p.dimension()) throw Error(ErrorKind::InvalidArgument, "frequency dimension mismatch");
  if (!p.is_full()) return 0.0;
  const int d = p.dimension();
  if (d == 0) return 1.0;
  if (rule == QuadratureRule::GaussSliced) return detail::sliced_integral(p.halfspaces(), d, lambda, n_per_axis);

  const auto& vs = p.vertex_cache();
  Vector lo = vs.front(), hi = vs.front();
  for (const auto& v : vs) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const Vector h = (hi - lo) / n_per_axis;
  std::vector<std::vector<Complex>> axis_phase(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < n_per_axis; ++i) axis_phase[static_cast<std::size_t>(j)].push_back(phase(lambda[j] * (lo[j] + (i + 0.5) * h[j])));
  const double cell = h.prod();
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  Vector x(d);
  Complex sum = 0.0;
  while (true) {
    Complex w = 1.0;
    for (int j = 0; j < d; ++j) {
      x[j] = lo[j] + (idx[static_cast<std::size_t>(j)] + 0.5) * h[j];
      w *= axis_phase[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
    }
    if (p.contains(x, 0.0)) sum += w;
    int j = 0;
    while (j < d && ++idx[static_cast<std::size_t>(j)] == n_per_axis) idx[static_cast<std::size_t>(j++)] = 0;
    if (j == d) break;
  }
  return sum * cell;
}

// ---------------------------------------------------------------------------
// Frames, cones and the divergence decomposition
// ---------------------------------------------------------------------------

/// Rigid frame x' = basis^T (x - origin). The first basis vector e1 is the
/// outward normal of the distinguished facet A, which therefore lies on
/// {x'_1 = 0}; its parallel B lies on {x'_1 = -scale}. Lengths, volumes and
/// |transforms| are unchanged by the frame.
struct AxisFrame {
  Vector origin;
  Matrix basis;
  double scale = 1.0;

  int dimension() const { return static_cast<int>(origin.size()); }
  Vector axis() const { return basis.col(0); }
  Vector point_to_frame(const Vector& x) const { return basis.transpose() * (x - origin); }
  Vector vector_to_frame(const Vector& v) const { return basis.transpose() * v; }
  Vector vector_from_frame(const Vector& v) const { return basis * v; }

  HPolytope to_frame(const HPolytope& p) const {
    if (p.dimension() != dimension()) throw Error(ErrorKind::FrameMismatch, "frame dimension differs from polytope");
    std::vector<HalfSpace> hs;
    for (const auto& h : p.halfspaces()) hs.push_back({basis.transpose() * h.normal, h.offset - h.normal.dot(origin)});
    return make_canonical(std::move(hs), p.dimension(), false, false);
  }

  /// Frame for facet A of P with optional parallel B.
  static AxisFrame for_facet(const HPolytope& p, const Facet& a) {
    AxisFrame f;
    f.origin = centroid(a.vertices);
    f.basis = frame_with_axis(a.normal());
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& v : p.vertex_cache()) lowest = std::min(lowest, a.normal().dot(v));
    f.scale = a.supporting.offset - lowest;
    return f;
  }
};

/// C(omega) = {lambda' : |lambda'_j| <= omega |lambda'_1|, j >= 2} in frame coordinates.
struct ConeRegion {
  double omega = 0.0;
  AxisFrame frame;

  bool contains_frame(const Vector& lf) const {
    for (Eigen::Index j = 1; j < lf.size(); ++j)
      if (std::abs(lf[j]) > omega * std::abs(lf[0]) * (1.0 + 1e-12)) return false;
    return true;
  }
  bool contains(const Vector& lambda) const { return contains_frame(frame.vector_to_frame(lambda)); }
};

struct DivergenceResidual {
  /// G = -2 pi i lambda_1 chi^(lambda) - sigma^_A(lambda) + sigma^_B(lambda)
  Complex residual;
  /// Sum over the other facets of <e1, n_F> sigma^_F(lambda); equals residual.
  Complex facet_sum;
};

/// Divergence decomposition of a polytope expressed in an AxisFrame.
class ResidualEvaluator {
 public:
  ResidualEvaluator(const HPolytope& p_t, const AxisFrame& frame) : ft_(frame.to_frame(p_t)) {
    const auto& fs = ft_.polytope().facet_cache();
    const int d = frame.dimension();
    Vector e1 = Vector::Zero(d);
    e1[0] = 1.0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (detail::same_direction(fs[i].normal(), e1)) a_ = i;
      else if (detail::same_direction(fs[i].normal(), -e1)) b_ = i;
    }
    if (!a_) throw Error(ErrorKind::FrameMismatch, "no facet with outward normal +e1 in frame");
  }

  const HPolytope& frame_polytope() const { return ft_.polytope(); }

  /// lambda in frame coordinates.
  Complex residual(const Vector& lf) const {
    Complex g = Complex(0.0, -kTwoPi * lf[0]) * ft_(lf) - ft_.facet(*a_, lf);
    if (b_) g += ft_.facet(*b_, lf);
    return g;
  }

  DivergenceResidual evaluate(const Vector& lf) const {
    DivergenceResidual out{residual(lf), 0.0};
    const auto& fs = ft_.polytope().facet_cache();
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (i == *a_ || (b_ && i == *b_)) continue;
      out.facet_sum += fs[i].normal()[0] * ft_.facet(i, lf);
    }
    return out;
  }

  /// |sigma^_A(lambda) - sigma^_B(lambda)| lower bound valid for every lambda_1
  /// with the same transverse part: ||sigma^_A| - |sigma^_B||.
  double facet_gap(const Vector& lf) const {
    const double a = std::abs(ft_.facet(*a_, lf));
    const double b = b_ ? std::abs(ft_.facet(*b_, lf)) : 0.0;
    return std::abs(a - b);
  }

 private:
  PolytopeTransform ft_;
  std::optional<std::size_t> a_, b_;
};

inline DivergenceResidual divergence_residual(const HPolytope& p_t, const AxisFrame& frame, const Vector& lambda_frame) {
  if (p_t.dimension() != frame.dimension()) throw Error(ErrorKind::FrameMismatch, "frame dimension differs from polytope");
  if (lambda_frame.size() != frame.dimension()) throw Error(ErrorKind::InvalidArgument, "frequency dimension mismatch");
  return ResidualEvaluator(p_t, frame).evaluate(lambda_frame);
}

/// V_{d-2}(boundary of F) / (2 pi) * |lambda|^{-1} / |sin angle(lambda, n_F)|.
inline double sigma_bound(const Facet& f, const Vector& lambda) {
  const double len = lambda.norm();
  if (!(len > 0.0)) throw Error(ErrorKind::ParallelDirection, "lambda must be nonzero");
  const double sin_theta = (lambda - lambda.dot(f.normal()) * f.normal()).norm() / len;
  if (sin_theta < kGeomTol) throw Error(ErrorKind::ParallelDirection, "lambda is parallel to the facet normal");
  double ridge = 0.0;
  for (const auto& r : f.local.facet_cache()) ridge += r.volume_dm1;
  return ridge / kTwoPi / len / sin_theta;
}

/// Sampling of the cone C(omega) and of the shift ball |t| <= t_radius.
///
/// |lambda'_1| is log-spaced on [lambda_min, lambda_max] with both signs;
/// transverse slopes lambda'_j / |lambda'_1| run over the multiples of
/// cross_step inside [-omega, omega], so cones with larger omega sample a
/// superset of directions.
struct ScanGrid {
  double lambda_min = 10.0;
  double lambda_max = 200.0;
  int n_axial = 40;
  double cross_step = 0.025;
  double t_radius = 0.0;
  int n_t = 4;
};

inline std::vector<double> log_space(double lo, double hi, int n) {
  std::vector<double> out;
  if (n <= 1) return {lo};
  for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return out;
}

inline std::vector<Vector> cone_lambda_samples(int d, double omega, const ScanGrid& grid) {
  const int k_max = static_cast<int>(std::floor(omega / grid.cross_step + 1e-9));
  std::vector<Vector> slopes;
  std::vector<int> idx(static_cast<std::size_t>(std::max(d - 1, 0)), -k_max);
  while (true) {
    Vector s(d - 1);
    for (int j = 0; j < d - 1; ++j) s[j] = idx[static_cast<std::size_t>(j)] * grid.cross_step;
    slopes.push_back(s);
    int j = 0;
    while (j < d - 1 && ++idx[static_cast<std::size_t>(j)] > k_max) idx[static_cast<std::size_t>(j++)] = -k_max;
    if (j == d - 1) break;
  }
  std::vector<Vector> out;
  for (double sign : {1.0, -1.0})
    for (double l1 : log_space(grid.lambda_min, grid.lambda_max, grid.n_axial))
      for (const auto& s : slopes) {
        Vector lf(d);
        lf[0] = sign * l1;
        lf.tail(d - 1) = l1 * s;
        out.push_back(lf);
      }
  return out;
}

struct FieldSample {
  Vector t;       // frame coordinates
  Vector lambda;  // frame coordinates
  Complex value;
};

/// G_t(lambda) on the cone scan, rows ordered by (t index, lambda index).
inline std::vector<FieldSample> cone_residual_field(const HPolytope& p, const AxisFrame& frame, double omega,
                                                    const ScanGrid& grid, double* min_sin_theta = nullptr) {
  if (!(omega > 0.0)) throw Error(ErrorKind::InvalidArgument, "omega must be positive");
  const int d = p.dimension();
  const auto ts = ball_samples(d, grid.t_radius, grid.n_t);
  const auto ls = cone_lambda_samples(d, omega, grid);

  const Vector e1 = frame.axis();
  double worst = 1.0;
  for (const auto& f : p.facet_cache()) {
    if (detail::same_direction(f.normal(), e1) || detail::same_direction(f.normal(), -e1)) continue;
    for (const auto& lf : ls) {
      const Vector l = frame.vector_from_frame(lf);
      worst = std::min(worst, (l - l.dot(f.normal()) * f.normal()).norm() / l.norm());
    }
  }
  if (min_sin_theta) *min_sin_theta = worst;
  if (worst < kGeomTol) throw Error(ErrorKind::ConeTooWide, "a facet normal is parallel to a scanned cone direction");

  std::vector<FieldSample> rows(ts.size() * ls.size());
  parallel_for(ts.size(), [&](std::size_t ti) {
    const ResidualEvaluator ev(translate_intersection(p, frame.vector_from_frame(ts[ti])), frame);
    for (std::size_t li = 0; li < ls.size(); ++li) rows[ti * ls.size() + li] = {ts[ti], ls[li], ev.residual(ls[li])};
  });
  return rows;
}

struct ConeConstant {
  double C = 0.0;
  Vector t_at;       // frame coordinates
  Vector lambda_at;  // frame coordinates
  double min_sin_theta = 1.0;
  std::size_t samples = 0;
};

/// Sampled sup of |lambda_1| |G_t(lambda)| over the cone and the shift ball.
inline ConeConstant cone_constant(const HPolytope& p, const AxisFrame& frame, double omega, const ScanGrid& grid) {
  ConeConstant out;
  const auto rows = cone_residual_field(p, frame, omega, grid, &out.min_sin_theta);
  out.samples = rows.size();
  out.t_at = rows.front().t;
  out.lambda_at = rows.front().lambda;
  for (const auto& r : rows) {
    const double v = std::abs(r.lambda[0]) * std::abs(r.value);
    if (v > out.C) {
      out.C = v;
      out.t_at = r.t;
      out.lambda_at = r.lambda;
    }
  }
  return out;
}

}  // namespace gonb
