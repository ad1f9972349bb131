#pragma once

#include "gonb/fourier.hpp"
#include "gonb/parallel.hpp"
#include "gonb/polytope.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace gonb {

// ---------------------------------------------------------------------------
// STFT of the normalized indicator window
// ---------------------------------------------------------------------------

/// V_gg(t, lambda) for g = |Omega|^{-1/2} chi_Omega, which equals
/// |Omega|^{-1} times the transform of chi_{Omega ∩ (Omega + t)}.
class IndicatorStft {
 public:
  explicit IndicatorStft(HPolytope window) : window_(std::move(window)), volume_(volume(window_)) {
    if (!(volume_ > kGeomTol)) throw Error(ErrorKind::ZeroVolumeWindow, "window polytope has zero volume");
  }

  const HPolytope& window() const { return window_; }
  double window_volume() const { return volume_; }

  PolytopeTransform at_shift(const Vector& t) const { return PolytopeTransform(translate_intersection(window_, t)); }

  Complex operator()(const Vector& t, const Vector& lambda) const { return at_shift(t)(lambda) / volume_; }

 private:
  HPolytope window_;
  double volume_;
};

inline Complex stft_indicator(const HPolytope& p, const Vector& t, const Vector& lambda) {
  if (t.size() != p.dimension() || lambda.size() != p.dimension())
    throw Error(ErrorKind::InvalidArgument, "time/frequency dimension mismatch");
  return IndicatorStft(p)(t, lambda);
}

// ---------------------------------------------------------------------------
// Time-frequency sets
// ---------------------------------------------------------------------------

struct TimeFrequencyPoint {
  Vector t;
  Vector lambda;

  Vector joined() const {
    Vector v(t.size() + lambda.size());
    v << t, lambda;
    return v;
  }
};

/// Axis-aligned box [lo, hi] (componentwise).
struct Box {
  Vector lo;
  Vector hi;

  int dimension() const { return static_cast<int>(lo.size()); }
  bool contains(const Vector& x, double tol = 1e-12) const {
    for (Eigen::Index j = 0; j < x.size(); ++j)
      if (x[j] < lo[j] - tol || x[j] > hi[j] + tol) return false;
    return true;
  }
};

/// Lattice truncation: generator rows of `basis` (2d x 2d), `shift`, `box`.
struct LatticeSpec {
  Matrix basis;
  Vector shift;
  Box box;
};

inline bool point_less(const TimeFrequencyPoint& a, const TimeFrequencyPoint& b) {
  return lex_less(a.joined(), b.joined());
}

/// Finite candidate time-frequency set with pairwise distinct points.
class TimeFrequencySet {
 public:
  static TimeFrequencySet from_points(std::vector<TimeFrequencyPoint> pts) {
    if (pts.empty()) throw Error(ErrorKind::TooFewPoints, "time-frequency set is empty");
    const auto d = pts.front().t.size();
    if (d < 1 || d > 4) throw Error(ErrorKind::InvalidArgument, "time-frequency dimension must be 1..4");
    for (const auto& p : pts)
      if (p.t.size() != d || p.lambda.size() != d || !p.t.allFinite() || !p.lambda.allFinite())
        throw Error(ErrorKind::InvalidArgument, "time-frequency points must be finite and of equal dimension");
    std::sort(pts.begin(), pts.end(), point_less);
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (pts[i].joined() == pts[i - 1].joined()) throw Error(ErrorKind::DuplicatePoint, "time-frequency points must be distinct");
    TimeFrequencySet s;
    s.box_.lo = s.box_.hi = pts.front().joined();
    for (const auto& p : pts) {
      s.box_.lo = s.box_.lo.cwiseMin(p.joined());
      s.box_.hi = s.box_.hi.cwiseMax(p.joined());
    }
    s.points_ = std::move(pts);
    return s;
  }

  static TimeFrequencySet from_lattice(const LatticeSpec& spec) {
    const auto n = spec.basis.rows();
    if (n % 2 != 0 || spec.basis.cols() != n || spec.shift.size() != n || spec.box.dimension() != n)
      throw Error(ErrorKind::InvalidArgument, "lattice basis must be 2d x 2d with matching shift and box");
    const Matrix gen = spec.basis.transpose();  // columns are generators
    Eigen::FullPivLU<Matrix> lu(gen);
    if (!lu.isInvertible()) throw Error(ErrorKind::InvalidArgument, "lattice basis is singular");
    const Matrix inv = lu.inverse();
    Vector kmin = Vector::Constant(n, std::numeric_limits<double>::infinity());
    Vector kmax = -kmin;
    for (std::uint32_t corner = 0; corner < (1u << n); ++corner) {
      Vector x(n);
      for (Eigen::Index j = 0; j < n; ++j) x[j] = (corner >> j) & 1u ? spec.box.hi[j] : spec.box.lo[j];
      const Vector k = inv * (x - spec.shift);
      kmin = kmin.cwiseMin(k);
      kmax = kmax.cwiseMax(k);
    }
    std::vector<long> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n)), k(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
      lo[static_cast<std::size_t>(j)] = static_cast<long>(std::floor(kmin[j] - 1e-9));
      hi[static_cast<std::size_t>(j)] = static_cast<long>(std::ceil(kmax[j] + 1e-9));
      k[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];
    }
    std::vector<TimeFrequencyPoint> pts;
    const auto d = n / 2;
    while (true) {
      Vector kv(n);
      for (Eigen::Index j = 0; j < n; ++j) kv[j] = static_cast<double>(k[static_cast<std::size_t>(j)]);
      const Vector x = gen * kv + spec.shift;
      if (spec.box.contains(x)) pts.push_back({x.head(d), x.tail(d)});
      Eigen::Index j = 0;
      while (j < n && ++k[static_cast<std::size_t>(j)] > hi[static_cast<std::size_t>(j)]) {
        k[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];
        ++j;
      }
      if (j == n) break;
    }
    return from_points(std::move(pts));
  }

  const std::vector<TimeFrequencyPoint>& points() const { return points_; }
  const Box& window_box() const { return box_; }
  int dimension() const { return static_cast<int>(points_.front().t.size()); }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<TimeFrequencyPoint> points_;
  Box box_;
};

/// Minimum pairwise distance in R^{2d}; 0 when a point is repeated.
inline double separation(std::span<const TimeFrequencyPoint> pts) {
  if (pts.size() < 2) throw Error(ErrorKind::TooFewPoints, "separation needs at least two points");
  std::vector<Vector> xs;
  xs.reserve(pts.size());
  for (const auto& p : pts) xs.push_back(p.joined());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) best = std::min(best, (xs[i] - xs[j]).squaredNorm());
  return std::sqrt(best);
}

inline double separation(const TimeFrequencySet& set) { return separation(std::span<const TimeFrequencyPoint>(set.points())); }

/// Max over a grid_n^{2d} grid of `box` of the distance to the nearest point.
inline double covering_radius(const TimeFrequencySet& set, const Box& box, int grid_n) {
  const int n = box.dimension();
  if (n != 2 * set.dimension()) throw Error(ErrorKind::InvalidArgument, "box must live in R^{2d}");
  if (grid_n < 1) throw Error(ErrorKind::InvalidArgument, "grid_n must be positive");
  std::vector<Vector> xs;
  for (const auto& p : set.points()) xs.push_back(p.joined());
  std::size_t total = 1;
  for (int j = 0; j < n; ++j) total *= static_cast<std::size_t>(grid_n);
  std::vector<double> far(total);
  parallel_for(total, [&](std::size_t flat) {
    Vector g(n);
    std::size_t rem = flat;
    for (int j = 0; j < n; ++j) {
      const auto i = static_cast<double>(rem % static_cast<std::size_t>(grid_n));
      rem /= static_cast<std::size_t>(grid_n);
      g[j] = grid_n == 1 ? 0.5 * (box.lo[j] + box.hi[j]) : box.lo[j] + (box.hi[j] - box.lo[j]) * i / (grid_n - 1);
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : xs) best = std::min(best, (x - g).squaredNorm());
    far[flat] = std::sqrt(best);
  });
  return *std::max_element(far.begin(), far.end());
}

// ---------------------------------------------------------------------------
// Non-vanishing certificate
// ---------------------------------------------------------------------------

struct CertificateParams {
  /// Shift-ball polar grid (per axis), shared by the margin, cylinder, cone and verification scans.
  int n_t = 4;
  /// Cone scan; its t_radius is overwritten with eps.
  ScanGrid cone{};
  double delta_initial = 0.5;
  int max_halvings = 40;
  /// delta is accepted once the cylinder gap stays >= gap_fraction * margin.
  double gap_fraction = 0.9;
  /// Cross-section grid of the cylinder S(2 delta), per axis.
  int n_w = 8;
  int n_axial_verify = 60;
  double lambda_verify_max = 200.0;
  double tol_zero = 1e-9;
};

/// Numeric constants (eps, delta, R, omega, eta, C) for which
/// V_gg(t, lambda) != 0 on S(2 delta) \ B_R for |t| <= eps, stated in the
/// rigid AxisFrame of the witness facet pair.
struct NonZeroCertificate {
  double eps = 0.0;
  double delta = 0.0;
  double R = 0.0;
  double omega = 0.0;
  double eta = 0.0;
  double C = 0.0;
  AxisFrame frame;
  double min_abs_scanned = 0.0;

  double window_volume = 0.0;
  double margin = 0.0;  // sampled min |V(A(t)) - V(B(t))| over |t| <= eps
  double facet_a_volume = 0.0;
  double facet_b_volume = 0.0;
  double min_sin_theta = 1.0;
  Vector C_t, C_lambda;
  Vector min_t, min_lambda;
  std::size_t cone_samples = 0;
  std::size_t points_scanned = 0;
  std::size_t chain_violations = 0;
  double min_chain_ratio = std::numeric_limits<double>::infinity();
  CertificateParams params;
};

namespace detail {

inline std::vector<Vector> cylinder_cross_section(int d, double radius, int n) {
  return ball_samples(d - 1, radius, n);
}

inline std::vector<Vector> verification_lambdas(int d, double R, double delta, const CertificateParams& params) {
  std::vector<Vector> out;
  const double top = std::max(R, params.lambda_verify_max);
  const auto ws = cylinder_cross_section(d, 2.0 * delta, params.n_w);
  for (double sign : {1.0, -1.0})
    for (double l1 : log_space(R, top, params.n_axial_verify))
      for (const auto& w : ws) {
        Vector lf(d);
        lf[0] = sign * l1;
        lf.tail(d - 1) = w;
        out.push_back(lf);
      }
  return out;
}

}  // namespace detail

/// Samples of the verification region (|t| <= eps) x (S(2 delta) \ B_R),
/// frame coordinates, with |V_gg|.
inline std::vector<FieldSample> certificate_field(const HPolytope& p, const NonZeroCertificate& cert) {
  const IndicatorStft stft(p);
  const int d = p.dimension();
  const auto ts = ball_samples(d, cert.eps, cert.params.n_t);
  const auto ls = detail::verification_lambdas(d, cert.R, cert.delta, cert.params);
  std::vector<FieldSample> rows(ts.size() * ls.size());
  parallel_for(ts.size(), [&](std::size_t ti) {
    const ResidualEvaluator ev(translate_intersection(p, cert.frame.vector_from_frame(ts[ti])), cert.frame);
    const PolytopeTransform ft(ev.frame_polytope());
    for (std::size_t li = 0; li < ls.size(); ++li)
      rows[ti * ls.size() + li] = {ts[ti], ls[li], ft(ls[li]) / stft.window_volume()};
  });
  return rows;
}

/// Numeric certificate that V_gg stays nonzero far out along the witness axis.
///
/// 1. frame from the Minkowski witness pair (A, B), e1 = outward normal of A;
/// 2. margin = min over the shift grid of |V(A(t)) - V(B(t))|;
/// 3. delta halves from delta_initial until ||sigma^_A(t)| - |sigma^_B(t)|| >=
///    gap_fraction * margin on the cross-section of S(2 delta); eta is the
///    sampled minimum (a bound on |sigma^_A - sigma^_B| for every lambda_1);
/// 4. C = cone_constant over |t| <= eps;
/// 5. R = max(2C/eta, cone-entry radius of S(2 delta), lambda_min of the cone scan);
/// 6. |V_gg| is scanned on the verification grid; any value <= tol_zero is a
///    ScanFailure.
inline NonZeroCertificate build_certificate(const HPolytope& p, double eps, double omega,
                                            const CertificateParams& params = {}) {
  if (!(eps > 0.0) || !(omega > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps and omega must be positive");
  const IndicatorStft stft(p);
  const int d = p.dimension();
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "certificates need d >= 2");
  const auto report = is_symmetric(p);
  if (report.symmetric || !report.witness) throw Error(ErrorKind::SymmetricInput, "window is centrally symmetric");

  NonZeroCertificate cert;
  cert.eps = eps;
  cert.omega = omega;
  cert.params = params;
  cert.params.cone.t_radius = eps;
  cert.params.cone.n_t = params.n_t;
  cert.window_volume = stft.window_volume();
  cert.facet_a_volume = report.witness->first.volume_dm1;
  cert.facet_b_volume = report.witness->second ? report.witness->second->volume_dm1 : 0.0;
  cert.frame = AxisFrame::for_facet(p, report.witness->first);

  const double sampled_margin = nonsymmetry_margin(p, eps, params.n_t);
  const auto ts = ball_samples(d, eps, params.n_t);
  std::vector<ResidualEvaluator> evs;
  for (const auto& t : ts) {
    const HPolytope q = translate_intersection(p, cert.frame.vector_from_frame(t));
    if (!q.is_full()) throw Error(ErrorKind::MarginVanished, "Omega_t degenerates inside |t| <= eps");
    try {
      evs.emplace_back(q, cert.frame);
    } catch (const Error&) {
      throw Error(ErrorKind::MarginVanished, "facet A(t) vanishes inside |t| <= eps");
    }
  }
  double frame_margin = std::numeric_limits<double>::infinity();
  for (const auto& ev : evs) frame_margin = std::min(frame_margin, ev.facet_gap(Vector::Zero(d)));
  cert.margin = std::min(sampled_margin, frame_margin);
  if (!(cert.margin > kGeomTol)) throw Error(ErrorKind::MarginVanished, "facet volume gap vanishes inside |t| <= eps");

  double delta = params.delta_initial;
  bool accepted = false;
  for (int k = 0; k <= params.max_halvings && !accepted; ++k, delta *= 0.5) {
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& w : detail::cylinder_cross_section(d, 2.0 * delta, params.n_w)) {
      Vector lf = Vector::Zero(d);
      lf.tail(d - 1) = w;
      for (const auto& ev : evs) gap = std::min(gap, ev.facet_gap(lf));
    }
    if (gap >= params.gap_fraction * cert.margin) {
      accepted = true;
      cert.delta = delta;
      cert.eta = gap;
      break;
    }
  }
  if (!accepted) throw Error(ErrorKind::MarginVanished, "no cylinder radius keeps the facet gap positive");

  const auto cone = cone_constant(p, cert.frame, omega, cert.params.cone);
  cert.C = cone.C;
  cert.C_t = cone.t_at;
  cert.C_lambda = cone.lambda_at;
  cert.min_sin_theta = cone.min_sin_theta;
  cert.cone_samples = cone.samples;

  const double cone_entry = 2.0 * cert.delta * std::sqrt(1.0 + 1.0 / (omega * omega));
  cert.R = std::max({2.0 * cert.C / cert.eta, cone_entry, cert.params.cone.lambda_min});

  const auto rows = certificate_field(p, cert);
  cert.points_scanned = rows.size();
  cert.min_abs_scanned = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    const double v = std::abs(r.value);
    if (v < cert.min_abs_scanned) {
      cert.min_abs_scanned = v;
      cert.min_t = r.t;
      cert.min_lambda = r.lambda;
    }
    const double l1 = std::abs(r.lambda[0]);
    const double chain = (cert.eta - cert.C / l1) / (kTwoPi * cert.window_volume * l1);
    cert.min_chain_ratio = std::min(cert.min_chain_ratio, v / chain);
    if (v < chain * (1.0 - 1e-9)) ++cert.chain_violations;
  }
  if (!(cert.min_abs_scanned > params.tol_zero))
    throw Error(ErrorKind::ScanFailure, "|V_gg| vanished at a scanned point of the certified region");
  return cert;
}

// ---------------------------------------------------------------------------
// Mutual orthogonality
// ---------------------------------------------------------------------------

struct ViolationReport {
  TimeFrequencyPoint first;
  TimeFrequencyPoint second;
  Complex value;  // V_gg(first - second)
  double abs_value = 0.0;
  std::optional<Complex> oracle_value;
};

struct OrthogonalityOptions {
  /// Re-evaluate every violating difference with the quadrature oracle.
  bool confirm = false;
  int quadrature_n = 2000;
  /// Stop recording after this many reports (0 = all).
  std::size_t max_reports = 0;
};

namespace detail {

using DiffKey = std::array<double, 8>;

struct DiffKeyHash {
  std::size_t operator()(const DiffKey& k) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (double x : k) {
      std::uint64_t bits;
      x = x == 0.0 ? 0.0 : x;
      std::memcpy(&bits, &x, sizeof bits);
      h = (h ^ bits) * 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

inline DiffKey diff_key(const TimeFrequencyPoint& a, const TimeFrequencyPoint& b) {
  DiffKey k{};
  const auto d = a.t.size();
  for (Eigen::Index j = 0; j < d; ++j) {
    k[static_cast<std::size_t>(j)] = a.t[j] - b.t[j];
    k[static_cast<std::size_t>(4 + j)] = a.lambda[j] - b.lambda[j];
  }
  for (auto& x : k)
    if (x == 0.0) x = 0.0;
  return k;
}

}  // namespace detail

/// Reports every ordered pair v != v' with |V_gg(v - v')| > tol_zero, sorted
/// lexicographically by (v, v'). An empty result means the truncation is
/// mutually orthogonal. Values are evaluated once per distinct difference.
inline std::vector<ViolationReport> check_orthogonality(const HPolytope& p, const TimeFrequencySet& set, double tol_zero,
                                                        const OrthogonalityOptions& opts = {}) {
  const IndicatorStft stft(p);
  const int d = p.dimension();
  if (set.dimension() != d) throw Error(ErrorKind::InvalidArgument, "time-frequency set dimension differs from window");
  const auto& pts = set.points();

  std::unordered_map<detail::DiffKey, std::size_t, detail::DiffKeyHash> ids;
  std::vector<detail::DiffKey> diffs;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      auto key = detail::diff_key(pts[i], pts[j]);
      if (ids.emplace(key, diffs.size()).second) diffs.push_back(key);
    }

  // Group differences by shift so each Omega_t is triangulated once.
  std::vector<std::size_t> order(diffs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(diffs[a].begin(), diffs[a].begin() + 4, diffs[b].begin(), diffs[b].begin() + 4);
  });
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t s = 0; s < order.size();) {
    std::size_t e = s + 1;
    while (e < order.size() && std::equal(diffs[order[s]].begin(), diffs[order[s]].begin() + 4, diffs[order[e]].begin())) ++e;
    groups.emplace_back(s, e);
    s = e;
  }
  std::vector<Complex> values(diffs.size());
  std::vector<std::optional<Complex>> oracle(diffs.size());
  parallel_for(groups.size(), [&](std::size_t g) {
    const auto [s, e] = groups[g];
    Vector t(d), l(d);
    for (int j = 0; j < d; ++j) t[j] = diffs[order[s]][static_cast<std::size_t>(j)];
    const HPolytope q = translate_intersection(p, t);
    const PolytopeTransform ft(q);
    for (std::size_t k = s; k < e; ++k) {
      const auto id = order[k];
      for (int j = 0; j < d; ++j) l[j] = diffs[id][static_cast<std::size_t>(4 + j)];
      values[id] = ft(l) / stft.window_volume();
      if (opts.confirm && std::abs(values[id]) > tol_zero)
        oracle[id] = ft_indicator_quadrature(q, l, opts.quadrature_n) / stft.window_volume();
    }
  });

  std::vector<ViolationReport> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      const auto id = ids.at(detail::diff_key(pts[i], pts[j]));
      const double a = std::abs(values[id]);
      if (a > tol_zero) {
        out.push_back({pts[i], pts[j], values[id], a, oracle[id]});
        if (opts.max_reports != 0 && out.size() >= opts.max_reports) return out;
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// Violation search driven by a certificate
// ---------------------------------------------------------------------------

/// Bucket statistics: time cells of diameter < eps crossed with transverse
/// frequency cells of diameter < 2 delta (frame coordinates).
struct SlabStatistics {
  std::size_t cells = 0;
  std::size_t max_cardinality = 0;
  double max_axial_spread = 0.0;
  std::size_t pairs_examined = 0;
};

struct ViolationSearch {
  std::optional<ViolationReport> found;
  SlabStatistics stats;
};

/// Looks for v, v' with |t - t'| < eps and lambda - lambda' in S(2 delta) \ B_R.
/// Such a pair must have V_gg != 0; the first one (lexicographic pair order)
/// is evaluated, cross-checked with the quadrature oracle and returned.
inline ViolationSearch find_violation_pair(const HPolytope& p, const TimeFrequencySet& set, const NonZeroCertificate& cert,
                                           int quadrature_n = 2000) {
  const int d = p.dimension();
  if (cert.frame.dimension() != d || set.dimension() != d)
    throw Error(ErrorKind::CertificateMismatch, "certificate dimension differs from window");
  if (find_facet(p, cert.frame.axis()) == nullptr || std::abs(volume(p) - cert.window_volume) > 1e-9 * std::max(1.0, cert.window_volume))
    throw Error(ErrorKind::CertificateMismatch, "certificate was not built for this window");

  const auto& pts = set.points();
  std::vector<Vector> tf, lf;
  for (const auto& v : pts) {
    tf.push_back(cert.frame.vector_to_frame(v.t));
    lf.push_back(cert.frame.vector_to_frame(v.lambda));
  }

  ViolationSearch out;
  {
    const double ts = cert.eps / std::sqrt(static_cast<double>(d)) * (1.0 - 1e-9);
    const double ws = 2.0 * cert.delta / std::sqrt(static_cast<double>(d - 1)) * (1.0 - 1e-9);
    std::unordered_map<detail::DiffKey, std::pair<std::size_t, std::pair<double, double>>, detail::DiffKeyHash> cells;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      detail::DiffKey k{};
      for (int j = 0; j < d; ++j) k[static_cast<std::size_t>(j)] = std::floor(tf[i][j] / ts);
      for (int j = 1; j < d; ++j) k[static_cast<std::size_t>(4 + j)] = std::floor(lf[i][j] / ws);
      auto [it, fresh] = cells.try_emplace(k, 0, std::make_pair(lf[i][0], lf[i][0]));
      auto& [count, range] = it->second;
      ++count;
      range.first = std::min(range.first, lf[i][0]);
      range.second = std::max(range.second, lf[i][0]);
    }
    out.stats.cells = cells.size();
    for (const auto& [key, cell] : cells) {
      out.stats.max_cardinality = std::max(out.stats.max_cardinality, cell.first);
      out.stats.max_axial_spread = std::max(out.stats.max_axial_spread, cell.second.second - cell.second.first);
    }
  }

  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      ++out.stats.pairs_examined;
      if (!((tf[i] - tf[j]).norm() < cert.eps)) continue;
      const Vector dl = lf[i] - lf[j];
      if (!(dl.tail(d - 1).norm() < 2.0 * cert.delta) || dl.norm() < cert.R) continue;
      const Vector t = pts[i].t - pts[j].t;
      const Vector l = pts[i].lambda - pts[j].lambda;
      const HPolytope q = translate_intersection(p, t);
      const Complex v = ft_indicator(q, l) / cert.window_volume;
      if (!(std::abs(v) > cert.params.tol_zero))
        throw Error(ErrorKind::ScanFailure, "certified pair has vanishing V_gg");
      out.found = ViolationReport{pts[i], pts[j], v, std::abs(v), ft_indicator_quadrature(q, l, quadrature_n) / cert.window_volume};
      return out;
    }
  return out;
}

}  // namespace gonb
