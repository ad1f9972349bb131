#pragma once

#include "gonb/io.hpp"

#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace gonb::workbench {

enum class Command { Symmetry, Intersect, Ft, Stft, Certificate, CheckOrth, FindViolation, Scan };
enum class Format { Json, Csv };
enum class Field { Ft, StftAbs, GtAbs };
enum class Region { Box, Cone, Cylinder };

inline std::optional<Command> parse_command(const std::string& s) {
  if (s == "symmetry") return Command::Symmetry;
  if (s == "intersect") return Command::Intersect;
  if (s == "ft") return Command::Ft;
  if (s == "stft") return Command::Stft;
  if (s == "certificate") return Command::Certificate;
  if (s == "check-orth") return Command::CheckOrth;
  if (s == "find-violation") return Command::FindViolation;
  if (s == "scan") return Command::Scan;
  return std::nullopt;
}

inline const char* field_name(Field f) {
  switch (f) {
    case Field::Ft: return "ft";
    case Field::StftAbs: return "stft_abs";
    case Field::GtAbs: return "gt_abs";
  }
  return "?";
}

inline const char* region_name(Region r) {
  switch (r) {
    case Region::Box: return "box";
    case Region::Cone: return "cone";
    case Region::Cylinder: return "cylinder";
  }
  return "?";
}

inline Field parse_field(const std::string& s) {
  if (s == "ft") return Field::Ft;
  if (s == "stft_abs") return Field::StftAbs;
  if (s == "gt_abs") return Field::GtAbs;
  throw Error(ErrorKind::ParseError, "unknown scan field '" + s + "'");
}

inline Region parse_region(const std::string& s) {
  if (s == "box") return Region::Box;
  if (s == "cone") return Region::Cone;
  if (s == "cylinder") return Region::Cylinder;
  throw Error(ErrorKind::ParseError, "unknown region '" + s + "'");
}

inline Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw Error(ErrorKind::ParseError, "unknown format '" + s + "'");
}

struct ScenarioConfig {
  Command command = Command::Symmetry;
  std::string input;        // polytope JSON
  std::string tf_input;     // time-frequency set JSON
  std::string cert_input;   // certificate JSON
  std::string output;       // empty: the output stream passed to run()
  Format format = Format::Json;

  std::vector<double> t;
  std::vector<double> lambda;

  std::optional<double> eps;  // unset: bisection up to eps_max
  double eps_max = 1.0;
  double omega = 0.2;
  double tol = kGeomTol;
  double tol_zero = 1e-9;
  int n_t = 4;
  int quadrature_n = 0;  // 0: no oracle (check-orth confirms with 2000 when --confirm)
  bool confirm = false;
  std::size_t max_reports = 0;

  Field field = Field::StftAbs;
  Region region = Region::Box;
  std::vector<double> lo, hi;
  std::optional<int> grid_n;
};

/// 0 ok, 2 parse/config, 3 mathematical precondition, 4 scan falsification.
inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::RegionFrameMissing: return 2;
    case ErrorKind::ScanFailure: return 4;
    default: return 3;
  }
}

namespace detail {

inline Vector vec(const std::vector<double>& v, int d, const char* what) {
  if (static_cast<int>(v.size()) != d)
    throw Error(ErrorKind::ParseError, std::string(what) + " needs " + std::to_string(d) + " components");
  return to_vector(v);
}

inline HPolytope load_polytope(const ScenarioConfig& c) {
  if (c.input.empty()) throw Error(ErrorKind::ParseError, "missing --in polytope file");
  return io::polytope_from_json(io::load_json_file(c.input));
}

inline TimeFrequencySet load_tf(const ScenarioConfig& c, int d) {
  if (c.tf_input.empty()) throw Error(ErrorKind::ParseError, "missing --tf time-frequency file");
  auto set = io::tf_set_from_json(io::load_json_file(c.tf_input));
  if (set.dimension() != d) throw Error(ErrorKind::ParseError, "time-frequency set dimension differs from the window");
  return set;
}

inline std::optional<NonZeroCertificate> load_cert(const ScenarioConfig& c) {
  if (c.cert_input.empty()) return std::nullopt;
  return io::certificate_from_json(io::load_json_file(c.cert_input));
}

inline NonZeroCertificate make_certificate(const HPolytope& p, const ScenarioConfig& c) {
  const double eps = c.eps ? *c.eps : persistence_radius(p, c.eps_max, c.n_t);
  CertificateParams params;
  params.n_t = c.n_t;
  params.tol_zero = c.tol_zero;
  return build_certificate(p, eps, c.omega, params);
}

inline std::string fmt_vec(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + io::format_real(v[i]);
  return s;
}

inline std::vector<FieldSample> scan_box(const HPolytope& p, const ScenarioConfig& c, const std::optional<NonZeroCertificate>& cert,
                                         int grid_n) {
  const int d = p.dimension();
  if (c.lo.empty() || c.hi.empty()) throw Error(ErrorKind::ParseError, "box region needs --lo and --hi");
  const Vector lo = vec(c.lo, d, "--lo"), hi = vec(c.hi, d, "--hi");
  for (int j = 0; j < d; ++j)
    if (!(lo[j] < hi[j]) && !(grid_n == 1 && lo[j] == hi[j])) throw Error(ErrorKind::ParseError, "box region is empty");
  const Vector t = c.t.empty() ? Vector(Vector::Zero(d)) : vec(c.t, d, "--t");

  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(grid_n);
  std::vector<Vector> ls;
  ls.reserve(total);
  for (std::size_t k = 0; k < total; ++k) {
    // first axis varies slowest so rows read like nested loops
    Vector l(d);
    std::size_t rem = k;
    for (int j = d - 1; j >= 0; --j) {
      const auto i = rem % static_cast<std::size_t>(grid_n);
      rem /= static_cast<std::size_t>(grid_n);
      l[j] = grid_n == 1 ? lo[j] : lo[j] + (hi[j] - lo[j]) * static_cast<double>(i) / (grid_n - 1);
    }
    ls.push_back(std::move(l));
  }

  std::vector<FieldSample> rows(ls.size());
  if (c.field == Field::GtAbs) {
    if (!cert) throw Error(ErrorKind::RegionFrameMissing, "gt_abs needs a certificate frame (--cert)");
    // t and lambda are frame coordinates here
    const ResidualEvaluator ev(translate_intersection(p, cert->frame.vector_from_frame(t)), cert->frame);
    parallel_for(ls.size(), [&](std::size_t i) { rows[i] = {t, ls[i], ev.residual(ls[i])}; });
    return rows;
  }
  const HPolytope q = translate_intersection(p, t);
  const double scale = c.field == Field::StftAbs ? 1.0 / volume(p) : 1.0;
  if (c.field == Field::StftAbs && !(volume(p) > kGeomTol)) throw Error(ErrorKind::ZeroVolumeWindow, "window has zero volume");
  const PolytopeTransform ft(q);
  parallel_for(ls.size(), [&](std::size_t i) { rows[i] = {t, ls[i], ft(ls[i]) * scale}; });
  return rows;
}

/// Re-evaluates `field` on the (t, lambda) frame samples of `rows`.
inline void refill(const HPolytope& p, const NonZeroCertificate& cert, Field field, std::vector<FieldSample>& rows) {
  const double vol = volume(p);
  std::vector<std::size_t> starts;  // rows are grouped by t
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (i == 0 || rows[i].t != rows[i - 1].t) starts.push_back(i);
  starts.push_back(rows.size());
  parallel_for(starts.size() - 1, [&](std::size_t g) {
    const ResidualEvaluator ev(translate_intersection(p, cert.frame.vector_from_frame(rows[starts[g]].t)), cert.frame);
    const PolytopeTransform ft(ev.frame_polytope());
    for (std::size_t i = starts[g]; i < starts[g + 1]; ++i) {
      switch (field) {
        case Field::Ft: rows[i].value = ft(rows[i].lambda); break;
        case Field::StftAbs: rows[i].value = ft(rows[i].lambda) / vol; break;
        case Field::GtAbs: rows[i].value = ev.residual(rows[i].lambda); break;
      }
    }
  });
}

inline std::string run_scan(const HPolytope& p, const ScenarioConfig& c) {
  const auto cert = load_cert(c);
  const int d = p.dimension();
  std::vector<std::string> comments{"gonb scan",
                                    std::string("field=") + field_name(c.field),
                                    std::string("region=") + region_name(c.region),
                                    "input=" + c.input};
  if (!c.cert_input.empty()) comments.push_back("cert=" + c.cert_input);

  std::vector<FieldSample> rows;
  if (c.region == Region::Box) {
    const int grid_n = c.grid_n.value_or(61);
    if (grid_n < 1) throw Error(ErrorKind::ParseError, "box region is empty (grid < 1)");
    rows = scan_box(p, c, cert, grid_n);
    comments.push_back("grid=" + std::to_string(grid_n) + "^" + std::to_string(d));
    comments.push_back("t=" + fmt_vec(c.t.empty() ? std::vector<double>(static_cast<std::size_t>(d), 0.0) : c.t));
    comments.push_back("lo=" + fmt_vec(c.lo));
    comments.push_back("hi=" + fmt_vec(c.hi));
    comments.push_back(std::string("coordinates=") + (c.field == Field::GtAbs ? "frame" : "original"));
  } else {
    if (!cert) throw Error(ErrorKind::RegionFrameMissing, std::string(region_name(c.region)) + " region needs --cert");
    if (cert->frame.dimension() != d) throw Error(ErrorKind::CertificateMismatch, "certificate dimension differs from window");
    if (c.region == Region::Cone) {
      ScanGrid grid = cert->params.cone;
      if (!c.lo.empty()) grid.lambda_min = c.lo.front();
      if (!c.hi.empty()) grid.lambda_max = c.hi.front();
      if (c.grid_n) grid.n_axial = *c.grid_n;
      if (!(grid.lambda_min > 0.0) || !(grid.lambda_min < grid.lambda_max) || grid.n_axial < 1)
        throw Error(ErrorKind::ParseError, "cone region is empty");
      if (c.field == Field::GtAbs) {
        rows = cone_residual_field(p, cert->frame, cert->omega, grid);
      } else {
        const auto ts = ball_samples(d, grid.t_radius, grid.n_t);
        const auto ls = cone_lambda_samples(d, cert->omega, grid);
        for (const auto& t : ts)
          for (const auto& l : ls) rows.push_back({t, l, 0.0});
        refill(p, *cert, c.field, rows);
      }
      comments.push_back("omega=" + io::format_real(cert->omega));
      comments.push_back("lambda_1=" + io::format_real(grid.lambda_min) + ".." + io::format_real(grid.lambda_max) +
                         " log n=" + std::to_string(grid.n_axial) + " both signs");
      comments.push_back("cross_step=" + io::format_real(grid.cross_step));
      comments.push_back("t_radius=" + io::format_real(grid.t_radius) + " n_t=" + std::to_string(grid.n_t));
    } else {
      NonZeroCertificate scan_cert = *cert;
      if (c.grid_n) scan_cert.params.n_axial_verify = *c.grid_n;
      if (scan_cert.params.n_axial_verify < 1 || !(scan_cert.delta > 0.0))
        throw Error(ErrorKind::ParseError, "cylinder region is empty");
      rows = certificate_field(p, scan_cert);
      if (c.field != Field::StftAbs) refill(p, scan_cert, c.field, rows);
      comments.push_back("radius=" + io::format_real(2.0 * scan_cert.delta));
      comments.push_back("lambda_1=" + io::format_real(scan_cert.R) + ".." +
                         io::format_real(std::max(scan_cert.R, scan_cert.params.lambda_verify_max)) +
                         " log n=" + std::to_string(scan_cert.params.n_axial_verify) + " both signs");
      comments.push_back("eps=" + io::format_real(scan_cert.eps) + " n_t=" + std::to_string(scan_cert.params.n_t) +
                         " n_w=" + std::to_string(scan_cert.params.n_w));
    }
    comments.push_back("coordinates=frame");
  }
  comments.push_back("rows=" + std::to_string(rows.size()));
  return io::samples_to_csv(d, rows, comments);
}

inline io::json value_json(const Complex& v, const std::optional<Complex>& oracle) {
  io::json j{{"value", io::to_json(v)}};
  if (oracle) j["oracle"] = io::to_json(*oracle);
  return j;
}

inline std::string single_row_csv(int d, const Vector& t, const Vector& l, const Complex& v) {
  return io::samples_to_csv(d, {FieldSample{t, l, v}}, {});
}

inline std::string dispatch(const ScenarioConfig& c) {
  if (c.command == Command::Scan) {
    if (c.format != Format::Csv) throw Error(ErrorKind::ParseError, "scan output is CSV (--format csv)");
    return run_scan(load_polytope(c), c);
  }
  const bool csv_ok = c.command == Command::Ft || c.command == Command::Stft;
  if (c.format == Format::Csv && !csv_ok) throw Error(ErrorKind::ParseError, "CSV output is available for ft, stft and scan");

  const HPolytope p = load_polytope(c);
  const int d = p.dimension();
  io::json out;
  switch (c.command) {
    case Command::Symmetry:
      out = io::symmetry_to_json(is_symmetric(p, c.tol));
      break;
    case Command::Intersect:
      out = io::polytope_to_json(translate_intersection(p, vec(c.t, d, "--t")));
      break;
    case Command::Ft: {
      const Vector l = vec(c.lambda, d, "--lambda");
      const Complex v = ft_indicator(p, l);
      if (c.format == Format::Csv) return single_row_csv(d, Vector::Zero(d), l, v);
      std::optional<Complex> oracle;
      if (c.quadrature_n > 0) oracle = ft_indicator_quadrature(p, l, c.quadrature_n);
      out = value_json(v, oracle);
      break;
    }
    case Command::Stft: {
      const Vector t = vec(c.t, d, "--t"), l = vec(c.lambda, d, "--lambda");
      const Complex v = stft_indicator(p, t, l);
      if (c.format == Format::Csv) return single_row_csv(d, t, l, v);
      std::optional<Complex> oracle;
      if (c.quadrature_n > 0) oracle = ft_indicator_quadrature(translate_intersection(p, t), l, c.quadrature_n) / volume(p);
      out = value_json(v, oracle);
      break;
    }
    case Command::Certificate:
      out = io::certificate_to_json(make_certificate(p, c));
      break;
    case Command::CheckOrth: {
      const auto set = load_tf(c, d);
      OrthogonalityOptions opts;
      opts.confirm = c.confirm;
      if (c.quadrature_n > 0) opts.quadrature_n = c.quadrature_n;
      opts.max_reports = c.max_reports;
      const auto vs = check_orthogonality(p, set, c.tol_zero, opts);
      io::json list = io::json::array();
      for (const auto& v : vs) list.push_back(io::violation_to_json(v));
      out = {{"orthogonal", vs.empty()},
             {"points", set.size()},
             {"pairs", set.size() * (set.size() > 0 ? set.size() - 1 : 0)},
             {"tol_zero", c.tol_zero},
             {"violations", list}};
      if (set.size() >= 2) out["separation"] = separation(set);
      break;
    }
    case Command::FindViolation: {
      const auto set = load_tf(c, d);
      const auto cert = load_cert(c);
      const auto search = find_violation_pair(p, set, cert ? *cert : make_certificate(p, c),
                                              c.quadrature_n > 0 ? c.quadrature_n : 2000);
      out = {{"found", search.found ? io::violation_to_json(*search.found) : io::json(nullptr)},
             {"stats",
              {{"cells", search.stats.cells},
               {"max_cardinality", search.stats.max_cardinality},
               {"max_axial_spread", search.stats.max_axial_spread},
               {"pairs_examined", search.stats.pairs_examined}}}};
      break;
    }
    case Command::Scan: break;
  }
  return out.dump(2) + "\n";
}

}  // namespace detail

/// Runs one scenario. Output goes to config.output when set, otherwise to
/// `out`; errors are reported on `err` as "gonb: <ErrorName>: detail".
inline int run(const ScenarioConfig& config, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    const std::string text = detail::dispatch(config);
    if (config.output.empty()) out << text;
    else io::write_text_file(config.output, text);
    return 0;
  } catch (const Error& e) {
    err << "gonb: " << e.what() << '\n';
    return exit_code(e.kind());
  }
}

}  // namespace gonb::workbench
