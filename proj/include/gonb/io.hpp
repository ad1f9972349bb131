#pragma once

#include "gonb/gabor.hpp"
#include "gonb/hull.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace gonb::io {

using nlohmann::json;

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
  out << text;
}

inline Vector vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, std::string(what) + " must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorKind::ParseError, std::string(what) + " must be an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

inline json to_json(const Vector& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

inline json to_json(const Complex& c) { return {{"re", c.real()}, {"im", c.imag()}, {"abs", std::abs(c)}}; }

// --- polytopes --------------------------------------------------------------

/// { "dim": d, "halfspaces": [{"normal": [...], "offset": b}, ...] }
/// or { "dim": d, "vertices": [[...], ...] } with d <= 3.
inline HPolytope polytope_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer())
    throw Error(ErrorKind::ParseError, "polytope JSON needs an integer \"dim\"");
  const int d = j["dim"].get<int>();
  if (d < 1 || d > 4) throw Error(ErrorKind::ParseError, "polytope dimension must be 1..4");
  if (j.contains("halfspaces")) {
    const auto& hs = j["halfspaces"];
    if (!hs.is_array() || hs.empty()) throw Error(ErrorKind::ParseError, "\"halfspaces\" must be a nonempty array");
    std::vector<HalfSpace> raw;
    for (const auto& h : hs) {
      if (!h.is_object() || !h.contains("normal") || !h.contains("offset") || !h["offset"].is_number())
        throw Error(ErrorKind::ParseError, "half-space needs \"normal\" and numeric \"offset\"");
      Vector n = vector_from_json(h["normal"], "normal");
      if (n.size() != d) throw Error(ErrorKind::ParseError, "normal dimension differs from dim");
      if (!(n.norm() > 0.0)) throw Error(ErrorKind::ParseError, "normal must be nonzero");
      raw.push_back({std::move(n), h["offset"].get<double>()});
    }
    return normalize(std::move(raw), d);
  }
  if (j.contains("vertices")) {
    const auto& vs = j["vertices"];
    if (!vs.is_array() || vs.empty()) throw Error(ErrorKind::ParseError, "\"vertices\" must be a nonempty array");
    std::vector<Vector> pts;
    for (const auto& v : vs) {
      pts.push_back(vector_from_json(v, "vertex"));
      if (pts.back().size() != d) throw Error(ErrorKind::ParseError, "vertex dimension differs from dim");
    }
    if (d > 3) throw Error(ErrorKind::ParseError, "vertex input is accepted for d <= 3 only");
    return from_vertices(pts, d);
  }
  throw Error(ErrorKind::ParseError, "polytope JSON needs \"halfspaces\" or \"vertices\"");
}

inline const char* status_name(PolytopeStatus s) {
  switch (s) {
    case PolytopeStatus::Full: return "full";
    case PolytopeStatus::Degenerate: return "degenerate";
    case PolytopeStatus::Empty: return "empty";
  }
  return "unknown";
}

inline json polytope_to_json(const HPolytope& p) {
  json hs = json::array();
  for (const auto& h : p.halfspaces()) hs.push_back({{"normal", to_json(h.normal)}, {"offset", h.offset}});
  json vs = json::array();
  for (const auto& v : p.vertex_cache()) vs.push_back(to_json(v));
  return {{"dim", p.dimension()}, {"status", status_name(p.status())}, {"halfspaces", hs}, {"vertices", vs},
          {"volume", volume(p)}};
}

inline json facet_to_json(const Facet& f) {
  json vs = json::array();
  for (const auto& v : f.vertices) vs.push_back(to_json(v));
  return {{"normal", to_json(f.normal())}, {"offset", f.supporting.offset}, {"volume", f.volume_dm1}, {"vertices", vs}};
}

inline json symmetry_to_json(const SymmetryReport& r) {
  json j{{"symmetric", r.symmetric}, {"margin", r.margin}, {"witness", nullptr}};
  if (r.witness) {
    j["witness"] = {{"facet", facet_to_json(r.witness->first)},
                    {"parallel", r.witness->second ? facet_to_json(*r.witness->second) : json(nullptr)}};
  }
  return j;
}

// --- time-frequency sets ----------------------------------------------------

inline Box box_from_json(const json& j) {
  if (!j.is_object() || !j.contains("lo") || !j.contains("hi")) throw Error(ErrorKind::ParseError, "box needs \"lo\" and \"hi\"");
  Box b{vector_from_json(j["lo"], "box.lo"), vector_from_json(j["hi"], "box.hi")};
  if (b.lo.size() != b.hi.size() || b.lo.size() == 0) throw Error(ErrorKind::ParseError, "box bounds differ in size");
  for (Eigen::Index i = 0; i < b.lo.size(); ++i)
    if (!(b.lo[i] <= b.hi[i])) throw Error(ErrorKind::ParseError, "box has lo > hi");
  return b;
}

/// { "points": [[t..., lambda...], ...] } or
/// { "lattice": { "basis": [[...] x 2d] (rows are generators), "shift": [...], "box": {"lo": [...], "hi": [...]} } }
inline TimeFrequencySet tf_set_from_json(const json& j) {
  if (j.contains("points")) {
    const auto& ps = j["points"];
    if (!ps.is_array() || ps.empty()) throw Error(ErrorKind::ParseError, "\"points\" must be a nonempty array");
    std::vector<TimeFrequencyPoint> pts;
    for (const auto& p : ps) {
      const Vector x = vector_from_json(p, "point");
      if (x.size() % 2 != 0 || x.size() == 0) throw Error(ErrorKind::ParseError, "point must have 2d coordinates");
      const auto d = x.size() / 2;
      pts.push_back({x.head(d), x.tail(d)});
    }
    return TimeFrequencySet::from_points(std::move(pts));
  }
  if (j.contains("lattice")) {
    const auto& l = j["lattice"];
    if (!l.contains("basis") || !l["basis"].is_array()) throw Error(ErrorKind::ParseError, "lattice needs \"basis\"");
    const auto n = static_cast<Eigen::Index>(l["basis"].size());
    LatticeSpec spec;
    spec.basis.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const Vector row = vector_from_json(l["basis"][static_cast<std::size_t>(r)], "basis row");
      if (row.size() != n) throw Error(ErrorKind::ParseError, "lattice basis must be square");
      spec.basis.row(r) = row.transpose();
    }
    spec.shift = l.contains("shift") ? vector_from_json(l["shift"], "shift") : Vector(Vector::Zero(n));
    if (!l.contains("box")) throw Error(ErrorKind::ParseError, "lattice needs \"box\"");
    spec.box = box_from_json(l["box"]);
    return TimeFrequencySet::from_lattice(spec);
  }
  throw Error(ErrorKind::ParseError, "time-frequency JSON needs \"points\" or \"lattice\"");
}

inline json tf_point_to_json(const TimeFrequencyPoint& p) { return {{"t", to_json(p.t)}, {"lambda", to_json(p.lambda)}}; }

inline json violation_to_json(const ViolationReport& v) {
  json j{{"first", tf_point_to_json(v.first)}, {"second", tf_point_to_json(v.second)}, {"value", to_json(v.value)},
         {"abs_value", v.abs_value}};
  if (v.oracle_value) j["oracle"] = to_json(*v.oracle_value);
  return j;
}

// --- certificates -----------------------------------------------------------

inline json frame_to_json(const AxisFrame& f) {
  json basis = json::array();
  for (Eigen::Index c = 0; c < f.basis.cols(); ++c) basis.push_back(to_json(f.basis.col(c)));
  return {{"origin", to_json(f.origin)}, {"basis", basis}, {"scale", f.scale}};
}

inline AxisFrame frame_from_json(const json& j) {
  AxisFrame f;
  f.origin = vector_from_json(j.at("origin"), "frame.origin");
  const auto d = f.origin.size();
  const auto& b = j.at("basis");
  if (!b.is_array() || static_cast<Eigen::Index>(b.size()) != d) throw Error(ErrorKind::ParseError, "frame basis must have d vectors");
  f.basis.resize(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    const Vector col = vector_from_json(b[static_cast<std::size_t>(c)], "frame.basis");
    if (col.size() != d) throw Error(ErrorKind::ParseError, "frame basis vector has wrong size");
    f.basis.col(c) = col;
  }
  f.scale = j.at("scale").get<double>();
  return f;
}

inline json certificate_to_json(const NonZeroCertificate& c) {
  const auto& p = c.params;
  return {
      {"eps", c.eps},
      {"delta", c.delta},
      {"R", c.R},
      {"omega", c.omega},
      {"eta", c.eta},
      {"C", c.C},
      {"frame", frame_to_json(c.frame)},
      {"min_abs_scanned", c.min_abs_scanned},
      {"provenance",
       {{"window_volume", c.window_volume},
        {"margin", c.margin},
        {"facet_a_volume", c.facet_a_volume},
        {"facet_b_volume", c.facet_b_volume},
        {"min_sin_theta", c.min_sin_theta},
        {"C_attained_at", {{"t", to_json(c.C_t)}, {"lambda", to_json(c.C_lambda)}}},
        {"min_abs_at", {{"t", to_json(c.min_t)}, {"lambda", to_json(c.min_lambda)}}},
        {"cone_samples", c.cone_samples},
        {"points_scanned", c.points_scanned},
        {"chain_violations", c.chain_violations},
        {"min_chain_ratio", c.min_chain_ratio},
        {"coordinates", "frame"}}},
      {"scan",
       {{"n_t", p.n_t},
        {"cone", {{"lambda_min", p.cone.lambda_min}, {"lambda_max", p.cone.lambda_max}, {"n_axial", p.cone.n_axial},
                  {"cross_step", p.cone.cross_step}, {"t_radius", p.cone.t_radius}, {"n_t", p.cone.n_t}}},
        {"delta_initial", p.delta_initial},
        {"max_halvings", p.max_halvings},
        {"gap_fraction", p.gap_fraction},
        {"n_w", p.n_w},
        {"n_axial_verify", p.n_axial_verify},
        {"lambda_verify_max", p.lambda_verify_max},
        {"tol_zero", p.tol_zero}}},
  };
}

inline NonZeroCertificate certificate_from_json(const json& j) {
  try {
    NonZeroCertificate c;
    c.eps = j.at("eps").get<double>();
    c.delta = j.at("delta").get<double>();
    c.R = j.at("R").get<double>();
    c.omega = j.at("omega").get<double>();
    c.eta = j.at("eta").get<double>();
    c.C = j.at("C").get<double>();
    c.frame = frame_from_json(j.at("frame"));
    c.min_abs_scanned = j.at("min_abs_scanned").get<double>();
    const auto& pv = j.at("provenance");
    c.window_volume = pv.at("window_volume").get<double>();
    c.margin = pv.value("margin", 0.0);
    c.facet_a_volume = pv.value("facet_a_volume", 0.0);
    c.facet_b_volume = pv.value("facet_b_volume", 0.0);
    const auto& s = j.at("scan");
    auto& p = c.params;
    p.n_t = s.at("n_t").get<int>();
    const auto& cone = s.at("cone");
    p.cone.lambda_min = cone.at("lambda_min").get<double>();
    p.cone.lambda_max = cone.at("lambda_max").get<double>();
    p.cone.n_axial = cone.at("n_axial").get<int>();
    p.cone.cross_step = cone.at("cross_step").get<double>();
    p.cone.t_radius = cone.at("t_radius").get<double>();
    p.cone.n_t = cone.at("n_t").get<int>();
    p.delta_initial = s.at("delta_initial").get<double>();
    p.max_halvings = s.at("max_halvings").get<int>();
    p.gap_fraction = s.at("gap_fraction").get<double>();
    p.n_w = s.at("n_w").get<int>();
    p.n_axial_verify = s.at("n_axial_verify").get<int>();
    p.lambda_verify_max = s.at("lambda_verify_max").get<double>();
    p.tol_zero = s.at("tol_zero").get<double>();
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("certificate JSON: ") + e.what());
  }
}

// --- CSV --------------------------------------------------------------------

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

/// Columns t_1..t_d, lambda_1..lambda_d, re, im, abs; `comments` become
/// leading '#' lines.
inline std::string samples_to_csv(int d, const std::vector<FieldSample>& rows, const std::vector<std::string>& comments) {
  std::ostringstream out;
  for (const auto& c : comments) out << "# " << c << '\n';
  for (int j = 1; j <= d; ++j) out << "t_" << j << ',';
  for (int j = 1; j <= d; ++j) out << "lambda_" << j << ',';
  out << "re,im,abs\n";
  for (const auto& r : rows) {
    for (int j = 0; j < d; ++j) out << format_real(r.t[j]) << ',';
    for (int j = 0; j < d; ++j) out << format_real(r.lambda[j]) << ',';
    out << format_real(r.value.real()) << ',' << format_real(r.value.imag()) << ',' << format_real(std::abs(r.value)) << '\n';
  }
  return out.str();
}

}  // namespace gonb::io
