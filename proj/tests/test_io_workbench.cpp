#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace gonb;
using namespace testing_support;
namespace wb = gonb::workbench;
namespace fs = std::filesystem;

namespace {

const std::string kData = GONB_DATA_DIR;

template <class Fn>
void expect_error(ErrorKind kind, Fn fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << error_name(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("gonb_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_scratch(const std::string& name, const std::string& text) {
  const auto p = scratch_dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunOutput {
  int code;
  std::string out, err;
};

RunOutput run_scenario(wb::ScenarioConfig c) {
  std::ostringstream out, err;
  const int code = wb::run(c, out, err);
  return {code, out.str(), err.str()};
}

wb::ScenarioConfig config(wb::Command cmd, const std::string& input) {
  wb::ScenarioConfig c;
  c.command = cmd;
  c.input = input;
  return c;
}

/// Certificate for the pentagon written once through the workbench.
const std::string& pentagon_cert_path() {
  static const std::string path = [] {
    auto c = config(wb::Command::Certificate, kData + "/pentagon.json");
    c.output = (scratch_dir() / "pentagon_cert.json").string();
    const auto r = run_scenario(c);
    EXPECT_EQ(r.code, 0) << r.err;
    return c.output;
  }();
  return path;
}

std::vector<std::vector<double>> csv_rows(const std::string& text, std::string* header) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header->empty()) {
      *header = line;
      continue;
    }
    std::vector<double> r;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) r.push_back(std::stod(cell));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

// --- polytope JSON -------------------------------------------------------------------------

TEST(PolytopeJson, RoundTripIsIdentical) {
  std::vector<HPolytope> cases{io::polytope_from_json(io::load_json_file(kData + "/pentagon.json")),
                               io::polytope_from_json(io::load_json_file(kData + "/pentagon_h.json")),
                               io::polytope_from_json(io::load_json_file(kData + "/square.json")), unit_cube(3)};
  auto g = rng(31);
  for (int k = 0; k < 20; ++k) cases.push_back(random_polytope(g, 2 + k % 2));
  for (const auto& p : cases) {
    const auto once = io::polytope_from_json(io::json::parse(io::polytope_to_json(p).dump()));
    const auto twice = io::polytope_from_json(io::json::parse(io::polytope_to_json(once).dump()));
    ASSERT_EQ(once.halfspaces().size(), twice.halfspaces().size());
    for (std::size_t i = 0; i < once.halfspaces().size(); ++i) {
      EXPECT_EQ(once.halfspaces()[i].normal, twice.halfspaces()[i].normal);
      EXPECT_EQ(once.halfspaces()[i].offset, twice.halfspaces()[i].offset);
    }
    EXPECT_TRUE(same_point_set(vertices(once), vertices(p), 1e-12));
  }
}

TEST(PolytopeJson, VertexAndHalfspaceFormsAgree) {
  const auto a = io::polytope_from_json(io::load_json_file(kData + "/pentagon.json"));
  const auto b = io::polytope_from_json(io::load_json_file(kData + "/pentagon_h.json"));
  EXPECT_TRUE(same_point_set(vertices(a), vertices(b), 1e-12));
  EXPECT_NEAR(volume(a), 3.5, 1e-14);
}

TEST(PolytopeJson, Errors) {
  using io::json;
  expect_error(ErrorKind::ParseError, [] { io::polytope_from_json(json::parse(R"({"halfspaces": []})")); });
  expect_error(ErrorKind::ParseError, [] { io::polytope_from_json(json::parse(R"({"dim": 2})")); });
  expect_error(ErrorKind::ParseError, [] {
    io::polytope_from_json(json::parse(R"({"dim": 2, "halfspaces": [{"normal": [1, 0, 0], "offset": 1}]})"));
  });
  expect_error(ErrorKind::ParseError, [] {
    io::polytope_from_json(json::parse(R"({"dim": 2, "halfspaces": [{"normal": [0, 0], "offset": 1}]})"));
  });
  expect_error(ErrorKind::ParseError, [] {
    io::polytope_from_json(json::parse(R"({"dim": 2, "halfspaces": [{"normal": ["x", 0], "offset": 1}]})"));
  });
  expect_error(ErrorKind::ParseError, [] {
    io::polytope_from_json(json::parse(R"({"dim": 4, "vertices": [[0, 0, 0, 0]]})"));
  });
  expect_error(ErrorKind::UnboundedPolytope, [] {
    io::polytope_from_json(json::parse(R"({"dim": 1, "halfspaces": [{"normal": [1], "offset": 1}]})"));
  });
  expect_error(ErrorKind::ParseError, [] { io::load_json_file(kData + "/missing.json"); });
  const auto bad = write_scratch("bad.json", "{ not json");
  expect_error(ErrorKind::ParseError, [&] { io::load_json_file(bad); });
}

// --- time-frequency JSON --------------------------------------------------------------------

TEST(TimeFrequencyJson, PointsAndLattices) {
  const auto pts = io::tf_set_from_json(io::json::parse(R"({"points": [[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]})"));
  EXPECT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts.dimension(), 2);
  const auto z = io::tf_set_from_json(io::load_json_file(kData + "/lattice_z4.json"));
  EXPECT_EQ(z.size(), 625u);
  const auto sheared = io::tf_set_from_json(io::load_json_file(kData + "/lattice_sheared.json"));
  const auto scaled = io::tf_set_from_json(io::load_json_file(kData + "/lattice_scaled.json"));
  EXPECT_GT(sheared.size(), 400u);
  EXPECT_GT(scaled.size(), 400u);
  EXPECT_NEAR(separation(scaled), 0.5, 1e-15);
}

TEST(TimeFrequencyJson, Errors) {
  using io::json;
  expect_error(ErrorKind::ParseError, [] { io::tf_set_from_json(json::parse(R"({"points": [[0, 0, 1]]})")); });
  expect_error(ErrorKind::ParseError, [] { io::tf_set_from_json(json::parse(R"({"nothing": 1})")); });
  expect_error(ErrorKind::ParseError, [] {
    io::tf_set_from_json(json::parse(R"({"lattice": {"basis": [[1, 0], [0, 1]], "box": {"lo": [1, 1], "hi": [0, 0]}}})"));
  });
  expect_error(ErrorKind::DuplicatePoint, [] { io::tf_set_from_json(json::parse(R"({"points": [[0, 0], [0, 0]]})")); });
}

// --- certificate JSON -----------------------------------------------------------------------

TEST(CertificateJson, RoundTripReproducesScan) {
  const auto text = slurp(pentagon_cert_path());
  const auto j = io::json::parse(text);
  for (const char* key : {"eps", "delta", "R", "omega", "eta", "C", "frame", "min_abs_scanned", "provenance", "scan"})
    EXPECT_TRUE(j.contains(key)) << key;
  const auto cert = io::certificate_from_json(j);
  EXPECT_EQ(io::certificate_to_json(cert)["eps"], j["eps"]);
  EXPECT_GE(cert.eta - cert.C / cert.R, cert.eta / 2.0);
  const auto rows = certificate_field(pentagon(), cert);
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) m = std::min(m, std::abs(r.value));
  EXPECT_EQ(m, j["min_abs_scanned"].get<double>());
  expect_error(ErrorKind::ParseError, [] { io::certificate_from_json(io::json::parse(R"({"eps": 1})")); });
}

// --- CSV ---------------------------------------------------------------------------------------

TEST(Csv, HeaderPrecisionAndComments) {
  const std::vector<FieldSample> rows{{v2(0.1, -0.2), v2(1.0 / 3.0, 2.0), Complex(0.1, -1e-300)}};
  const auto text = io::samples_to_csv(2, rows, {"gonb scan", "field=ft"});
  EXPECT_EQ(text.rfind("# gonb scan\n# field=ft\n", 0), 0u);
  std::string header;
  const auto parsed = csv_rows(text, &header);
  EXPECT_EQ(header, "t_1,t_2,lambda_1,lambda_2,re,im,abs");
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_EQ(parsed[0][2], 1.0 / 3.0);
  EXPECT_EQ(parsed[0][4], 0.1);
  EXPECT_EQ(parsed[0][5], -1e-300);
}

// --- workbench scenarios -----------------------------------------------------------------------

TEST(Workbench, SymmetryExample) {
  const auto r = run_scenario(config(wb::Command::Symmetry, kData + "/pentagon.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::json::parse(r.out);
  EXPECT_FALSE(j["symmetric"].get<bool>());
  EXPECT_NEAR(j["margin"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(j["witness"]["facet"]["volume"].get<double>(), 2.0, 1e-12);
  EXPECT_NEAR(j["witness"]["parallel"]["volume"].get<double>(), 1.0, 1e-12);
}

TEST(Workbench, IntersectExample) {
  auto c = config(wb::Command::Intersect, kData + "/pentagon.json");
  c.t = {-1, -1};
  const auto r = run_scenario(c);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto q = io::polytope_from_json(io::json::parse(r.out));
  EXPECT_TRUE(same_point_set(vertices(q), {v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 1)}, 1e-9));
}

TEST(Workbench, StftAndFtExamples) {
  auto c = config(wb::Command::Stft, kData + "/square.json");
  c.t = {0, 0};
  c.lambda = {0, 0};
  auto r = run_scenario(c);
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = io::json::parse(r.out);
  EXPECT_EQ(j["value"]["re"].get<double>(), 1.0);
  EXPECT_EQ(j["value"]["im"].get<double>(), 0.0);

  c = config(wb::Command::Ft, kData + "/pentagon.json");
  c.lambda = {1, 0};
  c.quadrature_n = 400;
  r = run_scenario(c);
  ASSERT_EQ(r.code, 0) << r.err;
  j = io::json::parse(r.out);
  const Complex v(j["value"]["re"].get<double>(), j["value"]["im"].get<double>());
  const Complex o(j["oracle"]["re"].get<double>(), j["oracle"]["im"].get<double>());
  EXPECT_LE(rel_err(v, o), 1e-6);

  c.format = wb::Format::Csv;
  c.quadrature_n = 0;
  r = run_scenario(c);
  ASSERT_EQ(r.code, 0) << r.err;
  std::string header;
  EXPECT_EQ(csv_rows(r.out, &header).size(), 1u);
}

TEST(Workbench, CheckOrthAndFindViolation) {
  auto c = config(wb::Command::CheckOrth, kData + "/square.json");
  c.tf_input = kData + "/lattice_z4.json";
  auto r = run_scenario(c);
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = io::json::parse(r.out);
  EXPECT_TRUE(j["orthogonal"].get<bool>());
  EXPECT_EQ(j["points"].get<int>(), 625);

  c.input = kData + "/pentagon.json";
  c.max_reports = 5;
  c.confirm = true;
  r = run_scenario(c);
  ASSERT_EQ(r.code, 0) << r.err;
  j = io::json::parse(r.out);
  EXPECT_FALSE(j["orthogonal"].get<bool>());
  EXPECT_EQ(j["violations"].size(), 5u);
  EXPECT_TRUE(j["violations"][0].contains("oracle"));

  c = config(wb::Command::FindViolation, kData + "/pentagon.json");
  c.tf_input = kData + "/lattice_z4.json";
  c.cert_input = pentagon_cert_path();
  r = run_scenario(c);
  ASSERT_EQ(r.code, 0) << r.err;
  j = io::json::parse(r.out);
  EXPECT_TRUE(j["found"].is_null());  // frequency spread 4 never reaches R
  EXPECT_GT(j["stats"]["pairs_examined"].get<double>(), 0.0);
}

TEST(Workbench, ExitCodeContract) {
  auto r = run_scenario(config(wb::Command::Symmetry, kData + "/missing.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos);

  r = run_scenario(config(wb::Command::Symmetry, ""));
  EXPECT_EQ(r.code, 2);

  auto c = config(wb::Command::Intersect, kData + "/pentagon.json");
  c.t = {1, 2, 3};
  EXPECT_EQ(run_scenario(c).code, 2);

  c = config(wb::Command::Certificate, kData + "/square.json");
  c.eps = 0.1;
  r = run_scenario(c);
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("SymmetricInput"), std::string::npos);

  c = config(wb::Command::Certificate, kData + "/pentagon.json");
  c.eps = 2.0;
  r = run_scenario(c);
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("MarginVanished"), std::string::npos);

  c = config(wb::Command::Certificate, kData + "/pentagon.json");
  c.eps = 0.1;
  c.tol_zero = 1.0;
  r = run_scenario(c);
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("ScanFailure"), std::string::npos);

  c = config(wb::Command::Symmetry, kData + "/pentagon.json");
  c.format = wb::Format::Csv;
  EXPECT_EQ(run_scenario(c).code, 2);
}

// --- scans ------------------------------------------------------------------------------------

TEST(Scan, SquareStftBoxHasSincZeros) {
  auto c = config(wb::Command::Scan, kData + "/square.json");
  c.format = wb::Format::Csv;
  c.field = wb::Field::StftAbs;
  c.lo = {-3, -3};
  c.hi = {3, 3};
  c.grid_n = 61;
  const auto r = run_scenario(c);
  ASSERT_EQ(r.code, 0) << r.err;
  std::string header;
  const auto rows = csv_rows(r.out, &header);
  ASSERT_EQ(rows.size(), 61u * 61u);
  EXPECT_EQ(header, "t_1,t_2,lambda_1,lambda_2,re,im,abs");
  int zeros = 0;
  for (const auto& row : rows) {
    auto nonzero_int = [](double x) { return std::abs(x - std::round(x)) < 1e-9 && std::round(x) != 0.0; };
    const bool on_zero_set = nonzero_int(row[2]) || nonzero_int(row[3]);
    if (on_zero_set) {
      EXPECT_LT(row[6], 1e-10);
      ++zeros;
    } else {
      EXPECT_GT(row[6], 1e-10);
    }
  }
  EXPECT_EQ(zeros, 6 * 61 * 2 - 6 * 6);  // six nonzero integers per axis
}

TEST(Scan, DeterministicBytes) {
  auto c = config(wb::Command::Scan, kData + "/pentagon.json");
  c.format = wb::Format::Csv;
  c.field = wb::Field::Ft;
  c.lo = {-2, -2};
  c.hi = {2, 2};
  c.grid_n = 21;
  c.t = {0.25, -0.5};
  c.output = (scratch_dir() / "scan_a.csv").string();
  ASSERT_EQ(run_scenario(c).code, 0);
  c.output = (scratch_dir() / "scan_b.csv").string();
  ASSERT_EQ(run_scenario(c).code, 0);
  EXPECT_EQ(slurp((scratch_dir() / "scan_a.csv").string()), slurp((scratch_dir() / "scan_b.csv").string()));
}

TEST(Scan, ConeResidualReproducesCertificateConstant) {
  auto c = config(wb::Command::Scan, kData + "/pentagon.json");
  c.format = wb::Format::Csv;
  c.field = wb::Field::GtAbs;
  c.region = wb::Region::Cone;
  c.cert_input = pentagon_cert_path();
  const auto r = run_scenario(c);
  ASSERT_EQ(r.code, 0) << r.err;
  std::string header;
  const auto rows = csv_rows(r.out, &header);
  const auto cert = io::certificate_from_json(io::load_json_file(pentagon_cert_path()));
  double best = 0.0;
  for (const auto& row : rows) best = std::max(best, std::abs(row[2]) * row[6]);
  EXPECT_LE(std::abs(best - cert.C), 1e-12 * cert.C);
  EXPECT_NE(r.out.find("# coordinates=frame"), std::string::npos);
}

TEST(Scan, CylinderMatchesCertificateMinimum) {
  auto c = config(wb::Command::Scan, kData + "/pentagon.json");
  c.format = wb::Format::Csv;
  c.field = wb::Field::StftAbs;
  c.region = wb::Region::Cylinder;
  c.cert_input = pentagon_cert_path();
  const auto r = run_scenario(c);
  ASSERT_EQ(r.code, 0) << r.err;
  std::string header;
  const auto rows = csv_rows(r.out, &header);
  const auto cert = io::certificate_from_json(io::load_json_file(pentagon_cert_path()));
  double m = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) m = std::min(m, row[6]);
  EXPECT_EQ(m, cert.min_abs_scanned);
}

TEST(Scan, RegionErrors) {
  auto c = config(wb::Command::Scan, kData + "/pentagon.json");
  c.format = wb::Format::Csv;
  c.region = wb::Region::Cone;
  auto r = run_scenario(c);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("RegionFrameMissing"), std::string::npos);

  c.region = wb::Region::Box;
  c.field = wb::Field::GtAbs;
  c.lo = {0, 0};
  c.hi = {1, 1};
  EXPECT_NE(run_scenario(c).err.find("RegionFrameMissing"), std::string::npos);

  c.field = wb::Field::StftAbs;
  c.lo = {1, 0};
  c.hi = {1, 1};
  r = run_scenario(c);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos);

  c.lo = {0, 0};
  c.grid_n = 0;
  EXPECT_EQ(run_scenario(c).code, 2);

  c.grid_n.reset();
  c.lo.clear();
  EXPECT_EQ(run_scenario(c).code, 2);
}

// --- the installed command-line tool ----------------------------------------------------------

TEST(Cli, ExitCodesAndNegativeArguments) {
  const std::string cli = GONB_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int s = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status("symmetry --in " + kData + "/pentagon.json"), 0);
  const auto out = (scratch_dir() / "cli_square.json").string();
  EXPECT_EQ(status("intersect --in " + kData + "/pentagon.json --t -1,-1 --out " + out), 0);
  EXPECT_TRUE(same_point_set(vertices(io::polytope_from_json(io::load_json_file(out))),
                             {v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 1)}, 1e-9));
  EXPECT_EQ(status("symmetry --in " + kData + "/missing.json"), 2);
  EXPECT_EQ(status("frobnicate --in " + kData + "/pentagon.json"), 2);
  EXPECT_EQ(status("symmetry --bogus-flag"), 2);
  EXPECT_EQ(status("certificate --in " + kData + "/square.json --eps 0.1"), 3);
  EXPECT_EQ(status("scan --in " + kData + "/pentagon.json --format csv --region cone"), 2);
}
