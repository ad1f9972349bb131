// gonb: command-line workbench for polytope windows, their Fourier
// transforms and Gabor orthogonality checks.
//
//   gonb symmetry --in data/pentagon.json
//   gonb intersect --in data/pentagon.json --t -1,-1
//   gonb stft --in data/square.json --t 0,0 --lambda 0,0
//   gonb scan --in data/square.json --field stft_abs --region box --lo -3,-3 --hi 3,3 --grid 61 --format csv

#include "gonb/workbench.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  using namespace gonb::workbench;

  CLI::App app{"gonb - polytope windows, STFT and Gabor orthogonality workbench"};
  app.set_version_flag("--version", "gonb 1.0");

  std::string command, format = "json", field = "stft_abs", region = "box";
  double eps = -1.0;
  ScenarioConfig cfg;
  int grid = -1;

  app.add_option("command", command,
                 "symmetry | intersect | ft | stft | certificate | check-orth | find-violation | scan")
      ->required();
  app.add_option("--in", cfg.input, "polytope JSON");
  app.add_option("--tf", cfg.tf_input, "time-frequency set JSON");
  app.add_option("--cert", cfg.cert_input, "certificate JSON");
  app.add_option("--out,-o", cfg.output, "output file (default: stdout)");
  app.add_option("--format", format, "json | csv");
  app.add_option("--t", cfg.t, "time shift, comma separated")->delimiter(',')->allow_extra_args(false);
  app.add_option("--lambda", cfg.lambda, "frequency, comma separated")->delimiter(',')->allow_extra_args(false);
  app.add_option("--eps", eps, "shift radius (default: bisection)");
  app.add_option("--eps-max", cfg.eps_max, "upper end of the eps bisection");
  app.add_option("--omega", cfg.omega, "cone aperture");
  app.add_option("--tol", cfg.tol, "facet volume tolerance for symmetry");
  app.add_option("--tol-zero", cfg.tol_zero, "threshold for V_gg = 0");
  app.add_option("--n-t", cfg.n_t, "shift-ball grid per axis");
  app.add_option("--quadrature", cfg.quadrature_n, "quadrature oracle resolution (0: off)");
  app.add_flag("--confirm", cfg.confirm, "confirm violations with the quadrature oracle");
  app.add_option("--max-reports", cfg.max_reports, "cap on reported violations (0: all)");
  app.add_option("--field", field, "ft | stft_abs | gt_abs");
  app.add_option("--region", region, "box | cone | cylinder");
  app.add_option("--lo", cfg.lo, "region lower corner")->delimiter(',')->allow_extra_args(false);
  app.add_option("--hi", cfg.hi, "region upper corner")->delimiter(',')->allow_extra_args(false);
  app.add_option("--grid", grid, "grid points per axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "gonb: ParseError: " << e.what() << '\n';
    return 2;
  }

  try {
    const auto cmd = parse_command(command);
    if (!cmd) throw gonb::Error(gonb::ErrorKind::ParseError, "unknown command '" + command + "'");
    cfg.command = *cmd;
    cfg.format = parse_format(format);
    cfg.field = parse_field(field);
    cfg.region = parse_region(region);
    if (eps >= 0.0) cfg.eps = eps;
    if (grid >= 0) cfg.grid_n = grid;
  } catch (const gonb::Error& e) {
    std::cerr << "gonb: " << e.what() << '\n';
    return exit_code(e.kind());
  }
  return run(cfg);
}
