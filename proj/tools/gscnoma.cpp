// gscnoma: sweep, figure, optimize and validate front end.
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gscnoma/error.hpp"
#include "gscnoma/optimizer.hpp"
#include "gscnoma/parallel.hpp"
#include "gscnoma/sweep.hpp"
#include "gscnoma/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

int report_row_errors(const std::vector<gscnoma::SweepRow>& rows) {
  int numerical = 0;
  for (const auto& r : rows) {
    if (r.status == "ok") continue;
    std::cerr << "warning: rho_db=" << r.rho_db << " theta=" << r.theta << " n=" << r.n_s << " " << r.method << ": "
              << r.status << ": " << r.message << '\n';
    if (r.status == "numerical_error") ++numerical;
  }
  return numerical > 0 ? kExitNumerical : kExitOk;
}

int run_sweep_command(const std::string& config, const std::string& out, const std::string& format) {
  const auto spec = gscnoma::load_sweep_spec(config);
  const auto table_format = gscnoma::parse_table_format(format);
  const auto rows = gscnoma::run_sweep(spec);
  gscnoma::emit(rows, table_format, out);
  return report_row_errors(rows);
}

int run_figure_command(const std::string& name, const std::string& out_dir, std::uint64_t samples,
                       std::uint64_t seed) {
  gscnoma::SimPlan sim;
  sim.samples = samples;
  sim.seed = seed;
  const auto figure = gscnoma::figure_definition(name, sim);
  const auto rows = gscnoma::write_figure(figure, out_dir);
  std::cout << "wrote " << figure.name << ".csv, " << figure.name << ".dat, " << figure.name << ".gp to " << out_dir
            << '\n';
  return report_row_errors(rows);
}

int run_optimize_command(const std::string& config) {
  const auto spec = gscnoma::load_sweep_spec(config);
  const gscnoma::SearchSpec search = spec.power.optimize ? spec.power.search : gscnoma::SearchSpec{};
  std::cout << "rho_db,theta,n_s,n_w,a_s,e_strong,e_weak,e_sum\n";
  for (double db : spec.snr_db) {
    for (double theta : spec.theta) {
      for (int n : spec.pair.n) {
        const auto result = gscnoma::optimize_power(spec.pair.pair(n), {theta, spec.block_length, spec.bandwidth},
                                                    gscnoma::SnrPoint::from_db(db), search, spec.sim);
        std::printf("%.12g,%.12g,%d,%d,%.12g,%.12g,%.12g,%.12g\n", db, theta, n, n, result.a_s,
                    result.report.e_strong, result.report.e_weak, result.report.e_sum);
      }
    }
  }
  return kExitOk;
}

int run_validate_command(const std::string& out, std::uint64_t samples, std::uint64_t seed, bool quiet) {
  gscnoma::SimPlan plan;
  plan.samples = samples;
  plan.seed = seed;
  const auto rows = gscnoma::run_oracle_grid({}, plan);
  if (!quiet) gscnoma::print_oracle_table(rows, std::cout);
  if (!out.empty()) {
    std::ofstream file(out, std::ios::binary);
    if (!file) throw gscnoma::Error("cannot open " + out + " for writing");
    gscnoma::write_oracle_csv(rows, file);
    if (!file.flush()) throw gscnoma::Error("write failed: " + out);
  }
  for (const auto& r : rows) {
    if (!r.pass) return kExitValidation;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective capacity of two-user downlink NOMA with GSC receivers"};
  app.require_subcommand(1);
  app.footer(std::string("Environment: ") + gscnoma::kWorkersEnv + " sets the worker count, " +
             gscnoma::simd::kIsaEnv + " forces the kernel set (scalar|avx2).\n"
             "Exit codes: 0 ok, 1 config error, 2 numerical failure, 3 validation failure.");

  std::string config;
  std::string out;
  std::string format = "csv";
  auto* sweep = app.add_subcommand("sweep", "Evaluate a configured grid and write a CSV or JSON table");
  sweep->add_option("config", config, "Sweep configuration (JSON)")->required();
  sweep->add_option("--out", out, "Output path")->required();
  sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::string figure_name;
  std::string out_dir = ".";
  std::uint64_t figure_samples = gscnoma::kFigureDefaultSamples;
  std::uint64_t seed = gscnoma::SimPlan{}.seed;
  auto* figure = app.add_subcommand("figure", "Write the data and gnuplot script of one figure");
  figure->add_option("name", figure_name, "fig1 .. fig5")->required();
  figure->add_option("--out-dir", out_dir, "Output directory");
  figure->add_option("--samples", figure_samples, "Monte Carlo samples for marker series");
  figure->add_option("--seed", seed, "Monte Carlo seed");

  std::string optimize_config;
  auto* optimize = app.add_subcommand("optimize", "Search a_s at every grid point of a configuration");
  optimize->add_option("config", optimize_config, "Sweep configuration (JSON)")->required();

  std::string validate_out;
  std::uint64_t validate_samples = 1'000'000;
  bool quiet = false;
  auto* validate = app.add_subcommand("validate", "Compare analytic ECs with Monte Carlo on the oracle grid");
  validate->add_option("--out", validate_out, "Also write the comparison as CSV");
  validate->add_option("--samples", validate_samples, "Monte Carlo samples per estimate");
  validate->add_option("--seed", seed, "Monte Carlo seed");
  validate->add_flag("--quiet", quiet, "Suppress the table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sweep) return run_sweep_command(config, out, format);
    if (*figure) return run_figure_command(figure_name, out_dir, figure_samples, seed);
    if (*optimize) return run_optimize_command(optimize_config);
    if (*validate) return run_validate_command(validate_out, validate_samples, seed, quiet);
  } catch (const gscnoma::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const gscnoma::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}
