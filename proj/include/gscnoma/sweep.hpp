#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gscnoma/capacity.hpp"
#include "gscnoma/montecarlo.hpp"
#include "gscnoma/optimizer.hpp"

namespace gscnoma {

enum class SweepMethod { exact, high_snr, low_snr, oma, ergodic, montecarlo, montecarlo_oma, montecarlo_ergodic };
std::string to_string(SweepMethod method);
SweepMethod parse_sweep_method(const std::string& name);

/// Both users share n; N and W are per user.
struct PairTemplate {
  int antennas_s = 4;
  int antennas_w = 4;
  std::vector<int> n{1};
  double omega_s = 1.0;
  double omega_w = 0.1;

  UserPairSpec pair(int combined) const;
  bool operator==(const PairTemplate&) const = default;
};

/// Fixed a_s, or a per-point search when `optimize` is set.
struct PowerSpec {
  bool optimize = false;
  double a_s = 0.24;
  SearchSpec search;

  bool operator==(const PowerSpec&) const = default;
};

struct SweepSpec {
  PairTemplate pair;
  double block_length = 1e-5;
  double bandwidth = 1e5;
  std::vector<double> snr_db;
  std::vector<double> theta;
  PowerSpec power;
  std::vector<SweepMethod> methods;
  SimPlan sim;

  void validate() const;
};

/// Parses the JSON sweep format (see README). Throws ConfigError with the
/// line/column of a syntax error or the path of the offending field.
SweepSpec parse_sweep_spec(const std::string& text);
SweepSpec load_sweep_spec(const std::filesystem::path& path);
/// Canonical JSON form; snr_db is always written as an explicit list.
std::string serialize_sweep_spec(const SweepSpec& spec);

/// One (grid point, method) record. Optional fields are empty where they do
/// not apply (a_s for OMA, std_error for analytic methods, values in error rows).
struct SweepRow {
  double rho_db = 0.0;
  double theta = 0.0;
  double nu = 0.0;
  int n_s = 0;
  int n_w = 0;
  std::optional<double> a_s;
  std::string method;
  std::optional<double> e_strong;
  std::optional<double> e_weak;
  std::optional<double> e_sum;
  std::optional<double> std_error;
  std::string status = "ok";  // ok | validity_error | numerical_error | precondition_error
  std::string message;        // diagnostic for error rows; not serialized

  bool operator==(const SweepRow&) const = default;
};

/// Evaluates every (snr, theta, n, method); rows are ordered by snr, theta,
/// n (in spec order) and then method, whatever the worker count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

enum class TableFormat { csv, json };
TableFormat parse_table_format(const std::string& name);

inline constexpr const char* kCsvHeader =
    "rho_db,theta,nu,n_s,n_w,a_s,method,e_strong,e_weak,e_sum,std_error,status";

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void write_json(const std::vector<SweepRow>& rows, std::ostream& out);
std::vector<SweepRow> parse_rows_json(const std::string& text);
/// Writes the table to `path`; throws Error naming the path on I/O failure.
void emit(const std::vector<SweepRow>& rows, TableFormat format, const std::filesystem::path& path);

/// A plotted series of a figure: `method` values, or `method - minus` when
/// `minus` is set, of one (theta, n) slice against rho_db.
struct FigureSeries {
  std::string label;
  SweepMethod method;
  std::optional<SweepMethod> minus;
  double theta;
  int n;
  bool points = false;  // markers rather than a line
};

struct FigureDefinition {
  std::string name;
  std::string title;
  std::string ylabel;
  SweepSpec spec;
  std::vector<FigureSeries> series;
};

inline constexpr std::size_t kFigureDefaultSamples = 100'000;

std::vector<std::string> figure_names();
/// Throws ConfigError for an unknown name.
FigureDefinition figure_definition(const std::string& name, const SimPlan& sim = {kFigureDefaultSamples});

/// Runs the figure's sweep and writes <name>.csv (long table), <name>.dat
/// (one column per series) and <name>.gp (gnuplot script) to `out_dir`.
/// Returns the rows.
std::vector<SweepRow> write_figure(const FigureDefinition& figure, const std::filesystem::path& out_dir);

}  // namespace gscnoma
