#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gscnoma/capacity.hpp"
#include "gscnoma/montecarlo.hpp"

namespace gscnoma {

/// Analytic-versus-Monte-Carlo grid. Defaults: rho 0..40 dB step 10,
/// theta {0.5, 1}, n = 1..4 on both users, a_s {0.1, 0.24}, N = 4,
/// W_s = 1, W_w = 0.1, TB = 1.
struct OracleGridSpec {
  std::vector<double> snr_db{0, 10, 20, 30, 40};
  std::vector<double> theta{0.5, 1.0};
  std::vector<int> n{1, 2, 3, 4};
  std::vector<double> a_s{0.1, 0.24};
  int antennas = 4;
  double omega_s = 1.0;
  double omega_w = 0.1;
  double block_length = 1e-5;
  double bandwidth = 1e5;
  double z_limit = 3.0;
};

/// One compared quantity. quantity is one of strong, weak, oma_strong,
/// oma_weak, ergodic_strong, ergodic_weak; a_s is NaN for OMA rows and
/// theta is 0 for ergodic rows.
struct OracleRow {
  double rho_db = 0.0;
  double theta = 0.0;
  int n = 0;
  double a_s = 0.0;
  std::string quantity;
  double analytic = 0.0;
  double montecarlo = 0.0;
  double std_error = 0.0;
  bool pass = false;

  double z() const;
};

std::vector<OracleRow> run_oracle_grid(const OracleGridSpec& spec, const SimPlan& plan);

void write_oracle_csv(const std::vector<OracleRow>& rows, std::ostream& out);
void print_oracle_table(const std::vector<OracleRow>& rows, std::ostream& out);

}  // namespace gscnoma
