#include "gscnoma/validation.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "gscnoma/parallel.hpp"

namespace gscnoma {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string number(double x) {
  if (std::isnan(x)) return "";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", x);
  return buffer;
}

OracleRow compare(double rho_db, double theta, int n, double a_s, const char* quantity, double analytic,
                  const Estimate& estimate, double z_limit) {
  OracleRow row{rho_db, theta, n, a_s, quantity, analytic, estimate.value, estimate.std_error, false};
  const double diff = std::abs(analytic - estimate.value);
  row.pass = estimate.std_error > 0.0 ? diff <= z_limit * estimate.std_error : diff <= 1e-12;
  return row;
}

}  // namespace

double OracleRow::z() const {
  return std_error > 0.0 ? (montecarlo - analytic) / std_error : (montecarlo == analytic ? 0.0 : kNan);
}

std::vector<OracleRow> run_oracle_grid(const OracleGridSpec& spec, const SimPlan& plan) {
  plan.validate();
  // One draw set per n serves every rho, theta and a_s (common random numbers).
  std::vector<ChannelDraws> draws;
  for (int n : spec.n) {
    const GscSpec strong{spec.antennas, n, spec.omega_s};
    const GscSpec weak{spec.antennas, n, spec.omega_w};
    draws.push_back(draw_channels({strong, weak}, plan));
  }
  SimPlan inner = plan;
  inner.workers = 1;

  // Tasks: (snr, n) with every theta and a_s inside, in grid order.
  const std::size_t tasks = spec.snr_db.size() * spec.n.size();
  std::vector<std::vector<OracleRow>> per_task(tasks);
  parallel_for(
      tasks,
      [&](std::size_t task) {
        const double db = spec.snr_db[task / spec.n.size()];
        const std::size_t ni = task % spec.n.size();
        const int n = spec.n[ni];
        const ChannelDraws& d = draws[ni];
        const SnrPoint snr = SnrPoint::from_db(db);
        auto& rows = per_task[task];
        for (double theta : spec.theta) {
          const QosProfile qos{theta, spec.block_length, spec.bandwidth};
          for (double a : spec.a_s) {
            const PowerSplit split{a};
            const EcReport exact = ec_exact(d.pair, split, qos, snr);
            rows.push_back(compare(db, theta, n, a, "strong", exact.e_strong,
                                   estimate_ec_strong(d, split, qos, snr, inner), spec.z_limit));
            rows.push_back(compare(db, theta, n, a, "weak", exact.e_weak,
                                   estimate_ec_weak(d, split, qos, snr, inner), spec.z_limit));
          }
          const EcReport oma = ec_oma_pair(d.pair, qos, snr);
          const EstimatePair oma_mc = estimate_ec_oma_pair(d, qos, snr, inner);
          rows.push_back(compare(db, theta, n, kNan, "oma_strong", oma.e_strong, oma_mc.strong, spec.z_limit));
          rows.push_back(compare(db, theta, n, kNan, "oma_weak", oma.e_weak, oma_mc.weak, spec.z_limit));
        }
        for (double a : spec.a_s) {
          const PowerSplit split{a};
          const EcReport ergodic = ergodic_rate(d.pair, split, snr);
          const EstimatePair mc = estimate_ergodic(d, split, snr, inner);
          rows.push_back(compare(db, 0.0, n, a, "ergodic_strong", ergodic.e_strong, mc.strong, spec.z_limit));
          rows.push_back(compare(db, 0.0, n, a, "ergodic_weak", ergodic.e_weak, mc.weak, spec.z_limit));
        }
      },
      plan.workers);

  std::vector<OracleRow> rows;
  for (auto& part : per_task) rows.insert(rows.end(), part.begin(), part.end());
  return rows;
}

void write_oracle_csv(const std::vector<OracleRow>& rows, std::ostream& out) {
  out << "rho_db,theta,n,a_s,quantity,analytic,montecarlo,std_error,z,result\n";
  for (const auto& r : rows) {
    out << number(r.rho_db) << ',' << number(r.theta) << ',' << r.n << ',' << number(r.a_s) << ',' << r.quantity
        << ',' << number(r.analytic) << ',' << number(r.montecarlo) << ',' << number(r.std_error) << ','
        << number(r.z()) << ',' << (r.pass ? "pass" : "fail") << '\n';
  }
}

void print_oracle_table(const std::vector<OracleRow>& rows, std::ostream& out) {
  char line[256];
  std::snprintf(line, sizeof line, "%7s %6s %2s %5s %-15s %14s %14s %11s %7s %s\n", "rho_dB", "theta", "n", "a_s",
                "quantity", "analytic", "montecarlo", "std_error", "z", "result");
  out << line;
  std::size_t failures = 0;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%7.1f %6.2f %2d %5s %-15s %14.8f %14.8f %11.3e %7.2f %s\n", r.rho_db, r.theta,
                  r.n, std::isnan(r.a_s) ? "-" : number(r.a_s).c_str(), r.quantity.c_str(), r.analytic, r.montecarlo,
                  r.std_error, r.z(), r.pass ? "PASS" : "FAIL");
    out << line;
    if (!r.pass) ++failures;
  }
  out << rows.size() - failures << " of " << rows.size() << " comparisons within tolerance\n";
}

}  // namespace gscnoma
