#include <cmath>
#include <cstdio>
#include <fstream>

#include "gscnoma/error.hpp"
#include "gscnoma/sweep.hpp"

namespace gscnoma {
namespace {

std::vector<double> db_range(double start, double stop, double step) {
  std::vector<double> out;
  for (double x = start; x <= stop + 1e-9; x += step) out.push_back(std::round(x * 1e9) / 1e9);
  return out;
}

std::string theta_tag(double theta) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%g", theta);
  return buffer;
}

// Reference parameters: N_s = N_w = 4, W_s = 1, W_w = 0.1, T = 0.01 ms, B = 100 kHz.
SweepSpec reference_spec(std::vector<double> snr_db, std::vector<double> theta, std::vector<SweepMethod> methods,
                     const SimPlan& sim) {
  SweepSpec spec;
  spec.pair = {4, 4, {1, 2, 3, 4}, 1.0, 0.1};
  spec.snr_db = std::move(snr_db);
  spec.theta = std::move(theta);
  spec.methods = std::move(methods);
  spec.power.a_s = 0.24;
  spec.sim = sim;
  return spec;
}

const SweepRow* find_row(const std::vector<SweepRow>& rows, double db, double theta, int n, const std::string& method) {
  for (const auto& r : rows) {
    if (r.rho_db == db && r.theta == theta && r.n_s == n && r.method == method) return &r;
  }
  return nullptr;
}

std::optional<double> series_value(const std::vector<SweepRow>& rows, const FigureSeries& s, double db) {
  const SweepRow* a = find_row(rows, db, s.theta, s.n, to_string(s.method));
  if (!a || !a->e_sum) return std::nullopt;
  if (!s.minus) return a->e_sum;
  const SweepRow* b = find_row(rows, db, s.theta, s.n, to_string(*s.minus));
  if (!b || !b->e_sum) return std::nullopt;
  return *a->e_sum - *b->e_sum;
}

}  // namespace

std::vector<std::string> figure_names() { return {"fig1", "fig2", "fig3", "fig4", "fig5"}; }

FigureDefinition figure_definition(const std::string& name, const SimPlan& sim) {
  using M = SweepMethod;
  FigureDefinition f;
  f.name = name;
  if (name == "fig1") {
    f.title = "Sum EC of NOMA-GSC and OMA-GSC, theta = 1";
    f.ylabel = "Sum EC (bits/s/Hz)";
    f.spec = reference_spec(db_range(0, 40, 5), {1.0}, {M::exact, M::oma, M::montecarlo}, sim);
    f.spec.power.optimize = true;
    for (int n = 1; n <= 4; ++n) {
      f.series.push_back({"NOMA_n" + std::to_string(n), M::exact, std::nullopt, 1.0, n});
      f.series.push_back({"OMA_n" + std::to_string(n), M::oma, std::nullopt, 1.0, n});
      f.series.push_back({"MC_NOMA_n" + std::to_string(n), M::montecarlo, std::nullopt, 1.0, n, true});
    }
  } else if (name == "fig2") {
    f.title = "Difference between the sum ECs of NOMA-GSC and OMA-GSC";
    f.ylabel = "E_sum(NOMA) - E_sum(OMA) (bits/s/Hz)";
    f.spec = reference_spec(db_range(0, 40, 5), {0.5, 1.0, 2.0}, {M::exact, M::oma}, sim);
    for (double theta : f.spec.theta) {
      for (int n = 1; n <= 4; ++n) {
        f.series.push_back({"dE_theta" + theta_tag(theta) + "_n" + std::to_string(n), M::exact, M::oma, theta, n});
      }
    }
  } else if (name == "fig3") {
    // theta = 0.5 gives nu = 0.7213 < 1, inside the high-SNR validity range.
    f.title = "High-SNR approximation of the sum EC, theta = 0.5";
    f.ylabel = "Sum EC (bits/s/Hz)";
    f.spec = reference_spec(db_range(0, 40, 5), {0.5}, {M::exact, M::high_snr}, sim);
    for (int n = 1; n <= 4; ++n) {
      f.series.push_back({"exact_n" + std::to_string(n), M::exact, std::nullopt, 0.5, n});
      f.series.push_back({"highSNR_n" + std::to_string(n), M::high_snr, std::nullopt, 0.5, n, true});
    }
  } else if (name == "fig4") {
    f.title = "Low-SNR approximation of the sum EC, theta = 0.5";
    f.ylabel = "Sum EC (bits/s/Hz)";
    f.spec = reference_spec(db_range(-40, 0, 5), {0.5}, {M::exact, M::low_snr}, sim);
    for (int n = 1; n <= 4; ++n) {
      f.series.push_back({"exact_n" + std::to_string(n), M::exact, std::nullopt, 0.5, n});
      f.series.push_back({"lowSNR_n" + std::to_string(n), M::low_snr, std::nullopt, 0.5, n, true});
    }
  } else if (name == "fig5") {
    f.title = "Average achievable sum rate minus sum EC";
    f.ylabel = "E~_sum - E_sum (bits/s/Hz)";
    f.spec = reference_spec(db_range(0, 40, 5), {0.5, 1.0, 2.0}, {M::exact, M::ergodic}, sim);
    for (double theta : f.spec.theta) {
      for (int n : {1, 4}) {
        f.series.push_back(
            {"gap_theta" + theta_tag(theta) + "_n" + std::to_string(n), M::ergodic, M::exact, theta, n});
      }
    }
  } else {
    throw ConfigError("unknown figure '" + name + "' (expected fig1..fig5)");
  }
  return f;
}

std::vector<SweepRow> write_figure(const FigureDefinition& figure, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create " + out_dir.string() + ": " + ec.message());
  const std::vector<SweepRow> rows = run_sweep(figure.spec);
  emit(rows, TableFormat::csv, out_dir / (figure.name + ".csv"));

  const auto dat_path = out_dir / (figure.name + ".dat");
  std::ofstream dat(dat_path, std::ios::binary);
  if (!dat) throw Error("cannot open " + dat_path.string() + " for writing");
  dat << "# rho_db";
  for (const auto& s : figure.series) dat << ' ' << s.label;
  dat << '\n';
  for (double db : figure.spec.snr_db) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.12g", db);
    dat << buffer;
    for (const auto& s : figure.series) {
      const auto v = series_value(rows, s, db);
      if (v) {
        std::snprintf(buffer, sizeof buffer, "%.12g", *v);
        dat << ' ' << buffer;
      } else {
        dat << " NaN";
      }
    }
    dat << '\n';
  }
  if (!dat.flush()) throw Error("write failed: " + dat_path.string());

  const auto gp_path = out_dir / (figure.name + ".gp");
  std::ofstream gp(gp_path, std::ios::binary);
  if (!gp) throw Error("cannot open " + gp_path.string() + " for writing");
  gp << "# gnuplot script; run: gnuplot " << figure.name << ".gp\n"
     << "set terminal pngcairo size 900,600\n"
     << "set output '" << figure.name << ".png'\n"
     << "set title '" << figure.title << "'\n"
     << "set xlabel 'rho (dB)'\n"
     << "set ylabel '" << figure.ylabel << "'\n"
     << "set key outside right\n"
     << "set grid\n"
     << "set datafile missing 'NaN'\n"
     << "plot";
  for (std::size_t i = 0; i < figure.series.size(); ++i) {
    const auto& s = figure.series[i];
    gp << (i ? ", \\\n     " : " ") << "'" << figure.name << ".dat' using 1:" << i + 2 << " with "
       << (s.points ? "points" : "lines") << " title '" << s.label << "'";
  }
  gp << '\n';
  if (!gp.flush()) throw Error("write failed: " + gp_path.string());
  return rows;
}

}  // namespace gscnoma
