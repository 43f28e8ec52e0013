#include <optional>

#include "gscnoma/error.hpp"
#include "gscnoma/parallel.hpp"
#include "gscnoma/sweep.hpp"

namespace gscnoma {
namespace {

bool is_montecarlo(SweepMethod m) {
  return m == SweepMethod::montecarlo || m == SweepMethod::montecarlo_oma || m == SweepMethod::montecarlo_ergodic;
}

bool uses_power(SweepMethod m) { return m != SweepMethod::oma && m != SweepMethod::montecarlo_oma; }

void fill(SweepRow& row, double strong, double weak) {
  row.e_strong = strong;
  row.e_weak = weak;
  row.e_sum = strong + weak;
}

void fill(SweepRow& row, const EcReport& r) { fill(row, r.e_strong, r.e_weak); }

void fill(SweepRow& row, const EstimatePair& p) {
  fill(row, p.strong.value, p.weak.value);
  row.std_error = p.strong.std_error + p.weak.std_error;
}

void record_error(SweepRow& row, const char* status, const std::exception& e) {
  row.status = status;
  row.message = e.what();
  row.e_strong.reset();
  row.e_weak.reset();
  row.e_sum.reset();
  row.std_error.reset();
}

// Runs `body` and converts library errors into the row's status.
template <typename Body>
void guarded(SweepRow& row, Body&& body) {
  try {
    body();
  } catch (const ValidityError& e) {
    record_error(row, "validity_error", e);
  } catch (const PreconditionError& e) {
    record_error(row, "precondition_error", e);
  } catch (const std::exception& e) {
    record_error(row, "numerical_error", e);
  }
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  bool need_draws = spec.power.optimize && spec.power.search.evaluator == Evaluator::montecarlo;
  for (auto m : spec.methods) need_draws = need_draws || is_montecarlo(m);

  std::vector<std::optional<ChannelDraws>> draws(spec.pair.n.size());
  if (need_draws) {
    for (std::size_t i = 0; i < spec.pair.n.size(); ++i) draws[i] = draw_channels(spec.pair.pair(spec.pair.n[i]), spec.sim);
  }
  SimPlan inner = spec.sim;
  inner.workers = 1;

  const std::size_t per_snr = spec.theta.size() * spec.pair.n.size();
  const std::size_t tasks = spec.snr_db.size() * per_snr;
  std::vector<std::vector<SweepRow>> per_task(tasks);

  parallel_for(
      tasks,
      [&](std::size_t task) {
        const double db = spec.snr_db[task / per_snr];
        const double theta = spec.theta[(task % per_snr) / spec.pair.n.size()];
        const std::size_t ni = task % spec.pair.n.size();
        const int n = spec.pair.n[ni];
        const UserPairSpec pair = spec.pair.pair(n);
        const QosProfile qos{theta, spec.block_length, spec.bandwidth};
        const SnrPoint snr = SnrPoint::from_db(db);
        const ChannelDraws* d = draws[ni] ? &*draws[ni] : nullptr;

        SweepRow base;
        base.rho_db = db;
        base.theta = theta;
        base.nu = qos.nu();
        base.n_s = n;
        base.n_w = n;

        // The power split shared by every NOMA method at this point.
        std::optional<double> a_s;
        std::optional<SweepRow> power_failure;
        if (spec.power.optimize) {
          SweepRow probe = base;
          guarded(probe, [&] {
            a_s = d ? optimize_power(*d, qos, snr, spec.power.search, inner).a_s
                    : optimize_power(pair, qos, snr, spec.power.search, inner).a_s;
          });
          if (!a_s) power_failure = probe;
        } else {
          a_s = spec.power.a_s;
        }

        for (auto method : spec.methods) {
          SweepRow row = base;
          row.method = to_string(method);
          if (uses_power(method)) {
            if (power_failure) {
              row.status = power_failure->status;
              row.message = power_failure->message;
              per_task[task].push_back(row);
              continue;
            }
            row.a_s = a_s;
          }
          const PowerSplit split{a_s.value_or(0.24)};
          guarded(row, [&] {
            switch (method) {
              case SweepMethod::exact:
                fill(row, ec_exact(pair, split, qos, snr));
                break;
              case SweepMethod::high_snr:
                fill(row, ec_high_snr(pair, split, qos, snr));
                break;
              case SweepMethod::low_snr:
                fill(row, ec_low_snr(pair, split, qos, snr, combining_mode(pair)));
                break;
              case SweepMethod::oma:
                fill(row, ec_oma_pair(pair, qos, snr));
                break;
              case SweepMethod::ergodic:
                fill(row, ergodic_rate(pair, split, snr));
                break;
              case SweepMethod::montecarlo:
                fill(row, EstimatePair{estimate_ec_strong(*d, split, qos, snr, inner),
                                       estimate_ec_weak(*d, split, qos, snr, inner)});
                break;
              case SweepMethod::montecarlo_oma:
                fill(row, estimate_ec_oma_pair(*d, qos, snr, inner));
                break;
              case SweepMethod::montecarlo_ergodic:
                fill(row, estimate_ergodic(*d, split, snr, inner));
                break;
            }
          });
          per_task[task].push_back(row);
        }
      },
      spec.sim.workers);

  std::vector<SweepRow> rows;
  rows.reserve(tasks * spec.methods.size());
  for (auto& part : per_task) rows.insert(rows.end(), part.begin(), part.end());
  return rows;
}

}  // namespace gscnoma
