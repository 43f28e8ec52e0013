#include "gscnoma/optimizer.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "gscnoma/error.hpp"
#include "gscnoma/parallel.hpp"

namespace gscnoma {
namespace {

double snap(double x) { return std::round(x * 1e12) / 1e12; }

EcReport evaluate(const UserPairSpec& pair, const ChannelDraws* draws, const QosProfile& qos, const SnrPoint& snr,
                  const PowerSplit& split, const SearchSpec& search, const SimPlan& plan) {
  if (search.evaluator == Evaluator::analytic) {
    return search.objective == Objective::sum_ec ? ec_exact(pair, split, qos, snr) : ergodic_rate(pair, split, snr);
  }
  EcReport report;
  report.method = search.objective == Objective::sum_ec ? EcMethod::exact : EcMethod::ergodic_bound;
  if (search.objective == Objective::sum_ec) {
    const Estimate s = estimate_ec_strong(*draws, split, qos, snr, plan);
    const Estimate w = estimate_ec_weak(*draws, split, qos, snr, plan);
    report.e_strong = s.value;
    report.e_weak = w.value;
    report.numeric_error = s.std_error + w.std_error;
  } else {
    const EstimatePair r = estimate_ergodic(*draws, split, snr, plan);
    report.e_strong = r.strong.value;
    report.e_weak = r.weak.value;
    report.numeric_error = r.strong.std_error + r.weak.std_error;
  }
  report.e_sum = report.e_strong + report.e_weak;
  return report;
}

OptimizationResult run(const UserPairSpec& pair, const ChannelDraws* draws, const QosProfile& qos,
                       const SnrPoint& snr, const SearchSpec& search, const SimPlan& plan) {
  search.validate();
  pair.validate();
  qos.validate();
  snr.validate();
  OptimizationResult result;
  result.grid = search.grid();
  std::vector<EcReport> reports(result.grid.size());
  // Monte Carlo estimates are already parallel inside; analytic points are not.
  const std::size_t workers = search.evaluator == Evaluator::analytic ? plan.workers : 1;
  parallel_for(
      result.grid.size(),
      [&](std::size_t i) {
        try {
          reports[i] = evaluate(pair, draws, qos, snr, PowerSplit{result.grid[i]}, search, plan);
        } catch (const Error& e) {
          std::ostringstream os;
          os << "optimize_power: evaluation failed at a_s=" << result.grid[i] << ": " << e.what();
          throw NumericalError(os.str());
        }
      },
      workers);
  std::size_t best = 0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    result.objective.push_back(reports[i].e_sum);
    if (reports[i].e_sum >= reports[best].e_sum) best = i;
  }
  result.a_s = result.grid[best];
  result.report = reports[best];
  return result;
}

}  // namespace

std::string to_string(Objective objective) { return objective == Objective::sum_ec ? "sum_ec" : "sum_rate"; }
std::string to_string(Evaluator evaluator) { return evaluator == Evaluator::analytic ? "analytic" : "montecarlo"; }

Objective parse_objective(const std::string& name) {
  if (name == "sum_ec") return Objective::sum_ec;
  if (name == "sum_rate") return Objective::sum_rate;
  throw ConfigError("unknown objective '" + name + "' (expected sum_ec or sum_rate)");
}

Evaluator parse_evaluator(const std::string& name) {
  if (name == "analytic") return Evaluator::analytic;
  if (name == "montecarlo") return Evaluator::montecarlo;
  throw ConfigError("unknown evaluator '" + name + "' (expected analytic or montecarlo)");
}

void SearchSpec::validate() const {
  std::ostringstream os;
  if (!(a_min > 0.0)) os << "a_min must be > 0";
  else if (!(a_max < kFeasibilityBound)) os << "a_max must be < " << kFeasibilityBound;
  else if (!(a_min <= a_max)) os << "a_min must not exceed a_max";
  else if (!(step > 0.0) || !std::isfinite(step)) os << "step must be > 0";
  else if ((a_max - a_min) / step > 1e6) os << "grid has more than 1e6 points";
  if (!os.str().empty()) throw ConfigError("SearchSpec: " + os.str());
}

std::vector<double> SearchSpec::grid() const {
  validate();
  std::vector<double> points;
  for (std::size_t i = 0;; ++i) {
    const double a = snap(a_min + static_cast<double>(i) * step);
    if (a > a_max + 1e-12) break;
    points.push_back(std::min(a, a_max));
  }
  if (std::abs(points.back() - a_max) > 1e-12) points.push_back(a_max);
  return points;
}

OptimizationResult optimize_power(const UserPairSpec& pair, const QosProfile& qos, const SnrPoint& snr,
                                  const SearchSpec& search, const SimPlan& plan) {
  if (search.evaluator == Evaluator::montecarlo) {
    const ChannelDraws draws = draw_channels(pair, plan);
    return run(pair, &draws, qos, snr, search, plan);
  }
  return run(pair, nullptr, qos, snr, search, plan);
}

OptimizationResult optimize_power(const ChannelDraws& draws, const QosProfile& qos, const SnrPoint& snr,
                                  const SearchSpec& search, const SimPlan& plan) {
  return run(draws.pair, &draws, qos, snr, search, plan);
}

}  // namespace gscnoma
