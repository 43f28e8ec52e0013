#pragma once

#include <string>
#include <vector>

#include "gscnoma/capacity.hpp"
#include "gscnoma/montecarlo.hpp"

namespace gscnoma {

/// Upper limit on a_s for the 2 bits/s/Hz weak-user target: 0 < a_s < 0.25.
inline constexpr double kFeasibilityBound = 0.25;

enum class Objective { sum_ec, sum_rate };
enum class Evaluator { analytic, montecarlo };

std::string to_string(Objective objective);
std::string to_string(Evaluator evaluator);
Objective parse_objective(const std::string& name);
Evaluator parse_evaluator(const std::string& name);

/// Grid a_min, a_min + step, ... up to a_max; a_max is appended when the
/// step does not land on it.
struct SearchSpec {
  double a_min = 0.01;
  double a_max = 0.24;
  double step = 0.01;
  Objective objective = Objective::sum_ec;
  Evaluator evaluator = Evaluator::analytic;

  void validate() const;
  std::vector<double> grid() const;
  bool operator==(const SearchSpec&) const = default;
};

struct OptimizationResult {
  double a_s = 0.0;
  EcReport report;
  std::vector<double> grid;
  std::vector<double> objective;  // per grid point
};

/// Maximizes the objective over the grid; ties go to the larger a_s. The
/// Monte Carlo evaluator uses `plan` (fixed seed, common random numbers
/// across the grid). An evaluator failure is rethrown naming the a_s.
OptimizationResult optimize_power(const UserPairSpec& pair, const QosProfile& qos, const SnrPoint& snr,
                                  const SearchSpec& search = {}, const SimPlan& plan = {});

/// Same, reusing already drawn channels for the Monte Carlo evaluator.
OptimizationResult optimize_power(const ChannelDraws& draws, const QosProfile& qos, const SnrPoint& snr,
                                  const SearchSpec& search, const SimPlan& plan);

}  // namespace gscnoma
