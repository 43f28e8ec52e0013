// Acceptance criteria 1-11. One PASS/FAIL line per criterion. The exit status
// is 0 when the set of failing criteria equals --expect-fail (criteria that are
// known to be unattainable and recorded as such), 1 otherwise.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gscnoma/capacity.hpp"
#include "gscnoma/distributions.hpp"
#include "gscnoma/error.hpp"
#include "gscnoma/numerics.hpp"
#include "gscnoma/optimizer.hpp"
#include "gscnoma/validation.hpp"

using namespace gscnoma;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

UserPairSpec base_pair(int n, int big_n = 4) { return {{big_n, n, 1.0}, {big_n, n, 0.1}}; }
QosProfile qos(double theta) { return {theta, 1e-5, 1e5}; }
SnrPoint db(double v) { return SnrPoint::from_db(v); }

const std::vector<double> kGridSnr{0, 10, 20, 30, 40};
const std::vector<double> kGridTheta{0.5, 1.0};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double optimized_sum(int n, double theta, double rho_db) {
  return optimize_power(base_pair(n), qos(theta), db(rho_db)).report.e_sum;
}

double oma_sum(int n, double theta, double rho_db) { return ec_oma_pair(base_pair(n), qos(theta), db(rho_db)).e_sum; }

Outcome criterion1() {
  const auto rows = run_oracle_grid({}, SimPlan{});
  Outcome o;
  int failed = 0;
  double worst = 0;
  for (const auto& r : rows) {
    worst = std::max(worst, std::abs(r.z()));
    if (!r.pass) {
      ++failed;
      o.detail += " [" + r.quantity + " rho=" + fmt("%g", r.rho_db) + " theta=" + fmt("%g", r.theta) +
                  " n=" + std::to_string(r.n) + " z=" + fmt("%.2f", r.z()) + "]";
    }
  }
  o.pass = failed == 0;
  o.detail = std::to_string(rows.size() - failed) + "/" + std::to_string(rows.size()) +
             " comparisons within 3 std_error, max |z| " + fmt("%.2f", worst) + o.detail;
  return o;
}

Outcome criterion2() {
  Outcome o;
  int points = 0, below = 0;
  for (double rho : kGridSnr) {
    for (double theta : kGridTheta) {
      for (int n = 1; n <= 4; ++n) {
        ++points;
        const double noma = optimized_sum(n, theta, rho);
        const double oma = oma_sum(n, theta, rho);
        if (noma < oma) {
          o.pass = false;
          ++below;
          o.detail += " [rho=" + fmt("%g", rho) + " theta=" + fmt("%g", theta) + " n=" + std::to_string(n) +
                      " NOMA " + fmt("%.4f", noma) + " < OMA " + fmt("%.4f", oma) + "]";
        }
      }
    }
  }
  o.detail = o.pass ? "NOMA >= OMA at all " + std::to_string(points) + " points"
                    : std::to_string(below) + "/" + std::to_string(points) + " points with NOMA < OMA:" + o.detail;
  return o;
}

Outcome criterion3() {
  Outcome o;
  double worst = 0;
  for (int n = 1; n <= 4; ++n) {
    const double exact = ec_exact(base_pair(n), PowerSplit{0.24}, qos(0.5), db(40)).e_sum;
    const double approx = ec_high_snr(base_pair(n), PowerSplit{0.24}, qos(0.5), db(40)).e_sum;
    const double rel = std::abs(exact - approx) / exact;
    worst = std::max(worst, rel);
    if (rel > 0.02) o.pass = false;
  }
  bool raised = false;
  try {
    ec_high_snr(base_pair(4), PowerSplit{0.24}, qos(1.0), db(40));
  } catch (const ValidityError&) {
    raised = true;
  }
  o.pass = o.pass && raised;
  o.detail = "max relative error " + fmt("%.3g", worst) + " at 40 dB, theta 0.5; ValidityError at nu >= 1: " +
             (raised ? "yes" : "no");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const double target = std::log2(5.0);
  double lo = INFINITY, hi = -INFINITY, worst = 0;
  std::string worst_at;
  for (int big_nw = 1; big_nw <= 4; ++big_nw) {
    for (double theta : {0.5, 2.0}) {
      const UserPairSpec pair{{4, 1, 1.0}, {big_nw, 1, 0.1}};
      const double ew = ec_exact(pair, PowerSplit{0.2}, qos(theta), db(40)).e_weak;
      lo = std::min(lo, ew);
      hi = std::max(hi, ew);
      const double rel = std::abs(ew - target) / target;
      if (rel > worst) {
        worst = rel;
        worst_at = "N_w=" + std::to_string(big_nw) + " theta=" + fmt("%g", theta) + " E_w=" + fmt("%.5f", ew);
      }
    }
  }
  const double spread = (hi - lo) / hi;
  o.pass = worst <= 0.01 && spread < 0.01;
  o.detail = "max |E_w - log2 5|/log2 5 = " + fmt("%.4f", worst) + " (" + worst_at + "), spread " +
             fmt("%.4f", spread);
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::ostringstream d;
  for (int n : {1, 4}) {
    const CombiningMode mode = n == 1 ? CombiningMode::sc : CombiningMode::mrc;
    double prev = INFINITY;
    d << (n == 1 ? "SC" : "MRC") << ":";
    for (double rho : {-10.0, -20.0, -30.0, -40.0}) {
      const double exact = ec_exact(base_pair(n), PowerSplit{0.24}, qos(0.5), db(rho)).e_sum;
      const double approx = ec_low_snr(base_pair(n), PowerSplit{0.24}, qos(0.5), db(rho), mode).e_sum;
      const double rel = std::abs(exact - approx) / exact;
      d << " " << fmt("%.2e", rel);
      if (rel > 0.05 || !(rel < prev)) o.pass = false;
      prev = rel;
    }
    d << "; ";
  }
  o.detail = "relative error at -10..-40 dB " + d.str();
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::vector<double> sums;
  for (int n = 1; n <= 4; ++n) sums.push_back(optimized_sum(n, 1.0, 20));
  std::ostringstream d;
  double prev = INFINITY;
  for (int i = 0; i < 3; ++i) {
    const double inc = sums[i + 1] - sums[i];
    d << " " << fmt("%.4f", inc);
    if (!(inc > 0) || !(inc < prev)) o.pass = false;
    prev = inc;
  }
  o.detail = "increments n=1->2->3->4:" + d.str();
  return o;
}

Outcome criterion7() {
  Outcome o;
  int violations = 0;
  double worst_limit = 0;
  for (double rho : kGridSnr) {
    for (int n = 1; n <= 4; ++n) {
      const auto bound = ergodic_rate(base_pair(n), PowerSplit{0.24}, db(rho));
      for (double theta : kGridTheta) {
        const auto r = ec_exact(base_pair(n), PowerSplit{0.24}, qos(theta), db(rho));
        if (r.e_sum > bound.e_sum + r.numeric_error) ++violations;
      }
      const auto limit = ec_exact(base_pair(n), PowerSplit{0.24}, qos(1e-6), db(rho));
      worst_limit = std::max({worst_limit, std::abs(limit.e_sum - bound.e_sum),
                              std::abs(limit.e_strong - bound.e_strong), std::abs(limit.e_weak - bound.e_weak)});
    }
  }
  bool increasing = true;
  std::ostringstream d;
  for (int n = 1; n <= 4; ++n) {
    const double bound = ergodic_rate(base_pair(n), PowerSplit{0.24}, db(20)).e_sum;
    double prev = -INFINITY;
    for (double theta : {0.5, 1.0, 2.0, 5.0}) {
      const double gap = bound - ec_exact(base_pair(n), PowerSplit{0.24}, qos(theta), db(20)).e_sum;
      if (!(gap > prev)) increasing = false;
      prev = gap;
    }
  }
  o.pass = violations == 0 && increasing && worst_limit <= 1e-3;
  o.detail = "bound violations " + std::to_string(violations) + ", gap increasing in theta: " +
             (increasing ? "yes" : "no") + ", max |EC(theta=1e-6) - ergodic| " + fmt("%.2e", worst_limit);
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::ostringstream d;
  for (int n = 1; n <= 4; ++n) {
    auto delta = [n](double theta, double rho) { return optimized_sum(n, theta, rho) - oma_sum(n, theta, rho); };
    double prev = -INFINITY;
    bool increasing = true;
    for (double rho : {0.0, 5.0, 10.0, 15.0, 20.0}) {
      const double v = delta(1.0, rho);
      if (!(v > prev)) increasing = false;
      prev = v;
    }
    const double d35 = delta(1.0, 35), d40 = delta(1.0, 40);
    const double change = std::abs(d40 - d35) / std::abs(d40);
    bool theta_decreasing = true;
    double prev_t = INFINITY;
    for (double theta : {0.5, 1.0, 2.0}) {
      const double v = delta(theta, 20);
      if (!(v < prev_t)) theta_decreasing = false;
      prev_t = v;
    }
    const bool ok = increasing && change < 0.02 && theta_decreasing;
    if (!ok) o.pass = false;
    d << " n=" << n << ": rising " << (increasing ? "yes" : "no") << ", 35->40 dB change " << fmt("%.4f", change)
      << ", falls with theta " << (theta_decreasing ? "yes" : "no") << ";";
  }
  o.detail = d.str();
  return o;
}

Outcome criterion9() {
  Outcome o;
  const QuadratureSettings tight{1e-12, 1e-15, 4000};
  double norm = 0, reduction = 0, moment = 0;
  bool dominance = true;
  for (int big_n = 1; big_n <= 6; ++big_n) {
    for (int n = 1; n <= big_n; ++n) {
      for (double w : {0.1, 1.0, 10.0}) {
        const GscDistribution d({big_n, n, w});
        const auto r = integrate_semi_infinite([&](double x) { return d.pdf(x); }, tight, n * w);
        norm = std::max(norm, std::abs(r.value - 1.0));
        for (int k = 1; k <= 2; ++k) {
          const auto q = integrate_semi_infinite([&](double x) { return std::pow(x, k) * d.pdf(x); }, tight, n * w);
          moment = std::max(moment, std::abs(d.raw_moment(k) - q.value) / q.value);
        }
      }
    }
    for (double w : {0.1, 1.0, 10.0}) {
      const GscDistribution sc({big_n, 1, w}), mrc({big_n, big_n, w});
      for (double t : {1e-6, 1e-3, 0.05, 0.3, 1.0, 2.5, 7.0, 20.0}) {
        const double x = t * w;
        const double max_density = big_n / w * std::exp(-t) * std::pow(-std::expm1(-t), big_n - 1);
        const double gamma_density = std::exp((big_n - 1) * std::log(x) - t - big_n * std::log(w) - std::lgamma(big_n));
        reduction = std::max({reduction, std::abs(sc.pdf(x) - max_density) / std::max(max_density, 1.0 / w),
                              std::abs(mrc.pdf(x) - gamma_density) / std::max(gamma_density, 1.0 / w)});
      }
    }
    for (int n = 1; n < big_n; ++n) {
      for (double x : {0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 15.0}) {
        if (gsc_cdf({big_n, n + 1, 1.0}, x) > gsc_cdf({big_n, n, 1.0}, x) + 1e-13) dominance = false;
      }
    }
  }
  o.pass = norm <= 1e-9 && reduction <= 1e-10 && moment <= 1e-8 && dominance;
  o.detail = "normalization " + fmt("%.1e", norm) + ", reductions " + fmt("%.1e", reduction) + ", moments " +
             fmt("%.1e", moment) + ", dominance " + (dominance ? "holds" : "violated");
  return o;
}

Outcome criterion10() {
  Outcome o;
  std::ostringstream d;
  for (int n = 1; n <= 4; ++n) {
    const auto r = optimize_power(base_pair(n), qos(1.0), db(10), SearchSpec{});
    d << " n=" << n << ": " << r.a_s;
    if (r.a_s != 0.24) o.pass = false;
  }
  o.detail = "a_s* over {0.01..0.24}:" + d.str();
  return o;
}

Outcome criterion11(const std::string& cli) {
  Outcome o;
  if (cli.empty()) return {false, "no --cli given"};
  const auto dir = std::filesystem::temp_directory_path() / "gscnoma_acceptance";
  std::filesystem::create_directories(dir);
  const auto a = dir / "validate_1.csv";
  const auto b = dir / "validate_2.csv";
  auto run = [&](const std::filesystem::path& out, int workers) {
    const std::string cmd = "GSCNOMA_WORKERS=" + std::to_string(workers) + " '" + cli +
                            "' validate --quiet --seed 20240607 --out '" + out.string() + "'";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  const int ca = run(a, 1);
  const int cb = run(b, 4);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const std::string sa = slurp(a), sb = slurp(b);
  o.pass = (ca == 0 || ca == 3) && ca == cb && !sa.empty() && sa == sb;
  o.detail = "two validate runs (1 and 4 workers): " + std::to_string(sa.size()) + " bytes, " +
             (sa == sb ? "identical" : "DIFFERENT") + ", exit codes " + std::to_string(ca) + "/" + std::to_string(cb);
  std::filesystem::remove_all(dir);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::set<int> expected;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) {
      cli = argv[++i];
    } else if ((arg == "--expect-fail" || arg == "--only") && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      std::string item;
      while (std::getline(list, item, ',')) {
        if (!item.empty()) (arg == "--only" ? only : expected).insert(std::stoi(item));
      }
    } else {
      std::cerr << "usage: acceptance [--cli PATH] [--expect-fail 2,4] [--only 1,3]\n";
      return 2;
    }
  }

  const std::vector<std::function<Outcome()>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5, criterion6,
      criterion7, criterion8, criterion9, criterion10, [&] { return criterion11(cli); }};

  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) failed.insert(id);
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail
              << (!o.pass && expected.count(id) ? " (known, recorded in the decisions ledger)" : "") << '\n'
              << std::flush;
  }

  std::set<int> relevant_expected;
  for (int id : expected) {
    if (only.empty() || only.count(id)) relevant_expected.insert(id);
  }
  if (failed != relevant_expected) {
    for (int id : relevant_expected) {
      if (!failed.count(id)) std::cout << "criterion " << id << " was expected to fail but passed\n";
    }
    return 1;
  }
  return 0;
}
