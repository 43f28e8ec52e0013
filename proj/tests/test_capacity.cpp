#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gscnoma/capacity.hpp"
#include "gscnoma/error.hpp"
#include "oracles/oracle_values.hpp"

using namespace gscnoma;

namespace {

UserPairSpec base_pair(int n, int big_n = 4) { return {{big_n, n, 1.0}, {big_n, n, 0.1}}; }
QosProfile qos(double theta) { return {theta, 1e-5, 1e5}; }
SnrPoint db(double v) { return SnrPoint::from_db(v); }
const PowerSplit kSplit{0.24};

bool within_mc(double value, const oracle::McValue& mc) { return std::abs(value - mc.value) <= 3.0 * mc.std_error; }

}  // namespace

TEST_CASE("profile and operating point types") {
  CHECK(qos(1.0).nu() == doctest::Approx(1.0 / std::numbers::ln2).epsilon(1e-15));
  CHECK_THROWS_AS(QosProfile({-1.0, 1e-5, 1e5}).validate(), ConfigError);
  CHECK_THROWS_AS(QosProfile({1.0, 0.0, 1e5}).validate(), ConfigError);
  CHECK_THROWS_AS(PowerSplit{0.5}.validate(), ConfigError);
  CHECK_THROWS_AS(PowerSplit{0.0}.validate(), ConfigError);
  CHECK_THROWS_AS(SnrPoint{0.0}.validate(), ConfigError);
  CHECK(db(20.0).rho == doctest::Approx(100.0).epsilon(1e-15));
  CHECK(db(20.0).db() == doctest::Approx(20.0).epsilon(1e-15));
}

TEST_CASE("ec_strong against the mpmath and Monte Carlo oracles") {
  const double v = ec_strong(base_pair(4), kSplit, qos(1.0), db(10.0));
  CHECK(v == doctest::Approx(oracle::kEcStrongMrc4Rho10dB).epsilon(1e-9));
  CHECK(within_mc(v, oracle::kMcEcStrongMrc4Rho10dB));
}

TEST_CASE("ec_strong limits") {
  CHECK(ec_strong(base_pair(4), PowerSplit{1e-12}, qos(1.0), db(10.0)) < 1e-10);
  const double near_zero = ec_strong(base_pair(1, 1), kSplit, qos(1e-6), SnrPoint{10.0});
  CHECK(std::abs(near_zero - oracle::kErgodicStrongN1Rho10) <= 1e-4);
  CHECK(std::abs(near_zero - oracle::kMcErgodicStrongN1Rho10.value) <= 1e-4 + 3 * oracle::kMcErgodicStrongN1Rho10.std_error);
}

TEST_CASE("ec_weak_sc") {
  const double v = ec_weak_sc(base_pair(1), kSplit, qos(1.0), db(10.0));
  CHECK(v == doctest::Approx(oracle::kEcWeakSc4Rho10dB).epsilon(1e-9));
  CHECK(within_mc(v, oracle::kMcEcWeakSc4Rho10dB));
  CHECK(ec_weak_sc(base_pair(1), PowerSplit{0.5 - 1e-13}, qos(1.0), db(10.0)) > 0.0);
  CHECK_THROWS_AS(ec_weak_sc(base_pair(2), kSplit, qos(1.0), db(10.0)), PreconditionError);
  for (int big_n = 1; big_n <= 4; ++big_n) {
    const double e = ec_weak_sc(base_pair(1, big_n), PowerSplit{0.2}, qos(1.0), SnrPoint{1e6});
    CHECK(std::abs(e - std::log2(5.0)) <= 0.01 * std::log2(5.0));
  }
}

TEST_CASE("ec_weak_mrc") {
  const double v = ec_weak_mrc(base_pair(4), kSplit, qos(1.0), db(20.0));
  CHECK(v == doctest::Approx(oracle::kEcWeakMrc4Rho20dB).epsilon(1e-9));
  CHECK(within_mc(v, oracle::kMcEcWeakMrc4Rho20dB));
  for (double theta : {0.5, 1.0, 2.0}) {
    CHECK(ec_weak_mrc(base_pair(1, 1), kSplit, qos(theta), db(10.0)) ==
          doctest::Approx(ec_weak_sc(base_pair(1, 1), kSplit, qos(theta), db(10.0))).epsilon(1e-9));
  }
  CHECK_THROWS_AS(ec_weak_mrc(base_pair(2), kSplit, qos(1.0), db(10.0)), PreconditionError);
}

TEST_CASE("ec_weak_general") {
  CHECK(within_mc(ec_weak_general(base_pair(2), kSplit, qos(1.0), db(15.0)), oracle::kMcEcWeakGeneral42Rho15dB));
  for (double rho_db : {0.0, 10.0, 30.0}) {
    for (double theta : {0.5, 2.0}) {
      CHECK(ec_weak_general(base_pair(1), kSplit, qos(theta), db(rho_db)) ==
            doctest::Approx(ec_weak_sc(base_pair(1), kSplit, qos(theta), db(rho_db))).epsilon(1e-8));
      CHECK(ec_weak_general(base_pair(4), kSplit, qos(theta), db(rho_db)) ==
            doctest::Approx(ec_weak_mrc(base_pair(4), kSplit, qos(theta), db(rho_db))).epsilon(1e-8));
    }
  }
}

TEST_CASE("ec_exact picks the weak-user route") {
  CHECK(ec_exact(base_pair(1), kSplit, qos(1.0), db(10.0)).method == EcMethod::sc_closed);
  CHECK(ec_exact(base_pair(4), kSplit, qos(1.0), db(10.0)).method == EcMethod::mrc_closed);
  const auto r = ec_exact(base_pair(2), kSplit, qos(1.0), db(10.0));
  CHECK(r.method == EcMethod::general_quadrature);
  CHECK(r.e_sum == doctest::Approx(r.e_strong + r.e_weak).epsilon(1e-15));
  CHECK(r.e_strong >= 0.0);
  CHECK(r.e_weak >= 0.0);
}

TEST_CASE("ec_oma") {
  const double v = ec_oma({4, 4, 1.0}, qos(1.0), db(10.0));
  CHECK(v == doctest::Approx(oracle::kEcOmaMrc4Rho10dB).epsilon(1e-9));
  CHECK(within_mc(v, oracle::kMcEcOmaMrc4Rho10dB));
  CHECK(ec_oma({4, 2, 1.0}, qos(1.0), SnrPoint{1e-12}) < 1e-10);
  const double half_rate = ergodic_rate_oma(base_pair(2), db(20.0)).e_strong;
  CHECK(std::abs(ec_oma({4, 2, 1.0}, qos(1e-6), db(20.0)) - half_rate) <= 1e-4);
  CHECK(std::abs(ec_oma({4, 2, 1.0}, qos(0.0), db(20.0)) - half_rate) <= 1e-12);
}

TEST_CASE("ergodic rates") {
  const auto e1 = ergodic_rate(base_pair(1, 1), kSplit, SnrPoint{10.0});
  CHECK(e1.e_strong == doctest::Approx(oracle::kErgodicStrongN1Rho10).epsilon(1e-9));
  const auto e42 = ergodic_rate(base_pair(2), kSplit, db(20.0));
  CHECK(within_mc(e42.e_strong, oracle::kMcErgodicStrong42Rho20dB));
  CHECK(within_mc(e42.e_weak, oracle::kMcErgodicWeak42Rho20dB));
  CHECK(e42.method == EcMethod::ergodic_bound);
  const auto tiny = ergodic_rate(base_pair(2), kSplit, SnrPoint{1e-12});
  CHECK(tiny.e_sum < 1e-10);
  const auto sat = ergodic_rate(base_pair(2), PowerSplit{0.2}, SnrPoint{1e6});
  CHECK(std::abs(sat.e_weak - std::log2(5.0)) <= 0.01 * std::log2(5.0));
}

TEST_CASE("theta below the threshold routes to the ergodic rate") {
  const auto e = ergodic_rate(base_pair(3), kSplit, db(10.0));
  CHECK(ec_strong(base_pair(3), kSplit, qos(0.0), db(10.0)) == doctest::Approx(e.e_strong).epsilon(1e-12));
  CHECK(ec_weak_general(base_pair(3), kSplit, qos(1e-10), db(10.0)) == doctest::Approx(e.e_weak).epsilon(1e-12));
  CHECK_THROWS_AS((void)ec_strong_decomposed(base_pair(3), kSplit, qos(0.0), db(10.0)), PreconditionError);
}

TEST_CASE("direct and decomposed strong-user EC agree") {
  const QuadratureSettings tight{1e-13, 1e-300, 4000};
  int well_conditioned = 0;
  for (int n = 1; n <= 4; ++n) {
    for (double theta : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      for (double rho_db : {-10.0, 0.0, 10.0, 20.0, 30.0, 40.0}) {
        CAPTURE(n);
        CAPTURE(theta);
        CAPTURE(rho_db);
        const double direct = ec_strong(base_pair(n), kSplit, qos(theta), db(rho_db), tight);
        const auto decomposed = ec_strong_decomposed(base_pair(n), kSplit, qos(theta), db(rho_db), tight);
        CAPTURE(decomposed.condition);
        // the inner expectation carries relative error ~ condition * 1e-13, which
        // becomes an absolute EC error after division by nu ln 2
        const double inner_error = decomposed.condition * 1e-13;
        const double ec_error = inner_error / (qos(theta).nu() * std::numbers::ln2 * direct);
        if (ec_error <= 1e-8) {
          ++well_conditioned;
          CHECK(decomposed.value == doctest::Approx(direct).epsilon(1e-7));
        } else {
          CHECK(std::abs(decomposed.value - direct) <= 10.0 * ec_error * direct);
        }
      }
    }
  }
  MESSAGE("well-conditioned points: " << well_conditioned << " of 120");
  CHECK(well_conditioned >= 100);
}

TEST_CASE("delay monotonicity") {
  for (int n = 1; n <= 4; ++n) {
    for (double rho_db : {0.0, 20.0, 40.0}) {
      double prev_s = INFINITY, prev_w = INFINITY, prev_o = INFINITY;
      for (double theta : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const auto r = ec_exact(base_pair(n), kSplit, qos(theta), db(rho_db));
        const auto o = ec_oma_pair(base_pair(n), qos(theta), db(rho_db));
        CHECK(r.e_strong <= prev_s + 1e-12);
        CHECK(r.e_weak <= prev_w + 1e-12);
        CHECK(o.e_sum <= prev_o + 1e-12);
        prev_s = r.e_strong;
        prev_w = r.e_weak;
        prev_o = o.e_sum;
      }
    }
  }
}

TEST_CASE("Jensen dominance and theta -> 0 convergence") {
  for (int n = 1; n <= 4; ++n) {
    for (double rho_db : {0.0, 10.0, 20.0, 30.0, 40.0}) {
      const auto bound = ergodic_rate(base_pair(n), kSplit, db(rho_db));
      const auto oma_bound = ergodic_rate_oma(base_pair(n), db(rho_db));
      for (double theta : {0.5, 1.0, 2.0}) {
        const auto r = ec_exact(base_pair(n), kSplit, qos(theta), db(rho_db));
        CHECK(r.e_strong <= bound.e_strong + r.numeric_error);
        CHECK(r.e_weak <= bound.e_weak + r.numeric_error);
        const auto o = ec_oma_pair(base_pair(n), qos(theta), db(rho_db));
        CHECK(o.e_strong <= oma_bound.e_strong + o.numeric_error);
        CHECK(o.e_weak <= oma_bound.e_weak + o.numeric_error);
      }
      const auto limit = ec_exact(base_pair(n), kSplit, qos(1e-6), db(rho_db));
      CHECK(std::abs(limit.e_strong - bound.e_strong) <= 1e-3);
      CHECK(std::abs(limit.e_weak - bound.e_weak) <= 1e-3);
    }
  }
}

TEST_CASE("weak-user SINR saturation bound") {
  for (double a_s : {0.05, 0.2, 0.24, 0.4}) {
    const double cap = std::log2(1.0 + (1.0 - a_s) / a_s);
    for (double rho_db : {0.0, 20.0, 60.0}) {
      for (int n : {1, 2, 4}) {
        CHECK(ec_exact(base_pair(n), PowerSplit{a_s}, qos(0.5), db(rho_db)).e_weak <= cap);
        CHECK(ergodic_rate(base_pair(n), PowerSplit{a_s}, db(rho_db)).e_weak <= cap);
      }
    }
  }
}

TEST_CASE("high-SNR approximation") {
  const auto r = ec_high_snr(base_pair(4), PowerSplit{0.2}, qos(0.5), db(40.0));
  CHECK(r.e_weak == doctest::Approx(std::log2(5.0)).epsilon(1e-15));
  CHECK(r.method == EcMethod::high_snr);
  for (int n = 1; n <= 4; ++n) {
    const auto approx = ec_high_snr(base_pair(n), kSplit, qos(0.5), db(40.0));
    const auto exact = ec_exact(base_pair(n), kSplit, qos(0.5), db(40.0));
    CHECK(std::abs(approx.e_sum - exact.e_sum) <= 0.02 * exact.e_sum);
  }
  const double theta_for_nu_1p2 = 1.2 * std::numbers::ln2;
  CHECK_THROWS_AS(ec_high_snr(base_pair(4), kSplit, qos(theta_for_nu_1p2), db(40.0)), ValidityError);
  CHECK_THROWS_AS(ec_high_snr(base_pair(4), kSplit, qos(std::numbers::ln2), db(40.0)), ValidityError);
  try {
    ec_high_snr(base_pair(4), kSplit, qos(theta_for_nu_1p2), db(40.0));
  } catch (const ValidityError& e) {
    CHECK(std::string(e.what()).find("nu < 1") != std::string::npos);
  }
}

TEST_CASE("low-SNR expansion") {
  const auto zero = ec_low_snr(base_pair(1), kSplit, qos(0.5), SnrPoint{0.0}, CombiningMode::sc);
  CHECK(zero.e_strong == 0.0);
  CHECK(zero.e_weak == 0.0);
  const double mean_gs = gsc_moments({4, 1, 1.0}).mean;
  const double slope = ec_strong(base_pair(1), kSplit, qos(0.5), SnrPoint{1e-4}) / 1e-4;
  CHECK(std::abs(slope - std::numbers::log2e * 0.24 * mean_gs) <= 0.01 * std::numbers::log2e * 0.24 * mean_gs);
  const auto approx = ec_low_snr(base_pair(1), kSplit, qos(0.5), db(-10.0), CombiningMode::sc);
  const auto exact = ec_exact(base_pair(1), kSplit, qos(0.5), db(-10.0));
  CHECK(std::abs(approx.e_sum - exact.e_sum) <= 0.05 * exact.e_sum);
  CHECK_THROWS_AS(ec_low_snr(base_pair(2), kSplit, qos(0.5), db(-10.0), CombiningMode::sc), PreconditionError);
  const auto general = ec_low_snr(base_pair(2), kSplit, qos(0.5), db(-20.0), CombiningMode::general);
  const auto general_exact = ec_exact(base_pair(2), kSplit, qos(0.5), db(-20.0));
  CHECK(std::abs(general.e_sum - general_exact.e_sum) <= 0.05 * general_exact.e_sum);
}
