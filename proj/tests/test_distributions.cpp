#include <cmath>
#include <vector>

#include "doctest.h"
#include "gscnoma/distributions.hpp"
#include "gscnoma/error.hpp"
#include "gscnoma/numerics.hpp"
#include "oracles/oracle_values.hpp"

using namespace gscnoma;

namespace {

const QuadratureSettings kTight{1e-12, 1e-15, 4000};

bool within_mc(double value, const oracle::McValue& mc, double k = 3.0) {
  return std::abs(value - mc.value) <= k * mc.std_error;
}

UserPairSpec pair_of(int big_n, int n, double ws, double ww) { return {{big_n, n, ws}, {big_n, n, ww}}; }

}  // namespace

TEST_CASE("gsc_pdf examples") {
  CHECK(gsc_pdf({1, 1, 1.0}, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gsc_pdf({2, 1, 1.0}, 1.0) == doctest::Approx(2 * std::exp(-1.0) * (1 - std::exp(-1.0))).epsilon(1e-14));
  CHECK(within_mc(gsc_pdf({4, 2, 1.0}, 1.0), oracle::kPdfGsc42At1));
  CHECK_THROWS_AS(gsc_pdf({4, 2, 1.0}, -1.0), DomainError);
}

TEST_CASE("gsc_cdf examples") {
  CHECK(gsc_cdf({4, 2, 1.0}, 0.0) == 0.0);
  CHECK(gsc_cdf({1, 1, 1.0}, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(within_mc(gsc_cdf({4, 2, 1.0}, 2.0), oracle::kCdfGsc42At2));
  CHECK_THROWS_AS(gsc_cdf({4, 2, 1.0}, -1.0), DomainError);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(GscSpec({4, 5, 1.0}).validate(), ConfigError);
  CHECK_THROWS_AS(GscSpec({4, 0, 1.0}).validate(), ConfigError);
  CHECK_THROWS_AS(GscSpec({4, 2, 0.0}).validate(), ConfigError);
  CHECK_THROWS_AS(GscSpec({kMaxAntennas + 1, 1, 1.0}).validate(), ConfigError);
  CHECK_THROWS_AS(pair_of(4, 1, 0.1, 1.0).validate(), ConfigError);
}

TEST_CASE("normalization for N <= 6") {
  for (int big_n = 1; big_n <= 6; ++big_n) {
    for (int n = 1; n <= big_n; ++n) {
      for (double w : {0.1, 1.0, 10.0}) {
        const GscDistribution d({big_n, n, w});
        const auto r = integrate_semi_infinite([&](double x) { return d.pdf(x); }, kTight, n * w);
        CAPTURE(big_n);
        CAPTURE(n);
        CAPTURE(w);
        CHECK(std::abs(r.value - 1.0) <= 1e-9);
      }
    }
  }
}

TEST_CASE("reduction identities") {
  for (int big_n = 1; big_n <= 8; ++big_n) {
    for (double w : {0.1, 1.0, 10.0}) {
      const GscDistribution sc({big_n, 1, w});
      const GscDistribution mrc({big_n, big_n, w});
      for (double t : {1e-6, 1e-3, 0.05, 0.3, 1.0, 2.5, 7.0, 20.0}) {
        const double x = t * w;
        const double e = std::exp(-x / w);
        const double max_density = big_n / w * e * std::pow(-std::expm1(-x / w), big_n - 1);
        const double gamma_density =
            std::exp((big_n - 1) * std::log(x) - x / w - big_n * std::log(w) - std::lgamma(big_n));
        CAPTURE(big_n);
        CAPTURE(x);
        // relative to the density scale 1/w: the n=1 form is an alternating sum of O(N/w) terms
        CHECK(std::abs(sc.pdf(x) - max_density) <= 1e-10 * std::max(max_density, 1.0 / w));
        CHECK(std::abs(mrc.pdf(x) - gamma_density) <= 1e-10 * std::max(gamma_density, 1.0 / w));
      }
    }
  }
}

TEST_CASE("cdf is consistent with the pdf") {
  for (auto spec : {GscSpec{4, 2, 1.0}, GscSpec{6, 3, 0.1}, GscSpec{5, 1, 10.0}, GscSpec{3, 3, 2.0}}) {
    const GscDistribution d(spec);
    const double scale = spec.combined * spec.mean_square_gain;
    for (double t : {0.05, 0.3, 1.0, 2.0, 4.0}) {
      const double x = t * scale;
      const double h = 1e-4 * scale;
      const double derivative = (d.cdf(x + h) - d.cdf(x - h)) / (2 * h);
      CHECK(std::abs(derivative - d.pdf(x)) <= 1e-6 * std::max(1.0, d.pdf(x)) / scale);
      const auto integral = integrate_interval([&](double y) { return d.pdf(y); }, 0.0, x, kTight);
      CHECK(d.cdf(x) == doctest::Approx(integral.value).epsilon(1e-10));
      CHECK(d.cdf(x) + d.survival(x) == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK(d.cdf(1e6 * scale) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("stochastic dominance in n") {
  for (int big_n = 2; big_n <= 6; ++big_n) {
    for (int n = 1; n < big_n; ++n) {
      for (double x : {0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 15.0}) {
        CHECK(gsc_cdf({big_n, n + 1, 1.0}, x) <= gsc_cdf({big_n, n, 1.0}, x) + 1e-13);
      }
    }
  }
}

TEST_CASE("gsc_moments") {
  const auto m22 = gsc_moments({2, 2, 1.0});
  CHECK(m22.mean == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(m22.second_moment == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(gsc_moments({4, 2, 1.0}).mean == doctest::Approx(19.0 / 6.0).epsilon(1e-14));
  CHECK(within_mc(gsc_moments({4, 2, 1.0}).mean, oracle::kMeanGsc42));
  CHECK(gsc_moments({2, 1, 2.0}).mean == doctest::Approx(3.0).epsilon(1e-14));
  for (int big_n = 1; big_n <= 6; ++big_n) {
    for (int n = 1; n <= big_n; ++n) {
      for (double w : {0.1, 1.0, 10.0}) {
        const GscDistribution d({big_n, n, w});
        for (int k = 1; k <= 2; ++k) {
          const auto q =
              integrate_semi_infinite([&](double x) { return std::pow(x, k) * d.pdf(x); }, kTight, n * w);
          CHECK(d.raw_moment(k) == doctest::Approx(q.value).epsilon(1e-8));
        }
      }
    }
  }
}

TEST_CASE("min_pdf_sc examples") {
  const auto single = pair_of(1, 1, 1.0, 0.1);
  CHECK(min_pdf_sc(single, 0.0) == doctest::Approx(11.0).epsilon(1e-14));
  CHECK(min_pdf_sc(single, 0.1) == doctest::Approx(11.0 * std::exp(-1.1)).epsilon(1e-14));
  CHECK(within_mc(min_pdf_sc(pair_of(4, 1, 1.0, 0.1), 0.05), oracle::kMinPdfSc4At005));
  CHECK_THROWS_AS(min_pdf_sc(pair_of(4, 2, 1.0, 0.1), 0.05), PreconditionError);
}

TEST_CASE("min_pdf_mrc examples") {
  CHECK(min_pdf_mrc(pair_of(1, 1, 1.0, 0.1), 0.0) == doctest::Approx(11.0).epsilon(1e-14));
  CHECK(min_pdf_mrc(pair_of(1, 1, 1.0, 1.0), 1.0) == doctest::Approx(2 * std::exp(-2.0)).epsilon(1e-14));
  CHECK(within_mc(min_pdf_mrc(pair_of(4, 4, 1.0, 0.1), 0.2), oracle::kMinPdfMrc4At02));
  CHECK_THROWS_AS(min_pdf_mrc(pair_of(4, 2, 1.0, 0.1), 0.2), PreconditionError);
}

TEST_CASE("min_pdf_general reduces to the SC and MRC densities") {
  for (int big_n = 1; big_n <= 6; ++big_n) {
    const auto sc = pair_of(big_n, 1, 1.0, 0.1);
    UserPairSpec mrc = pair_of(big_n, big_n, 1.0, 0.1);
    mrc.weak.antennas = std::max(1, big_n - 1);
    mrc.weak.combined = mrc.weak.antennas;
    for (double x : {1e-4, 0.01, 0.05, 0.2, 0.6, 1.5, 4.0}) {
      CHECK(min_pdf_general(sc, x) == doctest::Approx(min_pdf_sc(sc, x)).epsilon(1e-9));
      CHECK(min_pdf_general(mrc, x) == doctest::Approx(min_pdf_mrc(mrc, x)).epsilon(1e-9));
    }
  }
  CHECK(within_mc(min_pdf_general(pair_of(4, 2, 1.0, 0.1), 0.1), oracle::kMinPdfGeneral42At01));
}

TEST_CASE("min_pdf_general integrates to one") {
  for (int big_n = 1; big_n <= 5; ++big_n) {
    for (int n = 1; n <= big_n; ++n) {
      for (double ww : {0.1, 0.5, 1.0}) {
        const MinDistribution d(pair_of(big_n, n, 1.0, ww));
        const auto r = integrate_semi_infinite([&](double x) { return d.pdf_general(x); }, kTight, n * ww);
        CHECK(std::abs(r.value - 1.0) <= 1e-8);
      }
    }
  }
}

TEST_CASE("min_moments") {
  const auto sc1 = min_moments(pair_of(1, 1, 1.0, 0.1), CombiningMode::sc);
  CHECK(sc1.mean == doctest::Approx(1.0 / 11.0).epsilon(1e-14));
  CHECK(sc1.second_moment == doctest::Approx(2.0 / 121.0).epsilon(1e-14));
  const auto mrc1 = min_moments(pair_of(1, 1, 1.0, 0.1), CombiningMode::mrc);
  CHECK(mrc1.mean == doctest::Approx(sc1.mean).epsilon(1e-14));
  CHECK(mrc1.second_moment == doctest::Approx(sc1.second_moment).epsilon(1e-14));

  const auto sc4 = min_moments(pair_of(4, 1, 1.0, 0.1), CombiningMode::sc);
  CHECK(within_mc(sc4.mean, oracle::kMinMeanSc4));
  CHECK(within_mc(sc4.second_moment, oracle::kMinSecondSc4));

  for (int big_n = 1; big_n <= 6; ++big_n) {
    for (auto mode : {CombiningMode::sc, CombiningMode::mrc}) {
      const int n = mode == CombiningMode::sc ? 1 : big_n;
      const auto pair = pair_of(big_n, n, 1.0, 0.1);
      const auto closed = min_moments(pair, mode);
      const auto numeric = min_moments_numeric(pair);
      CHECK(closed.mean == doctest::Approx(numeric.mean).epsilon(1e-8));
      CHECK(closed.second_moment == doctest::Approx(numeric.second_moment).epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS(min_moments(pair_of(4, 2, 1.0, 0.1), CombiningMode::sc), PreconditionError);
  CHECK_THROWS_AS(min_moments(pair_of(4, 4, 1.0, 0.1), CombiningMode::general), PreconditionError);
}

TEST_CASE("combining mode") {
  CHECK(combining_mode(pair_of(4, 1, 1.0, 0.1)) == CombiningMode::sc);
  CHECK(combining_mode(pair_of(4, 4, 1.0, 0.1)) == CombiningMode::mrc);
  CHECK(combining_mode(pair_of(4, 2, 1.0, 0.1)) == CombiningMode::general);
  CHECK(combining_mode(pair_of(1, 1, 1.0, 0.1)) == CombiningMode::sc);
}
