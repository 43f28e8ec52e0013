#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace gscnoma {

/// Largest antenna count the alternating series are evaluated for.
inline constexpr int kMaxAntennas = 16;

/// One receiver's diversity configuration: combine the `combined` strongest
/// of `antennas` i.i.d. Rayleigh branches with mean-square gain
/// `mean_square_gain`.
struct GscSpec {
  int antennas = 1;
  int combined = 1;
  double mean_square_gain = 1.0;

  void validate() const;
  bool operator==(const GscSpec&) const = default;
};

/// The (strong, weak) user pair. The weak user has the smaller mean-square
/// channel gain.
struct UserPairSpec {
  GscSpec strong;
  GscSpec weak;

  void validate() const;
  bool operator==(const UserPairSpec&) const = default;
};

enum class CombiningMode { sc, mrc, general };

/// SC when both users combine one branch, MRC when both combine all
/// branches, general otherwise. A pair with N = n = 1 on both sides is
/// reported as SC.
CombiningMode combining_mode(const UserPairSpec& pair);
std::string to_string(CombiningMode mode);

struct Moments {
  double mean = 0.0;
  double second_moment = 0.0;
};

/// Density, distribution and survival function of the GSC output power
/// g = sum of the n largest of N i.i.d. exponential branch powers.
///
/// The density is the classical order-statistics series
///   f(x) = C(N,n) [ x^(n-1) e^(-x/W) / (W^n (n-1)!)
///                   + (1/W) sum_l (-1)^(n+l-1) C(N-n,l) (n/l)^(n-1) e^(-x/W) R_l(x) ]
/// with R_l(x) = e^(-lx/(nW)) - sum_{m=0}^{n-2} (-lx/(nW))^m / m!, the Taylor
/// remainder, which is evaluated from its own series near the origin.
class GscDistribution {
 public:
  explicit GscDistribution(const GscSpec& spec);

  const GscSpec& spec() const { return spec_; }

  double pdf(double x) const;
  double cdf(double x) const;
  double survival(double x) const;

  /// The signed terms whose sum (times C(N, n)) is the density; the first
  /// entry is the gamma-shaped leading term, one entry per l follows.
  std::vector<double> pdf_terms(double x) const;

  /// E[g^k] in closed form.
  double raw_moment(int k) const;
  Moments moments() const { return {raw_moment(1), raw_moment(2)}; }

 private:
  struct BranchTerm {
    double coefficient;  // (-1)^(n+l-1) C(N-n,l) (n/l)^(n-1)
    double ratio;        // l / n
  };

  struct SeriesValue {
    double value;
    double error;  // absolute rounding bound
    bool converged;
  };

  std::size_t fill_pdf_terms(double x, std::span<double> out) const;
  // Power series in y = x/W from the hypoexponential form g = Gamma(n, W) +
  // sum_{i>n} Exp(W n/i). Accurate near the origin, where the alternating
  // form loses everything to cancellation. `extra` is 0 for the density
  // (times W) and 1 for the CDF.
  SeriesValue origin_series(double y, int extra) const;

  GscSpec spec_;
  double binom_total_;  // C(N, n)
  double log_lead_norm_;  // ln(W^n (n-1)!)
  std::vector<BranchTerm> branches_;
  std::vector<double> series_coefficients_;  // complete homogeneous sums h_m of the unit-W rates
  double log_rate_product_ = 0.0;
  double max_rate_ = 1.0;
};

double gsc_pdf(const GscSpec& spec, double x);
double gsc_cdf(const GscSpec& spec, double x);
double gsc_survival(const GscSpec& spec, double x);
Moments gsc_moments(const GscSpec& spec);

/// Density of g_min = min(g_s, g_w) for independent users.
class MinDistribution {
 public:
  explicit MinDistribution(const UserPairSpec& pair);

  const UserPairSpec& pair() const { return pair_; }
  CombiningMode mode() const { return mode_; }

  /// Uses the specialised SC/MRC density when the pair allows it.
  double pdf(double x) const;

  double pdf_sc(double x) const;
  double pdf_mrc(double x) const;
  /// f_w(x) S_s(x) + f_s(x) S_w(x), valid for every pair.
  double pdf_general(double x) const;

 private:
  UserPairSpec pair_;
  CombiningMode mode_;
  GscDistribution strong_;
  GscDistribution weak_;
};

double min_pdf_sc(const UserPairSpec& pair, double x);
double min_pdf_mrc(const UserPairSpec& pair, double x);
double min_pdf_general(const UserPairSpec& pair, double x);

/// Closed-form first and second moments of g_min; `mode` must be sc or mrc
/// and must match the pair's configuration.
Moments min_moments(const UserPairSpec& pair, CombiningMode mode);

/// Moments of g_min by quadrature of the general density; any pair.
Moments min_moments_numeric(const UserPairSpec& pair);

/// Exact binomial coefficient, exact in double for n <= kMaxAntennas.
double binomial(int n, int k);

}  // namespace gscnoma
