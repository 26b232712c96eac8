#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace lpmlab {

/// Neumaier compensated summation; the running value is independent of how
/// the terms would associate under plain addition to ~1e-16 relative.
class NeumaierSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);  // unbiased, needs n >= 2
double median(std::vector<double> xs);               // empty input is an error

double normal_cdf(double x);

/// Survival function of the Kolmogorov distribution,
/// Q(lambda) = 2 * sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_sf(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test against Uniform(0, 1).
KsResult ks_uniform01(std::vector<double> xs);

/// Two-sample Kolmogorov-Smirnov test (asymptotic p-value).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;  // two-sided, large-sample normal approximation
};

/// Welch's two-sample t-test; intended for the large samples used here
/// (hundreds+), where the normal approximation to the t reference is exact
/// to well below the test levels in play.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares of y on x; needs >= 3 points for the stderr.
LineFit fit_line(std::span<const double> xs, std::span<const double> ys);

}  // namespace lpmlab
