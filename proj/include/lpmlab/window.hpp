#pragma once

#include <cstdint>

namespace lpmlab {

/// Growing observation window [-g(t), g(t)]^d x [0, t / (2 g(t))^d] with
/// spatial half-width g(t) = t^{p/d}; its volume is t for every t.
struct WindowSchedule {
  int d = 1;
  double p = 1.0;

  WindowSchedule(int d_in, double p_in);

  /// g(t); t <= 0 is a domain error.
  double halfwidth(double t) const;
};

struct WindowGeometry {
  double halfwidth = 0.0;  // g(t)
  double height = 0.0;     // auxiliary extent t / (2 g(t))^d
  double volume = 0.0;     // equals t up to rounding
};

WindowGeometry window_geometry(const WindowSchedule& w, double t);

/// Row-norm cap used by the restricted estimator. Rectangular windows give
/// G(n) = 2 sqrt(d) n^{p/d}; exchangeable Gaussian configurations give
/// G(n) = sqrt(2 sigma2 (1+c) log n) with the log floored at n = 2 so the
/// cap stays positive and non-decreasing from n = 1.
class RegularityBound {
 public:
  static RegularityBound rectangular(int d, double p);
  static RegularityBound gaussian(double sigma2, double c = 1.0);

  /// G(n); n < 1 is a usage error.
  double at(std::int64_t n) const;

  bool is_rectangular() const { return rectangular_; }

 private:
  RegularityBound() = default;
  bool rectangular_ = true;
  int d_ = 1;
  double p_ = 1.0;
  double sigma2_ = 1.0;
  double c_ = 1.0;
};

}  // namespace lpmlab
