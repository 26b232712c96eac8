#include "lpmlab/window.hpp"

#include <cmath>
#include <stdexcept>

namespace lpmlab {

namespace {

void check_time(double t) {
  if (std::isnan(t) || t <= 0.0 || std::isinf(t)) {
    throw std::domain_error("window: t must be finite and > 0");
  }
}

}  // namespace

WindowSchedule::WindowSchedule(int d_in, double p_in) : d(d_in), p(p_in) {
  if (d < 1) throw std::invalid_argument("window: dimension d must be >= 1");
  if (std::isnan(p) || p < 0.0 || p > 1.0) {
    throw std::invalid_argument("window: exponent p must lie in [0, 1]");
  }
}

double WindowSchedule::halfwidth(double t) const {
  check_time(t);
  return std::pow(t, p / static_cast<double>(d));
}

WindowGeometry window_geometry(const WindowSchedule& w, double t) {
  check_time(t);
  WindowGeometry geom;
  geom.halfwidth = w.halfwidth(t);
  const double base = std::pow(2.0 * geom.halfwidth, static_cast<double>(w.d));
  geom.height = t / base;
  geom.volume = base * geom.height;
  return geom;
}

RegularityBound RegularityBound::rectangular(int d, double p) {
  WindowSchedule check(d, p);  // shares the validation
  RegularityBound b;
  b.rectangular_ = true;
  b.d_ = check.d;
  b.p_ = check.p;
  return b;
}

RegularityBound RegularityBound::gaussian(double sigma2, double c) {
  if (!(sigma2 > 0.0) || std::isinf(sigma2)) {
    throw std::invalid_argument("regularity bound: sigma2 must be finite and > 0");
  }
  if (!(c > 0.0) || std::isinf(c)) {
    throw std::invalid_argument("regularity bound: c must be finite and > 0");
  }
  RegularityBound b;
  b.rectangular_ = false;
  b.sigma2_ = sigma2;
  b.c_ = c;
  return b;
}

double RegularityBound::at(std::int64_t n) const {
  if (n < 1) throw std::invalid_argument("regularity bound: n must be >= 1");
  const double nd = static_cast<double>(n);
  if (rectangular_) {
    return 2.0 * std::sqrt(static_cast<double>(d_)) * std::pow(nd, p_ / static_cast<double>(d_));
  }
  const double lg = std::log(nd < 2.0 ? 2.0 : nd);
  return std::sqrt(2.0 * sigma2_ * (1.0 + c_) * lg);
}

}  // namespace lpmlab
