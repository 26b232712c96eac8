#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace lpmlab {

enum class LinkKind { Polynomial, LogisticExp, ScaledGraphon, Custom };

/// Non-increasing map from pairwise distance to edge probability, bounded
/// away from 1 by the margin eps(). ScaledGraphon multiplies a base link by
/// n^{-p_s} and therefore needs the node count at evaluation time; all other
/// kinds ignore it.
///
/// Text form: "poly:C=2,a=3", "logexp:tau=1", "sgraphon:p=0.5;logexp:tau=1".
/// Custom (tabulated) links are built in-process and have no text form.
class LinkFunction {
 public:
  /// Equivalent to polynomial(2, 1).
  LinkFunction() = default;

  /// K(delta) = 1 / (C + delta^a), C > 1, a > 0.
  static LinkFunction polynomial(double C, double a);

  /// K(delta) = 1 / (1 + tau * exp(delta)), tau > 0.
  static LinkFunction logistic_exp(double tau);

  /// K_n(delta) = min(n^{-p_s} * base(delta), 1), p_s >= 0.
  static LinkFunction scaled_graphon(LinkFunction base, double p_s);

  /// Tabulated link on knots (deltas, values), deltas[0] == 0, interpolated
  /// by a monotone cubic (Fritsch-Butland); constant beyond the last knot.
  static LinkFunction custom(std::vector<double> deltas, std::vector<double> values);

  static LinkFunction parse(const std::string& descriptor);

  LinkKind kind() const { return kind_; }
  bool needs_n() const { return kind_ == LinkKind::ScaledGraphon; }

  /// Edge probability at distance delta; delta < 0 is a domain error, a
  /// missing node count for ScaledGraphon is a usage error.
  double eval(double delta, std::int64_t n = 0) const;

  /// dK/ddelta; domain error where the kind is not differentiable (custom
  /// outside its table is treated as flat, polynomial with a < 1 at 0).
  double deriv(double delta, std::int64_t n = 0) const;

  /// Distance with K(distance) = prob; prob outside the range is a domain
  /// error.
  double inverse(double prob, std::int64_t n = 0) const;

  /// K(0), the largest attainable probability.
  double max_prob(std::int64_t n = 0) const;

  /// Regularity margin: sup K <= 1 - eps().
  double eps() const;

  /// n^{-p_s} for ScaledGraphon, 1 otherwise.
  double scale(std::int64_t n) const;

  /// True when the pair gradient weight K'(delta)/delta has no finite limit
  /// as delta -> 0 (polynomial with a < 2, possibly under scaling).
  bool gradient_fragile_at_zero() const;

  double p_s() const;
  const LinkFunction& base() const;

  std::string descriptor() const;

 private:
  double eval_unscaled(double delta) const;
  double deriv_unscaled(double delta) const;
  double custom_eval(double delta) const;
  double custom_deriv(double delta) const;

  LinkKind kind_ = LinkKind::Polynomial;
  double c_ = 2.0;    // Polynomial offset
  double a_ = 1.0;    // Polynomial exponent
  double tau_ = 1.0;  // LogisticExp scale
  double ps_ = 0.0;   // ScaledGraphon exponent
  std::shared_ptr<const LinkFunction> base_;
  std::vector<double> knots_x_;
  std::vector<double> knots_v_;
  std::vector<double> knots_m_;  // Hermite slopes
};

}  // namespace lpmlab
