#include "lpmlab/link.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lpmlab {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void check_delta(double delta) {
  if (std::isnan(delta) || delta < 0.0) {
    throw std::domain_error("link: delta must be a finite value >= 0");
  }
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("link descriptor: bad number for " + what + ": '" + text + "'");
  }
  if (used != text.size()) {
    throw std::invalid_argument("link descriptor: bad number for " + what + ": '" + text + "'");
  }
  return value;
}

// Parses "k1=v1,k2=v2" against the expected key list, in any order.
std::vector<double> parse_params(const std::string& body, const std::vector<std::string>& keys,
                                 const std::string& kind) {
  std::vector<double> values(keys.size());
  std::vector<bool> seen(keys.size(), false);
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const std::size_t comma = body.find(',', pos);
    const std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const std::size_t eq = item.find('=');
    require(eq != std::string::npos, "link descriptor: expected key=value in '" + item + "'");
    const std::string key = item.substr(0, eq);
    bool matched = false;
    for (std::size_t k = 0; k < keys.size(); ++k) {
      if (key == keys[k]) {
        require(!seen[k], "link descriptor: duplicate key '" + key + "'");
        values[k] = parse_number(item.substr(eq + 1), key);
        seen[k] = true;
        matched = true;
        break;
      }
    }
    require(matched, "link descriptor: unknown key '" + key + "' for kind '" + kind + "'");
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  for (std::size_t k = 0; k < keys.size(); ++k) {
    require(seen[k], "link descriptor: missing key '" + keys[k] + "' for kind '" + kind + "'");
  }
  return values;
}

}  // namespace

LinkFunction LinkFunction::polynomial(double C, double a) {
  require(std::isfinite(C) && C > 1.0, "polynomial link: C must be finite and > 1");
  require(std::isfinite(a) && a > 0.0, "polynomial link: a must be finite and > 0");
  LinkFunction k;
  k.kind_ = LinkKind::Polynomial;
  k.c_ = C;
  k.a_ = a;
  return k;
}

LinkFunction LinkFunction::logistic_exp(double tau) {
  require(std::isfinite(tau) && tau > 0.0, "logistic link: tau must be finite and > 0");
  LinkFunction k;
  k.kind_ = LinkKind::LogisticExp;
  k.tau_ = tau;
  return k;
}

LinkFunction LinkFunction::scaled_graphon(LinkFunction base, double p_s) {
  require(std::isfinite(p_s) && p_s >= 0.0, "scaled graphon link: p must be finite and >= 0");
  require(base.kind_ != LinkKind::ScaledGraphon, "scaled graphon link: base may not itself be scaled");
  LinkFunction k;
  k.kind_ = LinkKind::ScaledGraphon;
  k.ps_ = p_s;
  k.base_ = std::make_shared<const LinkFunction>(std::move(base));
  return k;
}

LinkFunction LinkFunction::custom(std::vector<double> deltas, std::vector<double> values) {
  require(deltas.size() == values.size(), "custom link: knot arrays must have equal length");
  require(deltas.size() >= 2, "custom link: need at least 2 knots");
  require(deltas.front() == 0.0, "custom link: first knot must sit at delta = 0");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    require(std::isfinite(deltas[i]) && std::isfinite(values[i]), "custom link: knots must be finite");
    require(values[i] > 0.0 && values[i] < 1.0, "custom link: values must lie in (0, 1)");
    if (i > 0) {
      require(deltas[i] > deltas[i - 1], "custom link: deltas must be strictly increasing");
      require(values[i] <= values[i - 1], "custom link: values must be non-increasing");
    }
  }

  LinkFunction k;
  k.kind_ = LinkKind::Custom;
  k.knots_x_ = std::move(deltas);
  k.knots_v_ = std::move(values);

  // Fritsch-Butland slopes: monotone on each segment, zero across any flat
  // or direction change.
  const std::size_t m = k.knots_x_.size();
  std::vector<double> h(m - 1), sec(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    h[i] = k.knots_x_[i + 1] - k.knots_x_[i];
    sec[i] = (k.knots_v_[i + 1] - k.knots_v_[i]) / h[i];
  }
  k.knots_m_.assign(m, 0.0);
  k.knots_m_[0] = sec[0];
  k.knots_m_[m - 1] = sec[m - 2];
  for (std::size_t i = 1; i + 1 < m; ++i) {
    if (sec[i - 1] * sec[i] <= 0.0) {
      k.knots_m_[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      k.knots_m_[i] = 3.0 * (h[i - 1] + h[i]) / (w1 / sec[i - 1] + w2 / sec[i]);
    }
  }
  return k;
}

double LinkFunction::custom_eval(double delta) const {
  if (delta >= knots_x_.back()) return knots_v_.back();
  std::size_t i = 0;
  std::size_t hi = knots_x_.size() - 1;
  while (hi - i > 1) {
    const std::size_t mid = (i + hi) / 2;
    (knots_x_[mid] <= delta ? i : hi) = mid;
  }
  const double h = knots_x_[i + 1] - knots_x_[i];
  const double t = (delta - knots_x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return knots_v_[i] * (2.0 * t3 - 3.0 * t2 + 1.0) + h * knots_m_[i] * (t3 - 2.0 * t2 + t) +
         knots_v_[i + 1] * (-2.0 * t3 + 3.0 * t2) + h * knots_m_[i + 1] * (t3 - t2);
}

double LinkFunction::custom_deriv(double delta) const {
  if (delta >= knots_x_.back()) return 0.0;
  std::size_t i = 0;
  std::size_t hi = knots_x_.size() - 1;
  while (hi - i > 1) {
    const std::size_t mid = (i + hi) / 2;
    (knots_x_[mid] <= delta ? i : hi) = mid;
  }
  const double h = knots_x_[i + 1] - knots_x_[i];
  const double t = (delta - knots_x_[i]) / h;
  const double t2 = t * t;
  return knots_v_[i] * (6.0 * t2 - 6.0 * t) / h + knots_m_[i] * (3.0 * t2 - 4.0 * t + 1.0) +
         knots_v_[i + 1] * (-6.0 * t2 + 6.0 * t) / h + knots_m_[i + 1] * (3.0 * t2 - 2.0 * t);
}

double LinkFunction::eval_unscaled(double delta) const {
  switch (kind_) {
    case LinkKind::Polynomial: {
      double dpow;
      if (a_ == 2.0) {
        dpow = delta * delta;
      } else if (a_ == 3.0) {
        dpow = delta * delta * delta;
      } else {
        dpow = std::pow(delta, a_);
      }
      return 1.0 / (c_ + dpow);
    }
    case LinkKind::LogisticExp: {
      const double l = std::log(tau_) + delta;
      if (l > 36.0) return std::exp(-l);
      return 1.0 / (1.0 + std::exp(l));
    }
    case LinkKind::Custom:
      return custom_eval(delta);
    case LinkKind::ScaledGraphon:
      break;
  }
  throw std::logic_error("link: unscaled evaluation on a scaled kind");
}

double LinkFunction::deriv_unscaled(double delta) const {
  switch (kind_) {
    case LinkKind::Polynomial: {
      if (delta == 0.0) {
        if (a_ < 1.0) throw std::domain_error("link deriv: polynomial with a < 1 has no derivative at 0");
        if (a_ > 1.0) return 0.0;
        return -1.0 / (c_ * c_);
      }
      const double k = eval_unscaled(delta);
      double dpow1;  // delta^{a-1}
      if (a_ == 2.0) {
        dpow1 = delta;
      } else if (a_ == 3.0) {
        dpow1 = delta * delta;
      } else {
        dpow1 = std::pow(delta, a_ - 1.0);
      }
      return -a_ * dpow1 * k * k;
    }
    case LinkKind::LogisticExp: {
      const double k = eval_unscaled(delta);
      return -k * (1.0 - k);
    }
    case LinkKind::Custom:
      return custom_deriv(delta);
    case LinkKind::ScaledGraphon:
      break;
  }
  throw std::logic_error("link: unscaled derivative on a scaled kind");
}

double LinkFunction::scale(std::int64_t n) const {
  if (kind_ != LinkKind::ScaledGraphon) return 1.0;
  if (n < 1) throw std::invalid_argument("link: scaled graphon needs the node count n >= 1");
  return std::pow(static_cast<double>(n), -ps_);
}

double LinkFunction::eval(double delta, std::int64_t n) const {
  check_delta(delta);
  if (kind_ == LinkKind::ScaledGraphon) {
    const double v = scale(n) * base_->eval_unscaled(delta);
    return v < 1.0 ? v : 1.0;
  }
  return eval_unscaled(delta);
}

double LinkFunction::deriv(double delta, std::int64_t n) const {
  check_delta(delta);
  if (kind_ == LinkKind::ScaledGraphon) {
    const double s = scale(n);
    if (s * base_->eval_unscaled(delta) >= 1.0) return 0.0;
    return s * base_->deriv_unscaled(delta);
  }
  return deriv_unscaled(delta);
}

double LinkFunction::max_prob(std::int64_t n) const {
  switch (kind_) {
    case LinkKind::Polynomial:
      return 1.0 / c_;
    case LinkKind::LogisticExp:
      return 1.0 / (1.0 + tau_);
    case LinkKind::Custom:
      return knots_v_.front();
    case LinkKind::ScaledGraphon: {
      const double v = scale(n) * base_->max_prob();
      return v < 1.0 ? v : 1.0;
    }
  }
  throw std::logic_error("link: unhandled kind");
}

double LinkFunction::eps() const {
  switch (kind_) {
    case LinkKind::Polynomial:
      return 1.0 - 1.0 / c_;
    case LinkKind::LogisticExp:
      return tau_ / (1.0 + tau_);
    case LinkKind::Custom:
      return 1.0 - knots_v_.front();
    case LinkKind::ScaledGraphon:
      return base_->eps();
  }
  throw std::logic_error("link: unhandled kind");
}

double LinkFunction::inverse(double prob, std::int64_t n) const {
  if (std::isnan(prob) || prob <= 0.0) {
    throw std::domain_error("link inverse: prob must be in (0, K(0)]");
  }
  switch (kind_) {
    case LinkKind::Polynomial: {
      if (prob > max_prob() * (1.0 + 1e-12)) {
        throw std::domain_error("link inverse: prob exceeds K(0)");
      }
      const double x = 1.0 / prob - c_;
      if (x <= 0.0) return 0.0;
      return std::pow(x, 1.0 / a_);
    }
    case LinkKind::LogisticExp: {
      if (prob > max_prob() * (1.0 + 1e-12)) {
        throw std::domain_error("link inverse: prob exceeds K(0)");
      }
      const double delta = std::log((1.0 - prob) / (prob * tau_));
      return delta > 0.0 ? delta : 0.0;
    }
    case LinkKind::Custom: {
      if (prob > knots_v_.front() * (1.0 + 1e-12)) {
        throw std::domain_error("link inverse: prob exceeds K(0)");
      }
      if (prob < knots_v_.back() * (1.0 - 1e-12)) {
        throw std::domain_error("link inverse: prob below the tabulated range");
      }
      double lo = knots_x_.front(), hi = knots_x_.back();
      if (prob >= knots_v_.front()) return lo;
      if (prob <= knots_v_.back()) return hi;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (custom_eval(mid) >= prob ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    case LinkKind::ScaledGraphon: {
      const double s = scale(n);
      const double base_prob = prob / s;
      if (base_prob >= base_->max_prob()) {
        if (base_prob > base_->max_prob() * (1.0 + 1e-12)) {
          throw std::domain_error("link inverse: prob exceeds the scaled maximum");
        }
        return 0.0;
      }
      return base_->inverse(base_prob);
    }
  }
  throw std::logic_error("link: unhandled kind");
}

bool LinkFunction::gradient_fragile_at_zero() const {
  switch (kind_) {
    case LinkKind::Polynomial:
      return a_ < 2.0;
    case LinkKind::ScaledGraphon:
      return base_->gradient_fragile_at_zero();
    case LinkKind::LogisticExp:
    case LinkKind::Custom:
      return false;
  }
  throw std::logic_error("link: unhandled kind");
}

double LinkFunction::p_s() const {
  if (kind_ != LinkKind::ScaledGraphon) {
    throw std::invalid_argument("link: p_s is only defined for scaled graphon links");
  }
  return ps_;
}

const LinkFunction& LinkFunction::base() const {
  if (kind_ != LinkKind::ScaledGraphon) {
    throw std::invalid_argument("link: base is only defined for scaled graphon links");
  }
  return *base_;
}

std::string LinkFunction::descriptor() const {
  switch (kind_) {
    case LinkKind::Polynomial:
      return "poly:C=" + fmt(c_) + ",a=" + fmt(a_);
    case LinkKind::LogisticExp:
      return "logexp:tau=" + fmt(tau_);
    case LinkKind::ScaledGraphon:
      return "sgraphon:p=" + fmt(ps_) + ";" + base_->descriptor();
    case LinkKind::Custom:
      return "custom:points=" + std::to_string(knots_x_.size());
  }
  throw std::logic_error("link: unhandled kind");
}

LinkFunction LinkFunction::parse(const std::string& descriptor) {
  const std::size_t colon = descriptor.find(':');
  require(colon != std::string::npos, "link descriptor: expected '<kind>:<params>', got '" + descriptor + "'");
  const std::string kind = descriptor.substr(0, colon);
  const std::string rest = descriptor.substr(colon + 1);

  if (kind == "poly") {
    const auto v = parse_params(rest, {"C", "a"}, kind);
    return polynomial(v[0], v[1]);
  }
  if (kind == "logexp") {
    const auto v = parse_params(rest, {"tau"}, kind);
    return logistic_exp(v[0]);
  }
  if (kind == "sgraphon") {
    const std::size_t semi = rest.find(';');
    require(semi != std::string::npos,
            "link descriptor: scaled graphon needs a base link after ';', got '" + descriptor + "'");
    const auto v = parse_params(rest.substr(0, semi), {"p"}, kind);
    return scaled_graphon(parse(rest.substr(semi + 1)), v[0]);
  }
  throw std::invalid_argument("link descriptor: unknown kind '" + kind +
                              "' (expected poly, logexp, or sgraphon)");
}

}  // namespace lpmlab
