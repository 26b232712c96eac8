#include "lpmlab/model.hpp"

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

double parse_field(const std::string& body, const std::string& key, std::size_t& pos) {
  const std::string prefix = key + "=";
  if (body.compare(pos, prefix.size(), prefix) != 0) {
    throw std::invalid_argument("model descriptor: expected '" + key + "=' at '" + body.substr(pos) + "'");
  }
  pos += prefix.size();
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(body.substr(pos), &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("model descriptor: bad number for '" + key + "'");
  }
  pos += used;
  if (pos < body.size()) {
    if (body[pos] != ',') throw std::invalid_argument("model descriptor: expected ',' after '" + key + "'");
    ++pos;
  }
  return value;
}

}  // namespace

std::string model_descriptor(const ModelInfo& m) {
  switch (m.family) {
    case ModelFamily::Rectangular:
      return "rect:d=" + std::to_string(m.d) + ",p=" + fmt(m.p);
    case ModelFamily::Gaussian:
      return "gauss:d=" + std::to_string(m.d) + ",sigma2=" + fmt(m.sigma2);
    case ModelFamily::SparseGraphon:
      return "sgraphon:d=" + std::to_string(m.d) + ",sigma2=" + fmt(m.sigma2);
  }
  throw std::logic_error("model: unhandled family");
}

ModelInfo parse_model(const std::string& descriptor) {
  const std::size_t colon = descriptor.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("model descriptor: expected '<family>:<params>', got '" + descriptor + "'");
  }
  const std::string family = descriptor.substr(0, colon);
  const std::string body = descriptor.substr(colon + 1);
  ModelInfo m;
  std::size_t pos = 0;
  if (family == "rect") {
    m.family = ModelFamily::Rectangular;
    m.d = static_cast<int>(parse_field(body, "d", pos));
    m.p = parse_field(body, "p", pos);
  } else if (family == "gauss" || family == "sgraphon") {
    m.family = family == "gauss" ? ModelFamily::Gaussian : ModelFamily::SparseGraphon;
    m.d = static_cast<int>(parse_field(body, "d", pos));
    m.sigma2 = parse_field(body, "sigma2", pos);
  } else {
    throw std::invalid_argument("model descriptor: unknown family '" + family +
                                "' (expected rect, gauss, or sgraphon)");
  }
  if (pos != body.size()) {
    throw std::invalid_argument("model descriptor: trailing text '" + body.substr(pos) + "'");
  }
  if (m.d < 1) throw std::invalid_argument("model descriptor: d must be >= 1");
  if (m.family == ModelFamily::Rectangular) {
    WindowSchedule validate(m.d, m.p);
    (void)validate;
  } else if (!(m.sigma2 > 0.0) || std::isinf(m.sigma2)) {
    throw std::invalid_argument("model descriptor: sigma2 must be finite and > 0");
  }
  return m;
}

WindowSchedule window_of(const ModelInfo& m) {
  if (m.family != ModelFamily::Rectangular) {
    throw std::invalid_argument("model: only rectangular models carry a window schedule");
  }
  return WindowSchedule(m.d, m.p);
}

RegularityBound default_regularity_bound(const ModelInfo& m) {
  if (m.family == ModelFamily::Rectangular) {
    return RegularityBound::rectangular(m.d, m.p);
  }
  return RegularityBound::gaussian(m.sigma2);
}

double natural_dyad_scale(const ModelInfo& m, const LinkFunction& link, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("natural_dyad_scale: n must be >= 1");
  const double nd = static_cast<double>(n);
  switch (m.family) {
    case ModelFamily::Rectangular:
      return std::pow(nd, 2.0 - m.p);
    case ModelFamily::Gaussian:
      return nd * nd;
    case ModelFamily::SparseGraphon:
      return std::pow(nd, 2.0 - link.p_s());
  }
  throw std::logic_error("model: unhandled family");
}

}  // namespace lpmlab
