#pragma once

#include <cstdint>
#include <string>

#include "lpmlab/link.hpp"
#include "lpmlab/window.hpp"

namespace lpmlab {

enum class ModelFamily { Rectangular, Gaussian, SparseGraphon };

/// Which latent-position process generated a configuration. Rectangular uses
/// (d, p); the Gaussian families use (d, sigma2). Descriptor strings:
/// "rect:d=1,p=1", "gauss:d=2,sigma2=1", "sgraphon:d=2,sigma2=1".
struct ModelInfo {
  ModelFamily family = ModelFamily::Rectangular;
  int d = 1;
  double p = 1.0;
  double sigma2 = 1.0;
};

std::string model_descriptor(const ModelInfo& m);
ModelInfo parse_model(const std::string& descriptor);

WindowSchedule window_of(const ModelInfo& m);  // rectangular only

/// Default row-norm cap G(n) for fitting graphs from this model.
RegularityBound default_regularity_bound(const ModelInfo& m);

/// Expected-edge scale e(n) used to normalize probability-matrix error:
/// n^{2-p} for rectangular, n^2 for Gaussian, n^{2-p_s} for the sparse
/// graphon (p_s read off the link, which must then be a scaled one).
double natural_dyad_scale(const ModelInfo& m, const LinkFunction& link, std::int64_t n);

}  // namespace lpmlab
