#pragma once

#include <optional>

#include "gwm/model.hpp"

namespace gwm {

/// Sample-path constants that follow from the small- and large-lag laws.
struct LocalProps {
  double holder_exponent = 0.0;  // H = min(alpha*gamma - n/2, 1)
  double fractal_dim = 0.0;      // graph dimension n + 1 - H
  /// Order of local (asymptotic) self-similarity; set only in the rough
  /// regime alpha*gamma in (n/2, (n+2)/2).
  std::optional<double> lass_order;
  /// Amplitude A in C(0) - C(t) ~ A |t|^(2 alpha gamma - n); rough regime only.
  std::optional<double> lass_amplitude;
  /// Tail exponent 2 alpha + n for alpha < 1; empty when the decay is
  /// exponential (alpha == 1).
  std::optional<double> memory_exponent;
  bool exponential_memory = false;
  bool differentiable = false;  // alpha*gamma > (n+2)/2
};

LocalProps local_props(const ModelParams& p);

/// Covariance of the tangent field, A (|u|^2H' + |v|^2H' - |u-v|^2H'),
/// H' = alpha*gamma - n/2. Arguments are the norms |u|, |v|, |u - v|.
double tangent_field_cov(const ModelParams& p, double u, double v, double uv_dist);

}  // namespace gwm
