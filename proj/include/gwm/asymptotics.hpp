#pragma once

#include <vector>

#include "gwm/model.hpp"
#include "gwm/quadrature.hpp"

namespace gwm {

/// Partial sum of the large-lag expansion, with |term_j| for each summed
/// term so that divergence of the asymptotic series can be detected.
struct TailSeries {
  double value = 0.0;
  std::vector<double> term_magnitudes;
};

/// alpha < 1: algebraic series in r^(-2 alpha j - n), j = 1..terms.
/// alpha = 1: exponential series e^(-lambda r) r^(gamma-(n+1)/2-j), j = 0..terms-1.
TailSeries cov_tail_asymptotic(const ModelParams& p, double r, int terms = 1);

/// First term of cov_tail_asymptotic.
double cov_tail_leading(const ModelParams& p, double r);

enum class SmallLagRegime {
  Rough,       // alpha*gamma in (n/2, (n+2)/2): r^(2 alpha gamma - n)
  Borderline,  // alpha*gamma == (n+2)/2:       r^2 log(1/r)
  Smooth,      // alpha*gamma >  (n+2)/2:       r^2
};

/// Leading small-lag variogram law: variogram(r) ~ coefficient * shape(r).
struct SmallLagLaw {
  SmallLagRegime regime;
  double coefficient;
  double exponent;  // power of r (2 in the borderline and smooth regimes)
};

SmallLagRegime small_lag_regime(const ModelParams& p);
SmallLagLaw small_lag_law(const ModelParams& p);

/// Leading-order variogram as r -> 0.
double variogram_small_lag(const ModelParams& p, double r);

/// Finite part I of the rescaled small-lag integral:
/// Gamma(n/2 - ag) / (2^(2 ag - n/2) Gamma(ag)), ag in (n/2, (n+2)/2).
double appendix_constant_I(double alpha_gamma, int n);

/// Constant term A in the borderline expansion
/// I(t) = -log(1/t) / (2^((n+2)/2) Gamma((n+2)/2)) + A + o(1),
/// evaluated by quadrature. Requires alpha*gamma == (n+2)/2.
double borderline_constant_A(const ModelParams& p, const QuadConfig& q = {});

}  // namespace gwm
