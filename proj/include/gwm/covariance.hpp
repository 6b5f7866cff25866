#pragma once

// Covariance engine for the generalized Whittle-Matern field.
//
// Production path:
//   alpha == 1   closed form (Bessel-K times a power of the lag)
//   alpha <  1   Macdonald-kernel integral with the kernel argument fixed
//   r == 0       closed-form variance
// The oscillatory Hankel-type (Bochner) integral is kept as an independent
// cross-check and is never used by covariance().

#include <span>
#include <vector>

#include "gwm/model.hpp"
#include "gwm/quadrature.hpp"

namespace gwm {

/// (2 pi)^-n (omega^(2 alpha) + lambda^2)^-gamma.
double spectral_density(const ModelParams& p, double omega_norm);

/// alpha == 1 closed form; r == 0 returns the variance.
double cov_closed_form_alpha1(const ModelParams& p, double r);

/// Bochner (J-kernel) representation, summed between Bessel zeros with
/// iterated averaging of the alternating partial sums. Verification only.
double cov_bochner(const ModelParams& p, double r, const QuadConfig& q = {});

/// Macdonald (K-kernel) representation for alpha < 1 and r > 0. Valid for
/// every gamma > 0, including the infinite-variance range.
double cov_macdonald(const ModelParams& p, double r, const QuadConfig& q = {});

/// Dispatching covariance; rejects negative r.
double covariance(const ModelParams& p, double r, const QuadConfig& q = {});

/// C(0); throws InfiniteVarianceError when alpha*gamma <= n/2.
double variance(const ModelParams& p);

/// 2 (C(0) - C(r)).
double variogram(const ModelParams& p, double r, const QuadConfig& q = {});

/// covariance() at every lag. Each entry is computed independently, so the
/// result does not depend on the thread count.
std::vector<double> covariance_at(const ModelParams& p, std::span<const double> lags,
                                  const QuadConfig& q = {});

/// C(k * spacing), k = 0 .. count-1.
CovarianceTable covariance_table(const ModelParams& p, double spacing, std::size_t count,
                                 const QuadConfig& q = {});

}  // namespace gwm
