#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gwm/fieldsim.hpp"
#include "gwm/model.hpp"
#include "gwm/quadrature.hpp"

namespace gwm {

/// Inclusive range of integer grid lags.
struct LagRange {
  std::size_t lo = 1;
  std::size_t hi = 10;
};

/// Least-squares line y = intercept + slope x with the slope's standard error.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Mean squared increment along one grid axis at integer lag k.
double axis_variogram(const FieldSample& s, int axis, std::size_t k);

struct FractalDimEstimate {
  double dim = 0.0;        // n + 1 - slope / 2, clamped to [n, n + 1]
  double slope = 0.0;      // log variogram vs log lag
  double slope_se = 0.0;
  double holder = 0.0;     // slope / 2, clamped to [0, 1]
};

/// Variogram-slope estimator of the graph dimension. 2D samples pool both
/// axes. Needs >= 1024 points and lags inside the grid; throws DomainError on
/// a constant sample.
FractalDimEstimate estimate_fractal_dim_full(const FieldSample& s, LagRange lags = {});
double estimate_fractal_dim(const FieldSample& s, LagRange lags = {});

struct MemoryExponentEstimate {
  double slope = 0.0;  // expected -(2 alpha + n)
  double slope_se = 0.0;
};

/// Slope of log C(r) vs log r on points log-spaced over [r_lo, r_hi].
/// Rejects alpha == 1; throws Error if C underflows or turns negative.
MemoryExponentEstimate estimate_memory_exponent_full(const ModelParams& p, double r_lo, double r_hi,
                                                     std::size_t points = 16, const QuadConfig& q = {});
double estimate_memory_exponent(const ModelParams& p, double r_lo, double r_hi, std::size_t points = 16,
                                const QuadConfig& q = {});

struct LassRow {
  double rho = 0.0;
  double rescaled = 0.0;  // increment covariance at (rho u, rho v) over rho^(2 H')
  double tangent = 0.0;   // tangent_field_cov(p, u, v, uv_dist)
  double ratio = 0.0;     // rescaled / tangent
  double gap = 0.0;       // |rescaled - tangent|
};

struct LassTable {
  double order = 0.0;  // H' = alpha gamma - n/2
  std::vector<LassRow> rows;
  bool gaps_decreasing = false;
};

/// Rescaled increment covariance
/// (C(0) - C(rho u) - C(rho v) + C(rho |u - v|)) / rho^(2 H') per rho.
/// Requires alpha gamma in (n/2, (n+2)/2) and rhos strictly decreasing in (0, 1].
LassTable check_lass(const ModelParams& p, const std::vector<double>& rhos, double u, double v,
                     double uv_dist, const QuadConfig& q = {});

/// Mean and standard error of estimate_fractal_dim over replicate seeds
/// base_seed .. base_seed + replicates - 1. Seeds run in parallel; the
/// reduction order is fixed.
struct ReplicateSummary {
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<double> values;
};

ReplicateSummary fractal_dim_study(const ModelParams& p, const Grid& g, std::size_t replicates,
                                   std::uint64_t base_seed, LagRange lags = {},
                                   const SimulateOptions& opt = {});

struct DiagnosticsReport {
  ModelParams params;
  double estimated_fractal_dim = 0.0;
  double fractal_dim_half_width = 0.0;  // 1.96 standard errors
  double estimated_H = 0.0;
  double H_half_width = 0.0;
  std::optional<double> estimated_memory_exponent;  // alpha < 1 only
  std::optional<double> memory_exponent_half_width;
  double theoretical_fractal_dim = 0.0;
  std::optional<double> theoretical_memory_exponent;
};

/// Dimension from the sample; memory exponent from the model tail on
/// [r_lo, r_hi] when alpha < 1.
DiagnosticsReport diagnose(const FieldSample& s, LagRange lags = {}, double r_lo = 20.0, double r_hi = 200.0);

/// Schema "gwm.diagnostics/1".
std::string report_to_json(const DiagnosticsReport& r);

}  // namespace gwm
