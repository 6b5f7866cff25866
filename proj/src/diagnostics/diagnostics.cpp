#include "gwm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include <json.hpp>

#include "gwm/asymptotics.hpp"
#include "gwm/covariance.hpp"
#include "gwm/errors.hpp"
#include "gwm/local_props.hpp"

namespace gwm {
namespace {

constexpr std::size_t kMinPoints = 1024;
constexpr double kZ95 = 1.96;

std::size_t axis_length(const Grid& g, int axis) { return g.sizes[static_cast<std::size_t>(axis)]; }

}  // namespace

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  if (m < 2 || y.size() != m) throw DomainError("fit_line: need >= 2 paired points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_line: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (m > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double e = y[i] - f.intercept - f.slope * x[i];
      rss += e * e;
    }
    f.slope_se = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
  }
  return f;
}

double axis_variogram(const FieldSample& s, int axis, std::size_t k) {
  const Grid& g = s.grid;
  if (axis < 0 || axis >= g.dims) throw DomainError("axis_variogram: axis out of range");
  const std::size_t len = axis_length(g, axis);
  if (k == 0 || k >= len) throw DomainError("axis_variogram: lag outside the grid");
  const std::size_t rows = g.sizes[0];
  const std::size_t cols = g.dims == 2 ? g.sizes[1] : 1;
  const std::size_t stride = axis == 0 ? cols : 1;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t pos = axis == 0 ? i : j;
      if (pos + k >= len) continue;
      const std::size_t at = i * cols + j;
      const double d = s.values[at + k * stride] - s.values[at];
      sum += d * d;
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

FractalDimEstimate estimate_fractal_dim_full(const FieldSample& s, LagRange lags) {
  const Grid& g = s.grid;
  g.validate();
  if (s.values.size() != g.total()) throw DomainError("estimate_fractal_dim: sample size does not match grid");
  if (g.total() < kMinPoints) throw DomainError("estimate_fractal_dim: need at least 1024 points");
  if (lags.lo < 1 || lags.hi <= lags.lo) throw DomainError("estimate_fractal_dim: lag range must satisfy 1 <= lo < hi");
  for (int a = 0; a < g.dims; ++a) {
    if (lags.hi >= axis_length(g, a)) throw DomainError("estimate_fractal_dim: lag range exceeds the grid");
  }

  std::vector<double> x, y;
  for (int a = 0; a < g.dims; ++a) {
    for (std::size_t k = lags.lo; k <= lags.hi; ++k) {
      const double v = axis_variogram(s, a, k);
      if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("estimate_fractal_dim: degenerate (constant) sample");
      x.push_back(std::log(static_cast<double>(k) * g.spacing[static_cast<std::size_t>(a)]));
      y.push_back(std::log(v));
    }
  }
  const LineFit f = fit_line(x, y);
  const double n = g.dims;
  FractalDimEstimate e;
  e.slope = f.slope;
  e.slope_se = f.slope_se;
  e.dim = std::clamp(n + 1.0 - 0.5 * f.slope, n, n + 1.0);
  e.holder = std::clamp(0.5 * f.slope, 0.0, 1.0);
  return e;
}

double estimate_fractal_dim(const FieldSample& s, LagRange lags) { return estimate_fractal_dim_full(s, lags).dim; }

MemoryExponentEstimate estimate_memory_exponent_full(const ModelParams& p, double r_lo, double r_hi,
                                                     std::size_t points, const QuadConfig& q) {
  p.validate();
  if (p.alpha == 1.0) throw DomainError("estimate_memory_exponent: alpha = 1 decays exponentially");
  if (!(r_lo > 0.0 && r_hi > r_lo) || !std::isfinite(r_hi)) {
    throw DomainError("estimate_memory_exponent: need 0 < r_lo < r_hi");
  }
  if (points < 3) throw DomainError("estimate_memory_exponent: need >= 3 points");
  std::vector<double> x(points), y(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / static_cast<double>(points - 1));
    const double c = covariance(p, r, q);
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw Error("estimate_memory_exponent: covariance underflows or is not positive at r = " + std::to_string(r));
    }
    x[i] = std::log(r);
    y[i] = std::log(c);
  }
  const LineFit f = fit_line(x, y);
  return {f.slope, f.slope_se};
}

double estimate_memory_exponent(const ModelParams& p, double r_lo, double r_hi, std::size_t points,
                                const QuadConfig& q) {
  return estimate_memory_exponent_full(p, r_lo, r_hi, points, q).slope;
}

LassTable check_lass(const ModelParams& p, const std::vector<double>& rhos, double u, double v, double uv_dist,
                     const QuadConfig& q) {
  p.require_finite_variance();
  if (small_lag_regime(p) != SmallLagRegime::Rough) {
    throw DomainError("check_lass: alpha*gamma must lie in (n/2, (n+2)/2)");
  }
  if (rhos.empty()) throw DomainError("check_lass: no rho values");
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    if (!(rhos[i] > 0.0 && rhos[i] <= 1.0)) throw DomainError("check_lass: rho must lie in (0, 1]");
    if (i > 0 && !(rhos[i] < rhos[i - 1])) throw DomainError("check_lass: rhos must be strictly decreasing");
  }

  LassTable t;
  t.order = p.alpha_gamma() - 0.5 * p.n;
  const double c0 = variance(p);
  const double tangent = tangent_field_cov(p, u, v, uv_dist);
  auto cov = [&](double r) { return r == 0.0 ? c0 : covariance(p, r, q); };
  for (double rho : rhos) {
    LassRow row;
    row.rho = rho;
    const double inc = c0 - cov(rho * u) - cov(rho * v) + cov(rho * uv_dist);
    row.rescaled = inc / std::pow(rho, 2.0 * t.order);
    row.tangent = tangent;
    row.ratio = row.rescaled / tangent;
    row.gap = std::fabs(row.rescaled - tangent);
    t.rows.push_back(row);
  }
  t.gaps_decreasing = true;
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    if (!(t.rows[i].gap < t.rows[i - 1].gap)) t.gaps_decreasing = false;
  }
  return t;
}

ReplicateSummary fractal_dim_study(const ModelParams& p, const Grid& g, std::size_t replicates,
                                   std::uint64_t base_seed, LagRange lags, const SimulateOptions& opt) {
  if (replicates < 2) throw DomainError("fractal_dim_study: need >= 2 replicates");
  ReplicateSummary out;
  out.values.assign(replicates, 0.0);
  std::exception_ptr failure;
  const auto count = static_cast<long>(replicates);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      const auto s = simulate(p, g, base_seed + static_cast<std::uint64_t>(i), opt);
      out.values[static_cast<std::size_t>(i)] = estimate_fractal_dim(s, lags);
    } catch (...) {
#pragma omp critical(gwm_diagnostics_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  double sum = 0.0;
  for (double v : out.values) sum += v;
  out.mean = sum / static_cast<double>(replicates);
  double ss = 0.0;
  for (double v : out.values) ss += (v - out.mean) * (v - out.mean);
  out.std_error = std::sqrt(ss / static_cast<double>(replicates - 1) / static_cast<double>(replicates));
  return out;
}

DiagnosticsReport diagnose(const FieldSample& s, LagRange lags, double r_lo, double r_hi) {
  DiagnosticsReport r;
  r.params = s.params;
  const auto fd = estimate_fractal_dim_full(s, lags);
  r.estimated_fractal_dim = fd.dim;
  r.fractal_dim_half_width = kZ95 * 0.5 * fd.slope_se;
  r.estimated_H = fd.holder;
  r.H_half_width = kZ95 * 0.5 * fd.slope_se;
  const auto props = local_props(s.params);
  r.theoretical_fractal_dim = props.fractal_dim;
  if (s.params.alpha < 1.0) {
    const auto me = estimate_memory_exponent_full(s.params, r_lo, r_hi);
    r.estimated_memory_exponent = -me.slope;
    r.memory_exponent_half_width = kZ95 * me.slope_se;
    r.theoretical_memory_exponent = props.memory_exponent;
  }
  return r;
}

std::string report_to_json(const DiagnosticsReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  const nlohmann::json j = {
      {"schema", "gwm.diagnostics/1"},
      {"params", {{"alpha", r.params.alpha}, {"gamma", r.params.gamma}, {"lambda", r.params.lambda}, {"n", r.params.n}}},
      {"estimated_fractal_dim", r.estimated_fractal_dim},
      {"fractal_dim_half_width", r.fractal_dim_half_width},
      {"theoretical_fractal_dim", r.theoretical_fractal_dim},
      {"estimated_H", r.estimated_H},
      {"H_half_width", r.H_half_width},
      {"estimated_memory_exponent", opt(r.estimated_memory_exponent)},
      {"memory_exponent_half_width", opt(r.memory_exponent_half_width)},
      {"theoretical_memory_exponent", opt(r.theoretical_memory_exponent)}};
  return j.dump(2);
}

}  // namespace gwm
