#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gwm/likelihood.hpp"
#include "gwm/optimize.hpp"

namespace gwm {

enum class Family { WM, GWM };

Family parse_family(const std::string& s);  // "wm" or "gwm"
std::string to_string(Family f);

/// Starting points: alpha*gamma in {0.75, 1.5, 2.5} x ell in {0.5, 3}, at
/// alpha = 1 for WM and alpha = 0.75 for GWM; GWM adds (1, 1.5, 1).
std::vector<ThetaPrime> default_starts(Family f);

struct FitOptions {
  std::vector<ThetaPrime> starts;  // empty: default_starts(family)
  NelderMeadConfig nm{};
  QuadConfig quad{};
};

struct StartOutcome {
  ThetaPrime start;
  ThetaPrime end;
  double nll = 0.0;
  int iterations = 0;
  bool converged = false;
  bool failed = false;
};

struct FitResult {
  Family family = Family::GWM;
  ExtendedParams params;
  double nll_reduced = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::size_t best_start = 0;
  std::size_t n_obs = 0;
  std::vector<StartOutcome> starts;
};

/// Minimizes reduced_nll over (gamma, ell) with alpha = 1 (WM) or over
/// (alpha, gamma, ell) (GWM); best over all starts. s2 and K back-filled.
FitResult fit(std::span<const double> y, Family family, const FitOptions& opt = {});

/// Unconstrained coordinates. GWM: (sqrt(-log alpha), log(alpha gamma - 1/2),
/// log ell); WM: (log(gamma - 1/2), log ell).
std::vector<double> to_unconstrained(const ThetaPrime& tp, Family f);
ThetaPrime from_unconstrained(std::span<const double> x, Family f);

/// Discrete-time PSD of the sampled process:
/// sum_m (K^2 / ell) S((w + 2 pi m) / ell), S(u) = (|u|^(2 alpha) + 1)^-gamma / (2 pi).
double model_psd(const ExtendedParams& theta, double omega);

/// Schema "gwm.fit/1".
std::string fit_to_json(const FitResult& r);

}  // namespace gwm
