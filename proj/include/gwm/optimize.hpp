#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gwm {

struct NelderMeadConfig {
  double x_tol = 1e-4;  // max vertex distance (infinity norm) from the best vertex
  double f_tol = 1e-6;  // max value spread across the simplex
  int max_iterations = 2000;
  double initial_step = 0.25;  // absolute offset per coordinate
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Downhill simplex with the standard coefficients (1, 2, 1/2, 1/2).
/// Non-finite values are treated as +inf; throws DomainError if f(x0) is not finite.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadConfig& cfg = {});

}  // namespace gwm
