#include "gwm/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gwm/errors.hpp"

namespace gwm {

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadConfig& cfg) {
  const std::size_t d = x0.size();
  if (d == 0) throw DomainError("nelder_mead: empty starting point");
  NelderMeadResult out;
  auto eval = [&](const std::vector<double>& x) {
    ++out.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> pts(d + 1, x0);
  std::vector<double> val(d + 1);
  val[0] = eval(x0);
  if (!std::isfinite(val[0])) throw DomainError("nelder_mead: objective is not finite at the start");
  for (std::size_t i = 0; i < d; ++i) {
    pts[i + 1][i] += cfg.initial_step;
    val[i + 1] = eval(pts[i + 1]);
  }

  std::vector<std::size_t> idx(d + 1);
  std::vector<double> centroid(d), xr(d), xe(d), xc(d);
  auto along = [&](std::vector<double>& dst, double t, const std::vector<double>& worst) {
    for (std::size_t j = 0; j < d; ++j) dst[j] = centroid[j] + t * (worst[j] - centroid[j]);
  };

  for (;;) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    const std::size_t best = idx.front(), worst = idx.back(), second = idx[d - 1];

    double diameter = 0.0;
    for (std::size_t i : idx) {
      for (std::size_t j = 0; j < d; ++j) diameter = std::max(diameter, std::fabs(pts[i][j] - pts[best][j]));
    }
    const double spread = val[worst] - val[best];
    if (spread == 0.0 && out.iterations == 0) {
      // Flat objective: nothing distinguishes the vertices.
      std::vector<double> mid(d, 0.0);
      for (const auto& p : pts)
        for (std::size_t j = 0; j < d; ++j) mid[j] += p[j] / static_cast<double>(d + 1);
      out.x = mid;
      out.f = val[best];
      out.converged = true;
      return out;
    }
    if (diameter <= cfg.x_tol && spread <= cfg.f_tol) {
      out.converged = true;
      break;
    }
    if (out.iterations >= cfg.max_iterations) break;
    ++out.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) centroid[j] += pts[idx[i]][j] / static_cast<double>(d);

    along(xr, -1.0, pts[worst]);
    const double fr = eval(xr);
    if (fr < val[best]) {
      along(xe, -2.0, pts[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
      continue;
    }
    const bool outside = fr < val[worst];
    along(xc, outside ? -0.5 : 0.5, pts[worst]);
    const double fc = eval(xc);
    if (fc < (outside ? fr : val[worst])) {
      pts[worst] = xc;
      val[worst] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= d; ++i) {
      auto& p = pts[idx[i]];
      for (std::size_t j = 0; j < d; ++j) p[j] = pts[best][j] + 0.5 * (p[j] - pts[best][j]);
      val[idx[i]] = eval(p);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(val.begin(), val.end()) - val.begin());
  out.x = pts[best];
  out.f = val[best];
  return out;
}

}  // namespace gwm
