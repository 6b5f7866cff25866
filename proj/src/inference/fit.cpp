#include "gwm/fit.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "gwm/errors.hpp"

namespace gwm {
namespace {

using std::numbers::pi;

// Region where the objective is evaluated at all; outside it returns +inf.
constexpr double kMinAlpha = 0.05;
constexpr double kMaxGamma = 200.0;
constexpr double kMinEll = 1e-3;
constexpr double kMaxEll = 1e3;

constexpr std::size_t kMinObservations = 100;

bool in_search_box(const ThetaPrime& tp) {
  return tp.alpha >= kMinAlpha && tp.gamma <= kMaxGamma && tp.ell >= kMinEll && tp.ell <= kMaxEll &&
         tp.alpha * tp.gamma > 0.5;
}

nlohmann::json theta_json(const ThetaPrime& t) { return {{"alpha", t.alpha}, {"gamma", t.gamma}, {"ell", t.ell}}; }

}  // namespace

Family parse_family(const std::string& s) {
  if (s == "wm" || s == "WM") return Family::WM;
  if (s == "gwm" || s == "GWM") return Family::GWM;
  throw DomainError("family must be 'wm' or 'gwm', got '" + s + "'");
}

std::string to_string(Family f) { return f == Family::WM ? "wm" : "gwm"; }

std::vector<ThetaPrime> default_starts(Family f) {
  const double alpha = f == Family::WM ? 1.0 : 0.75;
  std::vector<ThetaPrime> out;
  for (double ag : {0.75, 1.5, 2.5}) {
    for (double ell : {0.5, 3.0}) out.push_back({alpha, ag / alpha, ell});
  }
  if (f == Family::GWM) out.push_back({1.0, 1.5, 1.0});
  return out;
}

std::vector<double> to_unconstrained(const ThetaPrime& tp, Family f) {
  tp.validate();
  if (f == Family::WM) {
    if (tp.alpha != 1.0) throw DomainError("WM starts must have alpha = 1");
    return {std::log(tp.gamma - 0.5), std::log(tp.ell)};
  }
  return {std::sqrt(-std::log(tp.alpha)), std::log(tp.alpha * tp.gamma - 0.5), std::log(tp.ell)};
}

ThetaPrime from_unconstrained(std::span<const double> x, Family f) {
  if (f == Family::WM) {
    if (x.size() != 2) throw DomainError("WM coordinates are (log(gamma-1/2), log ell)");
    return {1.0, 0.5 + std::exp(x[0]), std::exp(x[1])};
  }
  if (x.size() != 3) throw DomainError("GWM coordinates are (a, log(alpha gamma-1/2), log ell)");
  const double alpha = std::exp(-x[0] * x[0]);
  return {alpha, (0.5 + std::exp(x[1])) / alpha, std::exp(x[2])};
}

FitResult fit(std::span<const double> y, Family family, const FitOptions& opt) {
  if (y.size() < kMinObservations) {
    throw DomainError("fit needs at least " + std::to_string(kMinObservations) + " observations");
  }
  const auto starts = opt.starts.empty() ? default_starts(family) : opt.starts;

  FitResult res;
  res.family = family;
  res.n_obs = y.size();
  res.nll_reduced = std::numeric_limits<double>::infinity();

  auto objective = [&](std::span<const double> x) {
    const ThetaPrime tp = from_unconstrained(x, family);
    if (!in_search_box(tp)) return std::numeric_limits<double>::infinity();
    try {
      return reduced_nll(tp, y, opt.quad);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  for (std::size_t s = 0; s < starts.size(); ++s) {
    StartOutcome o;
    o.start = starts[s];
    try {
      const auto r = nelder_mead(objective, to_unconstrained(starts[s], family), opt.nm);
      o.end = from_unconstrained(r.x, family);
      o.nll = r.f;
      o.iterations = r.iterations;
      o.converged = r.converged;
      res.iterations += r.iterations;
      res.evaluations += r.evaluations;
      if (r.f < res.nll_reduced) {
        res.nll_reduced = r.f;
        res.best_start = s;
        res.converged = r.converged;
      }
    } catch (const DomainError&) {
      o.failed = true;
      o.nll = std::numeric_limits<double>::infinity();
    }
    res.starts.push_back(o);
  }
  if (!std::isfinite(res.nll_reduced)) throw Error("fit: every start failed (non-finite likelihood)");

  const ThetaPrime best = res.starts[res.best_start].end;
  res.params = ExtendedParams::from_s2(best, profile_s2(best, y, opt.quad));
  return res;
}

double model_psd(const ExtendedParams& theta, double omega) {
  theta.theta_prime().validate();
  const double scale = theta.K * theta.K / (2.0 * pi * theta.ell);
  auto term = [&](double u) {
    return scale * std::pow(std::pow(std::fabs(u) / theta.ell, 2.0 * theta.alpha) + 1.0, -theta.gamma);
  };
  constexpr int kTerms = 2000;
  double sum = term(omega);
  for (int m = 1; m <= kTerms; ++m) sum += term(omega + 2.0 * pi * m) + term(omega - 2.0 * pi * m);
  // Remaining terms behave like scale (2 pi |m| / ell)^(-2 alpha gamma).
  const double p = 2.0 * theta.alpha * theta.gamma;
  const double tail = scale * std::pow(2.0 * pi / theta.ell, -p) * std::pow(kTerms + 0.5, 1.0 - p) / (p - 1.0);
  return sum + 2.0 * tail;
}

std::string fit_to_json(const FitResult& r) {
  nlohmann::json starts = nlohmann::json::array();
  for (const auto& s : r.starts) {
    starts.push_back({{"start", theta_json(s.start)},
                      {"end", theta_json(s.end)},
                      {"nll_reduced", s.failed ? nlohmann::json(nullptr) : nlohmann::json(s.nll)},
                      {"iterations", s.iterations},
                      {"converged", s.converged},
                      {"failed", s.failed}});
  }
  const nlohmann::json j = {{"schema", "gwm.fit/1"},
                            {"family", to_string(r.family)},
                            {"n_obs", r.n_obs},
                            {"alpha", r.params.alpha},
                            {"gamma", r.params.gamma},
                            {"K", r.params.K},
                            {"ell", r.params.ell},
                            {"s2", r.params.s2},
                            {"nll_reduced", r.nll_reduced},
                            {"iterations", r.iterations},
                            {"evaluations", r.evaluations},
                            {"converged", r.converged},
                            {"best_start", r.best_start},
                            {"starts", starts}};
  return j.dump(2);
}

}  // namespace gwm
