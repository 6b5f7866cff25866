#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "gwm/covariance.hpp"
#include "gwm/errors.hpp"
#include "gwm/fieldsim.hpp"

namespace gwm {
namespace {

using cplx = std::complex<double>;

// Eigenvalues this far below zero relative to the largest are round-off.
constexpr double kRoundoff = 1e-12;

std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

// In-place forward DFT, unnormalized. Planning is serialized because the
// FFTW planner is not reentrant; ESTIMATE keeps plans reproducible.
void fft_forward(std::vector<cplx>& data, std::size_t rows, std::size_t cols) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = cols == 1 ? fftw_plan_dft_1d(static_cast<int>(rows), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE)
                     : fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), buf, buf,
                                        FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error("FFTW could not create a plan");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

Embedding finish_embedding(std::vector<cplx>&& row, std::size_t m0, std::size_t m1, double max_clipped) {
  fft_forward(row, m0, m1);
  Embedding e;
  e.shape = {m0, m1};
  e.eigenvalues.resize(row.size());
  double total = 0.0;
  double negative = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < row.size(); ++k) {
    const double v = row[k].real();
    lo = std::min(lo, v);
    total += std::fabs(v);
    if (v < 0.0) negative -= v;
    e.eigenvalues[k] = std::max(v, 0.0);
  }
  e.min_eigenvalue = lo;
  e.clipped_fraction = total > 0.0 ? negative / total : 0.0;
  if (e.clipped_fraction > max_clipped) {
    throw EmbeddingError("circulant embedding: clipped fraction " + std::to_string(e.clipped_fraction) +
                             " exceeds " + std::to_string(max_clipped),
                         e.clipped_fraction);
  }
  return e;
}

bool embedding_nonnegative(const Embedding& e) {
  const double hi = *std::max_element(e.eigenvalues.begin(), e.eigenvalues.end());
  return e.min_eigenvalue >= -kRoundoff * hi;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Draws on the torus and keeps the real part of the transform on the grid.
std::vector<double> synthesize(const Embedding& e, std::uint64_t seed, std::size_t rows, std::size_t cols) {
  const std::size_t m = e.eigenvalues.size();
  const double inv_m = 1.0 / static_cast<double>(m);
  std::vector<cplx> w(m);
  const auto count = static_cast<long>(m);
#pragma omp parallel for schedule(static)
  for (long k = 0; k < count; ++k) {
    const auto uk = static_cast<std::uint64_t>(k);
    const double scale = std::sqrt(e.eigenvalues[uk] * inv_m);
    w[uk] = scale * cplx(counter_normal(seed, uk, 0), counter_normal(seed, uk, 1));
  }
  fft_forward(w, e.shape[0], e.shape[1]);
  std::vector<double> out(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) out[i * cols + j] = w[i * e.shape[1] + j].real();
  }
  return out;
}

}  // namespace

Grid Grid::line(std::size_t n, double dx) { return Grid{1, {n, 1}, {dx, 1.0}}; }

Grid Grid::plane(std::size_t nx, std::size_t ny, double dx, double dy) {
  return Grid{2, {nx, ny}, {dx, dy}};
}

void Grid::validate(std::size_t max_points) const {
  if (dims != 1 && dims != 2) throw DomainError("grid dims must be 1 or 2");
  for (int a = 0; a < dims; ++a) {
    if (sizes[a] < 8) throw DomainError("grid sizes must be >= 8");
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a])) throw DomainError("grid spacing must be > 0");
  }
  if (total() > max_points) {
    throw DomainError("grid has " + std::to_string(total()) + " points, cap is " + std::to_string(max_points));
  }
}

double counter_normal(std::uint64_t seed, std::uint64_t index, int stream) {
  const std::uint64_t key = splitmix64(splitmix64(seed) ^ index);
  const double u1 = to_open_unit(key);
  const double u2 = to_open_unit(splitmix64(key));
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return stream == 0 ? radius * std::cos(angle) : radius * std::sin(angle);
}

Embedding circulant_embedding(const CovarianceTable& cov_lags, double max_clipped_fraction) {
  const std::size_t n = cov_lags.size();
  if (n < 2) throw DomainError("circulant_embedding needs at least two lags");
  const std::size_t m = 2 * (n - 1);
  std::vector<cplx> row(m);
  for (std::size_t k = 0; k < m; ++k) row[k] = cov_lags[std::min(k, m - k)];
  return finish_embedding(std::move(row), m, 1, max_clipped_fraction);
}

Embedding circulant_embedding_2d(std::span<const double> base, std::size_t rows, std::size_t cols,
                                 double max_clipped_fraction) {
  if (rows < 2 || cols < 2 || base.size() != rows * cols) {
    throw DomainError("circulant_embedding_2d: base must be rows x cols with rows, cols >= 2");
  }
  const std::size_t m0 = 2 * (rows - 1);
  const std::size_t m1 = 2 * (cols - 1);
  std::vector<cplx> row(m0 * m1);
  for (std::size_t i = 0; i < m0; ++i) {
    const std::size_t bi = std::min(i, m0 - i);
    for (std::size_t j = 0; j < m1; ++j) row[i * m1 + j] = base[bi * cols + std::min(j, m1 - j)];
  }
  return finish_embedding(std::move(row), m0, m1, max_clipped_fraction);
}

FieldSample simulate(const ModelParams& p, const Grid& g, std::uint64_t seed, const SimulateOptions& opt) {
  p.require_finite_variance();
  g.validate(opt.max_points);
  if (p.n != g.dims) {
    throw DomainError("simulate: field dimension n=" + std::to_string(p.n) + " does not match grid dims=" +
                      std::to_string(g.dims));
  }
  constexpr double kNoLimit = std::numeric_limits<double>::infinity();

  Embedding e;
  int d = 0;
  for (;; ++d) {
    const std::size_t scale = std::size_t{1} << d;
    const std::size_t c0 = (g.sizes[0] - 1) * scale + 1;
    if (g.dims == 1) {
      auto table = CovarianceCache::global().get(p, g.spacing[0], c0, opt.quad);
      e = circulant_embedding(*table, kNoLimit);
    } else {
      const std::size_t c1 = (g.sizes[1] - 1) * scale + 1;
      std::vector<double> dist(c0 * c1);
      for (std::size_t i = 0; i < c0; ++i) {
        for (std::size_t j = 0; j < c1; ++j) {
          dist[i * c1 + j] = std::hypot(static_cast<double>(i) * g.spacing[0], static_cast<double>(j) * g.spacing[1]);
        }
      }
      const auto base = covariance_at(p, dist, opt.quad);
      e = circulant_embedding_2d(base, c0, c1, kNoLimit);
    }
    if (embedding_nonnegative(e) || d >= opt.max_doublings) break;
  }
  e.doublings = d;
  if (e.clipped_fraction > opt.max_clipped_fraction) {
    throw EmbeddingError("simulate: embedding clipped fraction " + std::to_string(e.clipped_fraction) +
                             " after " + std::to_string(d) + " doublings",
                         e.clipped_fraction);
  }

  FieldSample s;
  s.grid = g;
  s.seed = seed;
  s.params = p;
  s.min_eigenvalue = e.min_eigenvalue;
  s.clipped_fraction = e.clipped_fraction;
  s.doublings = d;
  s.values = synthesize(e, seed, g.sizes[0], g.dims == 1 ? 1 : g.sizes[1]);
  return s;
}

std::shared_ptr<const CovarianceTable> CovarianceCache::get(const ModelParams& p, double spacing,
                                                            std::size_t count, const QuadConfig& q) {
  const Key key{p.alpha, p.gamma, p.lambda, p.n, spacing, count, q.rel_tol};
  {
    std::lock_guard lock(mu_);
    if (auto it = entries_.find(key); it != entries_.end()) {
      ++hits_;
      return it->second;
    }
  }
  auto table = std::make_shared<const CovarianceTable>(covariance_table(p, spacing, count, q));
  std::lock_guard lock(mu_);
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  if (entries_.size() >= capacity_ && !order_.empty()) {
    entries_.erase(order_.front());
    order_.erase(order_.begin());
  }
  entries_.emplace(key, table);
  order_.push_back(key);
  return table;
}

std::size_t CovarianceCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::size_t CovarianceCache::hits() const {
  std::lock_guard lock(mu_);
  return hits_;
}

CovarianceCache& CovarianceCache::global() {
  static CovarianceCache cache;
  return cache;
}

}  // namespace gwm
