#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "gwm/model.hpp"
#include "gwm/quadrature.hpp"

namespace gwm {

/// Regular grid in one or two dimensions. Axis 0 varies slowest.
struct Grid {
  static constexpr std::size_t kDefaultMaxPoints = std::size_t{1} << 22;

  int dims = 1;
  std::array<std::size_t, 2> sizes{256, 1};
  std::array<double, 2> spacing{1.0, 1.0};

  static Grid line(std::size_t n, double dx);
  static Grid plane(std::size_t nx, std::size_t ny, double dx, double dy);

  std::size_t total() const { return dims == 1 ? sizes[0] : sizes[0] * sizes[1]; }

  /// dims in {1,2}, sizes >= 8, spacing > 0, total() <= max_points.
  void validate(std::size_t max_points = kDefaultMaxPoints) const;

  bool operator==(const Grid&) const = default;
};

/// Spectrum of the (block-)circulant extension of a covariance table.
struct Embedding {
  std::array<std::size_t, 2> shape{0, 1};  // torus size per axis
  std::vector<double> eigenvalues;         // row-major, negatives clipped to 0
  double min_eigenvalue = 0.0;             // before clipping
  double clipped_fraction = 0.0;           // clipped |mass| / total |mass|
  int doublings = 0;                       // domain doublings used by simulate
};

/// Circulant extension of lags c_0..c_{N-1} to length 2(N-1). Throws
/// EmbeddingError when the clipped fraction exceeds max_clipped_fraction.
Embedding circulant_embedding(const CovarianceTable& cov_lags, double max_clipped_fraction = 1e-3);

/// Block-circulant extension of c(i, j), i < rows, j < cols (row-major),
/// to a (2(rows-1)) x (2(cols-1)) torus.
Embedding circulant_embedding_2d(std::span<const double> base, std::size_t rows, std::size_t cols,
                                 double max_clipped_fraction = 1e-3);

struct FieldSample {
  Grid grid;
  std::vector<double> values;  // row-major, length grid.total()
  std::uint64_t seed = 0;
  ModelParams params;
  double min_eigenvalue = 0.0;
  double clipped_fraction = 0.0;
  int doublings = 0;
};

struct SimulateOptions {
  QuadConfig quad{};
  std::size_t max_points = Grid::kDefaultMaxPoints;
  int max_doublings = 3;
  double max_clipped_fraction = 1e-3;
};

/// Stationary Gaussian realization on g, deterministic in (p, g, seed) and
/// independent of the thread count.
FieldSample simulate(const ModelParams& p, const Grid& g, std::uint64_t seed,
                     const SimulateOptions& opt = {});

/// Standard normal keyed by (seed, index, stream). stream selects one of two
/// independent variates produced from the same counter pair.
double counter_normal(std::uint64_t seed, std::uint64_t index, int stream);

/// Thread-safe memo of covariance tables keyed by (params, spacing, count,
/// rel_tol). Oldest entries are evicted first.
class CovarianceCache {
 public:
  explicit CovarianceCache(std::size_t capacity = 32) : capacity_(capacity) {}

  std::shared_ptr<const CovarianceTable> get(const ModelParams& p, double spacing, std::size_t count,
                                             const QuadConfig& q = {});
  std::size_t size() const;
  std::size_t hits() const;

  static CovarianceCache& global();

 private:
  using Key = std::tuple<double, double, double, int, double, std::size_t, double>;
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::map<Key, std::shared_ptr<const CovarianceTable>> entries_;
  std::vector<Key> order_;
  std::size_t hits_ = 0;
};

/// CSV with header "x,value" (1D) or "x,y,value" (2D); 17 significant digits.
void write_csv(std::ostream& out, const FieldSample& s);

/// Writes <prefix>.bin (little-endian float64, row-major) and <prefix>.json.
void write_raw(const std::string& prefix, const FieldSample& s);

/// Reads back a pair written by write_raw.
FieldSample read_raw(const std::string& prefix);

}  // namespace gwm
