#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>
#include <Eigen/Eigenvalues>

#include "gwm/covariance.hpp"
#include "gwm/errors.hpp"
#include "gwm/fieldsim.hpp"

using gwm::Grid;
using gwm::ModelParams;

namespace {

// Replicate mean and its standard error for lag-k products.
struct Moment {
  double mean;
  double se;
};

Moment lag_moment(const std::vector<std::vector<double>>& reps, std::size_t k) {
  std::vector<double> est;
  for (const auto& x : reps) {
    double s = 0.0;
    for (std::size_t i = 0; i + k < x.size(); ++i) s += x[i] * x[i + k];
    est.push_back(s / static_cast<double>(x.size() - k));
  }
  double m = 0.0;
  for (double e : est) m += e;
  m /= static_cast<double>(est.size());
  double v = 0.0;
  for (double e : est) v += (e - m) * (e - m);
  v /= static_cast<double>(est.size() - 1);
  return {m, std::sqrt(v / static_cast<double>(est.size()))};
}

}  // namespace

TEST_CASE("OU embedding is positive and matches a dense eigen-decomposition") {
  const std::size_t n = 9;
  gwm::CovarianceTable t{1.0, {}};
  for (std::size_t k = 0; k < n; ++k) t.values.push_back(0.5 * std::exp(-static_cast<double>(k)));
  const auto e = gwm::circulant_embedding(t);
  const std::size_t m = e.shape[0];
  CHECK(m == 16);
  CHECK(e.min_eigenvalue > 0.0);
  CHECK(e.clipped_fraction == 0.0);

  Eigen::MatrixXd c(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t d = (i + m - j) % m;
      c(i, j) = t[std::min(d, m - d)];
    }
  }
  Eigen::VectorXd dense = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c).eigenvalues();
  std::vector<double> fast = e.eigenvalues;
  std::sort(fast.begin(), fast.end());
  for (std::size_t k = 0; k < m; ++k) CHECK(std::fabs(fast[k] - dense(static_cast<Eigen::Index>(k))) < 1e-13);

  for (std::size_t big : {16, 64, 1024}) {
    gwm::CovarianceTable u{1.0, {}};
    for (std::size_t k = 0; k < big; ++k) u.values.push_back(0.5 * std::exp(-static_cast<double>(k)));
    CHECK(gwm::circulant_embedding(u).min_eigenvalue > 0.0);
  }
}

TEST_CASE("constant table gives a rank-one spectrum") {
  gwm::CovarianceTable t{1.0, std::vector<double>(12, 2.0)};
  const auto e = gwm::circulant_embedding(t);
  const double m = static_cast<double>(e.shape[0]);
  CHECK(e.eigenvalues[0] == doctest::Approx(2.0 * m));
  for (std::size_t k = 1; k < e.eigenvalues.size(); ++k) CHECK(std::fabs(e.eigenvalues[k]) < 1e-12);
}

TEST_CASE("clipping limit is enforced") {
  // A triangle of width one lag is not a valid covariance on the torus.
  gwm::CovarianceTable t{1.0, {1.0, 0.9, -0.9, 0.0, 0.0, 0.0, 0.0, 0.0}};
  CHECK_THROWS_AS(gwm::circulant_embedding(t), gwm::EmbeddingError);
  const auto e = gwm::circulant_embedding(t, 1.0);
  CHECK(e.min_eigenvalue < 0.0);
  CHECK(e.clipped_fraction > 1e-3);
  for (double v : e.eigenvalues) CHECK(v >= 0.0);
}

TEST_CASE("counter-based normals") {
  CHECK(gwm::counter_normal(7, 11, 0) == gwm::counter_normal(7, 11, 0));
  CHECK(gwm::counter_normal(7, 11, 0) != gwm::counter_normal(7, 11, 1));
  CHECK(gwm::counter_normal(7, 11, 0) != gwm::counter_normal(8, 11, 0));
  double s = 0.0, s2 = 0.0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    const double z = gwm::counter_normal(3, static_cast<std::uint64_t>(i / 2), i % 2);
    s += z;
    s2 += z * z;
  }
  CHECK(std::fabs(s / count) < 4.0 / std::sqrt(count));
  CHECK(std::fabs(s2 / count - 1.0) < 4.0 * std::sqrt(2.0 / count));
}

TEST_CASE("simulation is deterministic and thread-count independent") {
  const ModelParams p{0.75, 1.2, 1.0, 1};
  const auto g = Grid::line(1000, 0.1);
  omp_set_num_threads(1);
  const auto a = gwm::simulate(p, g, 42);
  omp_set_num_threads(4);
  const auto b = gwm::simulate(p, g, 42);
  CHECK(a.values == b.values);
  CHECK(gwm::simulate(p, g, 43).values != a.values);
  CHECK(a.values.size() == 1000);
  CHECK(a.clipped_fraction <= 1e-3);
}

TEST_CASE("replicate moments of the OU path") {
  const ModelParams p{1, 1, 1, 1};
  const auto g = Grid::line(4096, 1.0);
  std::vector<std::vector<double>> reps;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) reps.push_back(gwm::simulate(p, g, seed).values);
  for (std::size_t k : {0, 1, 3}) {
    const auto m = lag_moment(reps, k);
    const double target = gwm::covariance(p, static_cast<double>(k));
    INFO("lag " << k << " mean " << m.mean << " se " << m.se);
    CHECK(std::fabs(m.mean - target) < 3.0 * m.se);
  }
}

TEST_CASE("paths get smoother as alpha*gamma grows") {
  const auto g = Grid::line(2048, 0.05);
  double prev = 1e300;
  for (double ag : {0.7, 1.0, 1.4}) {
    const auto s = gwm::simulate({1.0, ag, 1.0, 1}, g, 5);
    double msd = 0.0;
    for (std::size_t i = 1; i < s.values.size(); ++i) msd += std::pow(s.values[i] - s.values[i - 1], 2);
    msd /= static_cast<double>(s.values.size() - 1);
    CHECK(msd < prev);
    prev = msd;
  }
}

TEST_CASE("two-dimensional fields") {
  const ModelParams p{1, 1.5, 1, 2};
  const auto g = Grid::plane(48, 40, 0.25, 0.25);
  const auto s = gwm::simulate(p, g, 9);
  CHECK(s.values.size() == 48 * 40);
  CHECK(s.clipped_fraction <= 1e-3);
  CHECK(gwm::simulate(p, g, 9).values == s.values);

  // Ensemble variance at a fixed site and lag-1 covariance along each axis.
  std::vector<double> v0, vx, vy;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto f = gwm::simulate(p, g, seed);
    v0.push_back(f.values[10 * 40 + 10] * f.values[10 * 40 + 10]);
    vx.push_back(f.values[10 * 40 + 10] * f.values[11 * 40 + 10]);
    vy.push_back(f.values[10 * 40 + 10] * f.values[10 * 40 + 11]);
  }
  auto check = [](const std::vector<double>& x, double target) {
    double m = 0.0, v = 0.0;
    for (double e : x) m += e;
    m /= static_cast<double>(x.size());
    for (double e : x) v += (e - m) * (e - m);
    const double se = std::sqrt(v / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
    CHECK(std::fabs(m - target) < 3.5 * se);
  };
  check(v0, gwm::variance(p));
  check(vx, gwm::covariance(p, 0.25));
  check(vy, gwm::covariance(p, 0.25));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(gwm::simulate({1, 1, 1, 1}, Grid::line(4, 1.0), 1), gwm::DomainError);
  CHECK_THROWS_AS(gwm::simulate({1, 1, 1, 1}, Grid::line(64, 0.0), 1), gwm::DomainError);
  CHECK_THROWS_AS(gwm::simulate({1, 1.5, 1, 2}, Grid::line(64, 1.0), 1), gwm::DomainError);
  CHECK_THROWS_AS(gwm::simulate({0.5, 1, 1, 1}, Grid::line(64, 1.0), 1), gwm::InfiniteVarianceError);
  gwm::SimulateOptions opt;
  opt.max_points = 100;
  CHECK_THROWS_AS(gwm::simulate({1, 1, 1, 1}, Grid::line(128, 1.0), 1, opt), gwm::DomainError);
}

TEST_CASE("covariance cache") {
  gwm::CovarianceCache cache(2);
  const ModelParams p{0.8, 2, 1, 1};
  auto a = cache.get(p, 0.5, 50);
  auto b = cache.get(p, 0.5, 50);
  CHECK(a == b);
  CHECK(cache.hits() == 1);
  cache.get(p, 0.5, 51);
  cache.get(p, 0.5, 52);
  CHECK(cache.size() == 2);
  CHECK(a->values == gwm::covariance_table(p, 0.5, 50).values);
}

TEST_CASE("raw and csv output") {
  const auto s = gwm::simulate({1, 1.5, 1, 2}, Grid::plane(8, 10, 0.5, 0.25), 77);
  const auto dir = std::filesystem::temp_directory_path() / "gwm_fieldsim_test";
  std::filesystem::create_directories(dir);
  const std::string prefix = (dir / "field").string();
  gwm::write_raw(prefix, s);
  CHECK(std::filesystem::file_size(prefix + ".bin") == 8 * 80);
  const auto back = gwm::read_raw(prefix);
  CHECK(back.values == s.values);
  CHECK(back.grid == s.grid);
  CHECK(back.seed == 77);
  CHECK(back.params == s.params);

  std::ostringstream csv;
  gwm::write_csv(csv, s);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,y,value");
  std::getline(in, line);
  CHECK(line.rfind("0,0,", 0) == 0);
  std::size_t rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 80);
  std::filesystem::remove_all(dir);
}
