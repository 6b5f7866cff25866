#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gwm {

/// One-sided PSD estimate at angular frequencies in [0, pi].
struct PsdEstimate {
  std::vector<double> omega;
  std::vector<double> psd;
  std::size_t segment_length = 0;  // N for the periodogram, block length for Welch
  std::size_t step = 0;
  std::size_t blocks = 1;
};

/// |sum_j x_j e^(-i w j)|^2 / (2 pi N) at w_k = 2 pi k / N, k = 0..floor(N/2).
PsdEstimate periodogram(std::span<const double> x);

/// Riemann sum over (-pi, pi] of a one-sided Fourier-grid estimate, filling
/// the other half by symmetry. For the periodogram this is the mean square.
double psd_integral(const PsdEstimate& est);

struct WelchOptions {
  std::size_t block_len = 73;
  double overlap = 0.5;
};

/// Symmetric Hamming window 0.54 - 0.46 cos(2 pi j / (L-1)).
std::vector<double> hamming(std::size_t len);

/// Average of Hamming-windowed block periodograms, step floor(L (1 - overlap)),
/// trailing partial block dropped, window normalized by its mean square.
PsdEstimate welch_psd(std::span<const double> x, const WelchOptions& opt = {});

/// (N-h)^-1 sum (x_{i+h} - x_i)^2 for h = 1..h_max.
std::vector<double> empirical_variogram(std::span<const double> x, std::size_t h_max);

/// Two-column CSV with header, 17 significant digits, classic locale.
void write_columns_csv(std::ostream& out, const std::string& x_name, const std::string& y_name,
                       std::span<const double> x, std::span<const double> y);

}  // namespace gwm
