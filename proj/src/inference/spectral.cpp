#include "gwm/spectral.hpp"

#include <cmath>
#include <complex>
#include <iomanip>
#include <locale>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

#include <fftw3.h>

#include "gwm/errors.hpp"

namespace gwm {
namespace {

using std::numbers::pi;
using cplx = std::complex<double>;

std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

// |DFT|^2 of a real block, bins 0..floor(L/2).
std::vector<double> power_spectrum(std::vector<double> block) {
  const std::size_t len = block.size();
  std::vector<cplx> out(len / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(len), block.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error("FFTW could not create a plan");
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<double> p(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) p[k] = std::norm(out[k]);
  return p;
}

std::vector<double> fourier_grid(std::size_t len) {
  std::vector<double> w(len / 2 + 1);
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = 2.0 * pi * static_cast<double>(k) / static_cast<double>(len);
  return w;
}

}  // namespace

PsdEstimate periodogram(std::span<const double> x) {
  if (x.size() < 2) throw DomainError("periodogram needs at least two samples");
  const double n = static_cast<double>(x.size());
  PsdEstimate est;
  est.omega = fourier_grid(x.size());
  est.psd = power_spectrum(std::vector<double>(x.begin(), x.end()));
  for (double& v : est.psd) v /= 2.0 * pi * n;
  est.segment_length = x.size();
  est.step = x.size();
  return est;
}

double psd_integral(const PsdEstimate& est) {
  const std::size_t len = est.segment_length;
  if (len < 2 || est.psd.size() != len / 2 + 1) throw DomainError("psd_integral: not a Fourier-grid estimate");
  double total = est.psd[0];
  for (std::size_t k = 1; k < est.psd.size(); ++k) {
    const bool nyquist = len % 2 == 0 && k == len / 2;
    total += nyquist ? est.psd[k] : 2.0 * est.psd[k];
  }
  return total * 2.0 * pi / static_cast<double>(len);
}

std::vector<double> hamming(std::size_t len) {
  if (len < 2) throw DomainError("hamming window needs length >= 2");
  std::vector<double> w(len);
  for (std::size_t j = 0; j < len; ++j) {
    w[j] = 0.54 - 0.46 * std::cos(2.0 * pi * static_cast<double>(j) / static_cast<double>(len - 1));
  }
  return w;
}

PsdEstimate welch_psd(std::span<const double> x, const WelchOptions& opt) {
  const std::size_t len = opt.block_len;
  if (len < 2) throw DomainError("welch_psd: block length must be >= 2");
  if (!(opt.overlap >= 0.0 && opt.overlap < 1.0)) throw DomainError("welch_psd: overlap must be in [0, 1)");
  if (x.size() < len) throw DomainError("welch_psd: block longer than series");
  const auto step = static_cast<std::size_t>(std::floor(static_cast<double>(len) * (1.0 - opt.overlap)));
  if (step == 0) throw DomainError("welch_psd: overlap leaves a zero step");

  const auto w = hamming(len);
  double power = 0.0;
  for (double v : w) power += v * v;
  power /= static_cast<double>(len);

  PsdEstimate est;
  est.omega = fourier_grid(len);
  est.psd.assign(len / 2 + 1, 0.0);
  est.segment_length = len;
  est.step = step;
  est.blocks = (x.size() - len) / step + 1;
  std::vector<double> block(len);
  for (std::size_t b = 0; b < est.blocks; ++b) {
    for (std::size_t j = 0; j < len; ++j) block[j] = w[j] * x[b * step + j];
    const auto p = power_spectrum(block);
    for (std::size_t k = 0; k < p.size(); ++k) est.psd[k] += p[k];
  }
  const double scale = 1.0 / (2.0 * pi * static_cast<double>(len) * power * static_cast<double>(est.blocks));
  for (double& v : est.psd) v *= scale;
  return est;
}

std::vector<double> empirical_variogram(std::span<const double> x, std::size_t h_max) {
  if (h_max >= x.size()) throw DomainError("empirical_variogram: h_max must be < N");
  std::vector<double> out(h_max);
  for (std::size_t h = 1; h <= h_max; ++h) {
    double s = 0.0;
    for (std::size_t i = 0; i + h < x.size(); ++i) s += (x[i + h] - x[i]) * (x[i + h] - x[i]);
    out[h - 1] = s / static_cast<double>(x.size() - h);
  }
  return out;
}

void write_columns_csv(std::ostream& out, const std::string& x_name, const std::string& y_name,
                       std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("write_columns_csv: column lengths differ");
  std::ostringstream buf;
  buf.imbue(std::locale::classic());
  buf << std::setprecision(17) << x_name << ',' << y_name << '\n';
  for (std::size_t i = 0; i < x.size(); ++i) buf << x[i] << ',' << y[i] << '\n';
  out << buf.str();
}

}  // namespace gwm
