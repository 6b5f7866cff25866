#include "gwm/series.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <Eigen/Dense>
#include <openssl/evp.h>

#include "gwm/errors.hpp"

namespace gwm {
namespace {

constexpr std::array<int, 12> kMonthDays{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int day_of_year(int month, int dom) {
  int d = dom;
  for (int m = 1; m < month; ++m) d += kMonthDays[m - 1];
  return d;
}

double parse_number(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw DataError("not a number: '" + std::string(tok) + "'", line);
  }
  return v;
}

int parse_int(std::string_view tok, std::size_t line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw DataError("not an integer: '" + std::string(tok) + "'", line);
  }
  return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

}  // namespace

std::size_t wind_station_column(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  for (std::size_t i = 0; i < kWindStations.size(); ++i) {
    if (upper == kWindStations[i]) return i;
  }
  int idx = 0;
  const auto [ptr, ec] = std::from_chars(upper.data(), upper.data() + upper.size(), idx);
  if (ec == std::errc() && ptr == upper.data() + upper.size() && idx >= 1 && idx <= 12) {
    return static_cast<std::size_t>(idx - 1);
  }
  throw DomainError("unknown station '" + std::string(name) + "' (use RPT..MAL or 1..12)");
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return hex.str();
}

WindData parse_wind(std::istream& in, const WindQuery& q) {
  if (q.station >= kWindStations.size()) throw DomainError("station column out of range");
  if (q.first_year > q.last_year) throw DomainError("empty year window");
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  WindData out;
  out.sha256 = sha256_hex(content);
  std::istringstream lines(content);
  std::string line;
  std::size_t lineno = 0;
  int prev_year = 0, prev_day = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != 15) {
      throw DataError("expected 15 fields (YY MM DD + 12 stations), got " + std::to_string(tok.size()), lineno);
    }
    const int yy = parse_int(tok[0], lineno);
    const int mm = parse_int(tok[1], lineno);
    const int dd = parse_int(tok[2], lineno);
    if (yy < 0 || yy > 99) throw DataError("bad two-digit year", lineno);
    const int year = 1900 + yy;
    if (mm < 1 || mm > 12) throw DataError("bad month", lineno);
    const int month_len = kMonthDays[mm - 1] + (mm == 2 && is_leap(year) ? 1 : 0);
    if (dd < 1 || dd > month_len) throw DataError("bad day of month", lineno);
    double speed = 0.0;
    for (std::size_t c = 0; c < 12; ++c) {
      const double v = parse_number(tok[3 + c], lineno);
      if (v < 0.0 || v > 80.0) throw DataError("speed out of [0, 80] knots", lineno);
      if (c == q.station) speed = v;
    }
    ++out.rows_read;
    if (year < q.first_year || year > q.last_year) continue;
    if (mm == 2 && dd == 29) {
      ++out.leap_days_dropped;
      continue;
    }
    const int doy = day_of_year(mm, dd);
    if (prev_year != 0) {
      const bool next = (year == prev_year && doy == prev_day + 1) ||
                        (year == prev_year + 1 && doy == 1 && prev_day == 365);
      if (!next) throw DataError("calendar gap or disorder before this row", lineno);
    } else if (doy != 1 || year != q.first_year) {
      throw DataError("series must start on 1 January " + std::to_string(q.first_year), lineno);
    }
    prev_year = year;
    prev_day = doy;
    out.series.values.push_back(speed);
    out.series.year.push_back(year);
    out.series.day.push_back(doy);
  }
  if (prev_year != q.last_year || prev_day != 365) {
    throw DataError("file does not cover " + std::to_string(q.first_year) + "-" + std::to_string(q.last_year) +
                    " through 31 December");
  }
  return out;
}

WindData load_wind(const std::string& path, const WindQuery& q) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return parse_wind(in, q);
}

std::vector<double> load_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    if (tok.size() != 1) throw DataError("expected one value per line", lineno);
    out.push_back(parse_number(tok[0], lineno));
  }
  return out;
}

double SeasonalModel::operator()(int day) const {
  const double x = abscissa(day);
  double v = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) v = v * x + *it;
  return v;
}

Deseasonalized deseasonalize(const DailySeries& d) {
  if (d.values.size() != d.day.size()) throw DomainError("deseasonalize: calendar and values differ in length");
  std::array<double, 365> sum{};
  std::array<int, 365> count{};
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.day[i] < 1 || d.day[i] > 365) throw DataError("day of year out of 1..365");
    if (d.values[i] < 0.0) throw DataError("negative speed");
    sum[d.day[i] - 1] += std::sqrt(d.values[i]);
    ++count[d.day[i] - 1];
  }
  if (*std::min_element(count.begin(), count.end()) < 2) {
    throw DataError("deseasonalize needs at least two full years of daily data");
  }

  Deseasonalized out;
  Eigen::MatrixXd a(365, 9);
  Eigen::VectorXd b(365);
  for (int day = 1; day <= 365; ++day) {
    out.day_means[day - 1] = sum[day - 1] / count[day - 1];
    b(day - 1) = out.day_means[day - 1];
    double p = 1.0;
    for (int k = 0; k < 9; ++k, p *= SeasonalModel::abscissa(day)) a(day - 1, k) = p;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() != 9) throw Error("deseasonalize: singular seasonal regression");
  const Eigen::VectorXd coef = qr.solve(b);
  for (int k = 0; k < 9; ++k) out.seasonal.coefficients[k] = coef(k);

  auto& v = out.velocity.values;
  v.resize(d.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    v[i] = std::sqrt(d.values[i]) - out.seasonal(d.day[i]);
    mean += v[i];
  }
  mean /= static_cast<double>(v.size());
  for (double& x : v) x -= mean;
  out.velocity.removed_mean = mean;
  return out;
}

}  // namespace gwm
