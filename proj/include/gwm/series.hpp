#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gwm {

/// Daily observations with a (year, day-of-year) calendar. Day-of-year runs
/// 1..365 in every year: Feb 29 is dropped and later days are not shifted.
struct DailySeries {
  std::vector<double> values;
  std::vector<int> year;
  std::vector<int> day;

  std::size_t size() const { return values.size(); }
};

/// Station columns of the Irish wind file, in file order.
inline constexpr std::array<std::string_view, 12> kWindStations{
    "RPT", "VAL", "ROS", "KIL", "SHA", "BIR", "DUB", "CLA", "MUL", "CLO", "BEL", "MAL"};

/// 0-based column of a station given by code (case-insensitive) or by 1-based
/// index ("1".."12"). Throws DomainError for anything else.
std::size_t wind_station_column(std::string_view name_or_index);

struct WindQuery {
  std::size_t station = 0;  // 0 = Roche's Point
  int first_year = 1973;
  int last_year = 1978;
};

struct WindData {
  DailySeries series;
  std::string sha256;         // hex digest of the whole file
  std::size_t rows_read = 0;  // data rows in the file, all years
  std::size_t leap_days_dropped = 0;
};

/// Strict parser: "YY MM DD" then 12 speeds in [0, 80] knots per row. Rows
/// in the year window must cover every day without gaps.
WindData parse_wind(std::istream& in, const WindQuery& q = {});
WindData load_wind(const std::string& path, const WindQuery& q = {});

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// One value per line (blank lines and '#' comments ignored).
std::vector<double> load_column(const std::string& path);

/// Degree-8 polynomial in x = 2(day-1)/364 - 1, monomial coefficients.
struct SeasonalModel {
  std::array<double, 9> coefficients{};

  static double abscissa(int day) { return 2.0 * (day - 1) / 364.0 - 1.0; }
  double operator()(int day) const;
};

struct VelocitySeries {
  std::vector<double> values;
  double removed_mean = 0.0;  // mean subtracted after the seasonal fit
};

struct Deseasonalized {
  VelocitySeries velocity;
  SeasonalModel seasonal;
  std::array<double, 365> day_means{};  // mean of sqrt(speed) per day
};

/// sqrt(speed) minus the fitted seasonal curve, then centered.
Deseasonalized deseasonalize(const DailySeries& d);

}  // namespace gwm
