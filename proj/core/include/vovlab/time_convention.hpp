#pragma once

#include "vovlab/errors.hpp"

namespace vov {

// All model quantities are expressed in years. The default trading year has
// 252 days of 6 hours each, so one day is 1/252 and one year is 5,443,200
// seconds. Calendar conversions that depend on the day length go through
// YearLayout so that markets with a different trading day (e.g. 6.5 hours)
// can reuse the same machinery.

inline constexpr double kTradingDaysPerYear = 252.0;
inline constexpr double kTradingHoursPerDay = 6.0;
inline constexpr double kSecondsPerYear =
    kTradingDaysPerYear * kTradingHoursPerDay * 3600.0;  // 5,443,200
inline constexpr double kDay = 1.0 / kTradingDaysPerYear;
inline constexpr double kMinute = kDay / (kTradingHoursPerDay * 60.0);
inline constexpr double kSecond = kDay / (kTradingHoursPerDay * 3600.0);

inline constexpr double years_from_days(double d) { return d * kDay; }
inline constexpr double years_from_minutes(double m) { return m * kMinute; }
inline constexpr double years_from_seconds(double s) { return s * kSecond; }
inline constexpr double seconds_from_years(double y) { return y * kSecondsPerYear; }
inline constexpr double minutes_from_years(double y) { return y / kMinute; }

// Trading-calendar layout: days per year and hours per trading day.
// One trading day is always 1/days_per_year of a year regardless of the
// session length; the session length only affects second/minute conversions.
struct YearLayout {
  int days_per_year = 252;
  double hours_per_day = 6.0;

  void validate() const {
    if (days_per_year <= 0) throw config_error("YearLayout: days_per_year must be positive");
    if (!(hours_per_day > 0.0)) throw config_error("YearLayout: hours_per_day must be positive");
  }
  double day_years() const { return 1.0 / static_cast<double>(days_per_year); }
  double seconds_per_year() const { return days_per_year * hours_per_day * 3600.0; }
  double seconds_per_day() const { return hours_per_day * 3600.0; }
  double years_from_sec(double s) const { return s / seconds_per_year(); }
  double sec_from_years(double y) const { return y * seconds_per_year(); }
  // Number of mesh points per trading day for a mesh given in seconds.
  int steps_per_day_for_mesh_seconds(double mesh_s) const {
    if (!(mesh_s > 0.0)) throw config_error("mesh seconds must be positive");
    double q = seconds_per_day() / mesh_s;
    int n = static_cast<int>(q + 0.5);
    return n;
  }
};

}  // namespace vov
