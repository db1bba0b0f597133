#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relspec/funcspace.hpp"

namespace relspec {

struct DailyReading {
  int year = 0;
  int month = 0;
  int day = 0;
  std::optional<double> value;  // empty field = missing
  int line = 0;
};

/// Parses a `date,value` CSV (ISO-8601 dates). Every malformed row is
/// reported with its line number in a single error.
std::vector<DailyReading> read_daily_csv(const std::filesystem::path& path);
std::vector<DailyReading> parse_daily_csv(const std::string& text,
                                          const std::string& source = "<memory>");

/// Day index 1..365 on the fixed no-leap calendar; nullopt for Feb 29.
std::optional<int> day_of_year_365(int month, int day);

struct YearlyCurves {
  FunctionalSample coeffs;          // one row per retained year
  std::vector<int> years;           // ascending
  std::vector<int> excluded_years;  // fewer than min_days valid readings
};

/// Groups readings by calendar year, drops Feb 29, places day d at node
/// (d - 1/2) / 365 and projects each year with at least `min_days` valid
/// readings onto the Fourier basis of the given order.
YearlyCurves curves_from_readings(std::span<const DailyReading> readings, int order,
                                  int min_days = 360);
YearlyCurves ingest_daily(const std::filesystem::path& path, int order, int min_days = 360);

/// Writes one reading per calendar day for consecutive years starting at
/// `first_year`, synthesizing year n from coefficient row n (plus `offset`).
/// Feb 29 repeats the Feb 28 value.
void write_daily_csv(const std::filesystem::path& path, const FunctionalSample& coeffs,
                     int first_year, double offset = 0.0);

/// Coefficient sample as CSV: header n,a1..aT.
void write_sample_csv(const std::filesystem::path& path, const FunctionalSample& coeffs);

}  // namespace relspec
