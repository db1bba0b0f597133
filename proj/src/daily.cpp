#include "relspec/daily.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "relspec/error.hpp"

namespace relspec {

namespace {

constexpr int kDaysPerYear = 365;
constexpr int kCumulativeDays[12] = {0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_int(std::string_view s, int& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_date(const std::string& s, int& y, int& m, int& d) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  if (!parse_int(std::string_view(s).substr(0, 4), y) ||
      !parse_int(std::string_view(s).substr(5, 2), m) ||
      !parse_int(std::string_view(s).substr(8, 2), d)) {
    return false;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  return ymd.ok();
}

}  // namespace

std::optional<int> day_of_year_365(int month, int day) {
  if (month == 2 && day == 29) return std::nullopt;
  return kCumulativeDays[month - 1] + day;
}

std::vector<DailyReading> parse_daily_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::vector<DailyReading> out;
  std::vector<int> bad_lines;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const std::string row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (row != "date,value") {
        throw Error(ErrorCode::kParse,
                    source + ":" + std::to_string(lineno) + ": expected header 'date,value'");
      }
      continue;
    }
    const auto comma = row.find(',');
    DailyReading r;
    r.line = lineno;
    if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos ||
        !parse_date(trim(row.substr(0, comma)), r.year, r.month, r.day)) {
      bad_lines.push_back(lineno);
      continue;
    }
    const std::string value = trim(row.substr(comma + 1));
    if (!value.empty()) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v)) {
        bad_lines.push_back(lineno);
        continue;
      }
      r.value = v;
    }
    out.push_back(r);
  }
  if (!header_seen) throw Error(ErrorCode::kParse, source + ": empty file");
  if (!bad_lines.empty()) {
    std::string msg = source + ": unparseable rows at lines";
    for (std::size_t i = 0; i < bad_lines.size() && i < 20; ++i) {
      msg += " " + std::to_string(bad_lines[i]);
    }
    if (bad_lines.size() > 20) msg += " ...";
    throw Error(ErrorCode::kParse, msg);
  }
  return out;
}

std::vector<DailyReading> read_daily_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_daily_csv(buf.str(), path.string());
}

YearlyCurves curves_from_readings(std::span<const DailyReading> readings, int order,
                                  int min_days) {
  // year -> day index -> value
  std::map<int, std::map<int, double>> by_year;
  std::set<int> seen_years;
  std::map<std::pair<int, int>, int> seen_dates;
  for (const auto& r : readings) {
    seen_years.insert(r.year);
    const auto day = day_of_year_365(r.month, r.day);
    const int key = day ? *day : 0;
    const auto [it, inserted] = seen_dates.emplace(std::pair{r.year, r.month * 100 + r.day}, r.line);
    if (!inserted) {
      throw Error(ErrorCode::kParse, "duplicate date at lines " + std::to_string(it->second) +
                                         " and " + std::to_string(r.line));
    }
    if (!day || !r.value) continue;
    by_year[r.year][key] = *r.value;
  }

  const FourierBasis basis = fourier_basis(order, std::max(2, 2 * (order - 1)));
  YearlyCurves out;
  std::vector<Eigen::VectorXd> rows;
  const int needed = std::max(min_days, order);
  for (int year : seen_years) {
    const auto it = by_year.find(year);
    const int valid = it == by_year.end() ? 0 : static_cast<int>(it->second.size());
    if (valid < needed) {
      out.excluded_years.push_back(year);
      continue;
    }
    std::vector<double> nodes;
    std::vector<double> values;
    nodes.reserve(valid);
    values.reserve(valid);
    for (const auto& [day, v] : it->second) {
      nodes.push_back((day - 0.5) / kDaysPerYear);
      values.push_back(v);
    }
    rows.push_back(project(values, nodes, basis));
    out.years.push_back(year);
  }
  if (rows.empty()) throw Error(ErrorCode::kInvalidArgument, "no year has enough valid readings");
  Eigen::MatrixXd coeffs(static_cast<Eigen::Index>(rows.size()), order);
  for (std::size_t i = 0; i < rows.size(); ++i) coeffs.row(static_cast<Eigen::Index>(i)) = rows[i];
  out.coeffs = FunctionalSample::coefficients(std::move(coeffs));
  return out;
}

YearlyCurves ingest_daily(const std::filesystem::path& path, int order, int min_days) {
  const auto readings = read_daily_csv(path);
  return curves_from_readings(readings, order, min_days);
}

void write_daily_csv(const std::filesystem::path& path, const FunctionalSample& coeffs,
                     int first_year, double offset) {
  if (coeffs.rep != Representation::kCoefficient) {
    throw Error(ErrorCode::kInvalidArgument, "daily export needs coefficient rows");
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << "date,value\n" << std::setprecision(15);
  const int order = coeffs.dimension();
  for (int n = 0; n < coeffs.size(); ++n) {
    const int year = first_year + n;
    double feb28 = 0.0;
    for (int month = 1; month <= 12; ++month) {
      const int days = static_cast<int>(static_cast<unsigned>(
          std::chrono::year_month_day_last{std::chrono::year{year},
                                           std::chrono::month_day_last{
                                               std::chrono::month{static_cast<unsigned>(month)}}}
              .day()));
      for (int day = 1; day <= days; ++day) {
        double value = feb28;
        if (const auto d = day_of_year_365(month, day)) {
          const double x = (*d - 0.5) / kDaysPerYear;
          value = offset;
          for (int k = 0; k < order; ++k) value += coeffs.rows(n, k) * fourier_value(order, k, x);
          if (month == 2 && day == 28) feb28 = value;
        }
        char date[16];
        std::snprintf(date, sizeof date, "%04d-%02d-%02d", year, month, day);
        out << date << ',' << value << '\n';
      }
    }
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

void write_sample_csv(const std::filesystem::path& path, const FunctionalSample& coeffs) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << "n";
  for (int k = 1; k <= coeffs.dimension(); ++k) out << ",a" << k;
  out << '\n' << std::setprecision(17);
  for (int n = 0; n < coeffs.size(); ++n) {
    out << n + 1;
    for (int k = 0; k < coeffs.dimension(); ++k) out << ',' << coeffs.rows(n, k);
    out << '\n';
  }
}

}  // namespace relspec
