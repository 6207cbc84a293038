#pragma once

#include "nashlab/types.hpp"

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nashlab {

/// Decimal text with 17 significant digits.
std::string format_number(double value);

/// Ordered "key: value" document. Arrays are comma-separated numbers.
class ReportDocument {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, int value);
  void set(const std::string& key, bool value);
  void set(const std::string& key, std::span<const double> values);
  void set(const std::string& key, const std::vector<bool>& values);

  [[nodiscard]] bool contains(const std::string& key) const;
  [[nodiscard]] const std::string& get(const std::string& key) const;
  [[nodiscard]] double get_number(const std::string& key) const;
  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  void write(std::ostream& out) const;
  static ReportDocument parse(std::istream& in, const std::string& origin);
  static ReportDocument load(const std::string& path);
  void save(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::map<std::string, std::size_t> index_;
};

/// One row of a per-check time series.
struct TimeSeriesRow {
  double t = 0.0;
  double norm_2_to_inf = 0.0;
  double norm_1_to_2 = 0.0;
  double norm_inf_to_inf = 0.0;
  double min_entry = 0.0;
};

/// Header "t,norm_2_to_inf,norm_1_to_2,norm_inf_to_inf,min_entry".
void write_time_series_csv(std::ostream& out, std::span<const TimeSeriesRow> rows);
void save_time_series_csv(const std::string& path, std::span<const TimeSeriesRow> rows);

}  // namespace nashlab
