#include "nashlab/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace nashlab {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void ReportDocument::set(const std::string& key, const std::string& value) {
  if (key.empty() || key.find(':') != std::string::npos) {
    throw Error("report: invalid key '" + key + "'");
  }
  if (value.find('\n') != std::string::npos) throw Error("report: multi-line value for " + key);
  auto it = index_.find(key);
  if (it != index_.end()) {
    entries_[it->second].second = value;
    return;
  }
  index_.emplace(key, entries_.size());
  entries_.emplace_back(key, value);
}

void ReportDocument::set(const std::string& key, double value) { set(key, format_number(value)); }

void ReportDocument::set(const std::string& key, int value) { set(key, std::to_string(value)); }

void ReportDocument::set(const std::string& key, bool value) {
  set(key, std::string(value ? "true" : "false"));
}

void ReportDocument::set(const std::string& key, std::span<const double> values) {
  std::string s;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) s += ',';
    s += format_number(values[k]);
  }
  set(key, s);
}

void ReportDocument::set(const std::string& key, const std::vector<bool>& values) {
  std::string s;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) s += ',';
    s += values[k] ? '1' : '0';
  }
  set(key, s);
}

bool ReportDocument::contains(const std::string& key) const { return index_.count(key) != 0; }

const std::string& ReportDocument::get(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) throw Error("report: missing key '" + key + "'");
  return entries_[it->second].second;
}

double ReportDocument::get_number(const std::string& key) const {
  const std::string& s = get(key);
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error("report: value of '" + key + "' is not a number: " + s);
  }
  return v;
}

void ReportDocument::write(std::ostream& out) const {
  for (const auto& [k, v] : entries_) out << k << ": " << v << '\n';
}

ReportDocument ReportDocument::parse(std::istream& in, const std::string& origin) {
  ReportDocument doc;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto colon = line.find(": ");
    if (colon == std::string::npos) {
      throw Error(origin + ":" + std::to_string(number) + ": expected 'key: value'");
    }
    doc.set(line.substr(0, colon), line.substr(colon + 2));
  }
  return doc;
}

ReportDocument ReportDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse(in, path);
}

void ReportDocument::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write(out);
}

void write_time_series_csv(std::ostream& out, std::span<const TimeSeriesRow> rows) {
  out << "t,norm_2_to_inf,norm_1_to_2,norm_inf_to_inf,min_entry\n";
  for (const auto& r : rows) {
    out << format_number(r.t) << ',' << format_number(r.norm_2_to_inf) << ','
        << format_number(r.norm_1_to_2) << ',' << format_number(r.norm_inf_to_inf) << ','
        << format_number(r.min_entry) << '\n';
  }
}

void save_time_series_csv(const std::string& path, std::span<const TimeSeriesRow> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write_time_series_csv(out, rows);
}

}  // namespace nashlab
