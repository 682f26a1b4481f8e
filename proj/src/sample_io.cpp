#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "heavytail/error.hpp"
#include "heavytail/sample.hpp"

namespace heavytail {

std::string_view to_string(SampleKind kind) noexcept {
  switch (kind) {
    case SampleKind::revenues: return "revenues";
    case SampleKind::spendings: return "spendings";
    case SampleKind::bidder_counts: return "bidder_counts";
    case SampleKind::synthetic: return "synthetic";
  }
  return "unknown";
}

Sample::Sample(std::vector<double> values, SampleKind kind, std::string unit)
    : values_(std::move(values)), kind_(kind), unit_(std::move(unit)) {
  if (values_.empty()) {
    fail(ErrorCode::empty_input,
         "sample '" + std::string(to_string(kind_)) + "' has no values");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
      fail(ErrorCode::domain, "sample value #" + std::to_string(i) + " (" +
                                  format_double(values_[i]) +
                                  ") is not a positive finite number");
    }
  }
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_values(std::ostream& out, std::span<const double> values) {
  for (double v : values) out << format_double(v) << '\n';
}

std::vector<double> read_values(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    if (*begin == '+') ++begin;
    double v = 0.0;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
      fail(ErrorCode::io, "line " + std::to_string(line_no) +
                              ": not a number: '" + line + "'");
    }
    values.push_back(v);
  }
  return values;
}

void write_columns(std::ostream& out, std::string_view x_name,
                   std::string_view y_name, std::span<const double> x,
                   std::span<const double> y) {
  if (x.size() != y.size()) {
    fail(ErrorCode::domain, "column lengths differ");
  }
  out << x_name << '\t' << y_name << '\n';
  for (std::size_t i = 0; i < x.size(); ++i) {
    out << format_double(x[i]) << '\t' << format_double(y[i]) << '\n';
  }
}

}  // namespace heavytail
