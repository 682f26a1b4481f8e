#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace heavytail {

enum class SampleKind { revenues, spendings, bidder_counts, synthetic };

std::string_view to_string(SampleKind kind) noexcept;

/// A non-empty series of strictly positive finite magnitudes.
class Sample {
 public:
  /// Throws Error(empty_input) for an empty series and Error(domain) for any
  /// non-positive or non-finite value.
  Sample(std::vector<double> values, SampleKind kind, std::string unit = {});

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  SampleKind kind() const noexcept { return kind_; }
  const std::string& unit() const noexcept { return unit_; }

 private:
  std::vector<double> values_;
  SampleKind kind_;
  std::string unit_;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// One value per line.
void write_values(std::ostream& out, std::span<const double> values);

/// Reads one value per line; blank lines and lines starting with '#' are
/// skipped. Throws Error(io) on any other unparsable line.
std::vector<double> read_values(std::istream& in);

/// Two tab-separated numeric columns under a one-line header.
void write_columns(std::ostream& out, std::string_view x_name,
                   std::string_view y_name, std::span<const double> x,
                   std::span<const double> y);

}  // namespace heavytail
