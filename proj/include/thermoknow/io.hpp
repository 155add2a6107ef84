#pragma once

// Machine-readable output: CSV with round-trip precision and JSON documents.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "thermoknow/manipulation.hpp"

namespace thermoknow {

/// 17 significant digits, '.' separator; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double x);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  CsvWriter& cell(std::string_view text);
  CsvWriter& cell(const char* text) { return cell(std::string_view(text)); }
  CsvWriter& cell(double x);
  CsvWriter& cell(std::size_t n);
  CsvWriter& cell(bool b);
  /// Throws if the row width differs from the header.
  void end_row();

 private:
  std::ostream& out_;
  std::size_t width_;
  std::vector<std::string> row_;
};

nlohmann::json to_json(const RealMatrix& m);
nlohmann::json to_json(const ConcentrationPlan& plan);

}  // namespace thermoknow
