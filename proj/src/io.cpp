#include "thermoknow/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "thermoknow/error.hpp"

namespace thermoknow {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), width_(header.size()) {
  row_ = std::move(header);
  end_row();
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  row_.emplace_back(text);
  return *this;
}

CsvWriter& CsvWriter::cell(double x) { return cell(format_number(x)); }
CsvWriter& CsvWriter::cell(std::size_t n) { return cell(std::to_string(n)); }
CsvWriter& CsvWriter::cell(bool b) { return cell(std::string_view(b ? "true" : "false")); }

void CsvWriter::end_row() {
  if (row_.size() != width_) throw InvalidArgument("csv row width does not match header");
  for (std::size_t i = 0; i < row_.size(); ++i) {
    if (i) out_ << ',';
    const bool quote = row_[i].find(',') != std::string::npos;
    if (quote) out_ << '"' << row_[i] << '"';
    else out_ << row_[i];
  }
  out_ << '\n';
  row_.clear();
}

nlohmann::json to_json(const RealMatrix& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json to_json(const ConcentrationPlan& plan) {
  nlohmann::json j;
  j["feasible"] = plan.feasible;
  j["copies"] = plan.copies;
  j["d"] = plan.d;
  j["target"] = plan.target.probs().entries();
  j["ordered_marginal"] = plan.ordered_marginal.entries();
  j["transfer"] = plan.transfer ? to_json(plan.transfer->entries) : nlohmann::json(nullptr);
  j["witness"] = plan.transfer && plan.transfer->witness ? to_json(*plan.transfer->witness) : nlohmann::json(nullptr);
  return j;
}

}  // namespace thermoknow
