#include "garchfis/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <system_error>

namespace garchfis {

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == delimiter && !quoted) {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(cell);
  return cells;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::size_t find_column(const std::vector<std::string>& header,
                        const std::string& name, const DatasetSpec& spec) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == name) return i;
  }
  fail(Errc::kParseError, spec.path.string() + ": header has no column '" +
                              name + "'");
}

}  // namespace

Dataset ingest(const DatasetSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) fail(Errc::kIo, "cannot open " + spec.path.string());

  std::string line;
  std::size_t line_number = 0;
  std::size_t dropped = 0;

  // header
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) {
      ++dropped;
      continue;
    }
    header = split_line(line, spec.delimiter);
    break;
  }
  if (header.empty()) fail(Errc::kEmptyFile, spec.path.string() + " is empty");

  const std::size_t date_col = find_column(header, spec.date_column, spec);
  const std::size_t close_col = find_column(header, spec.close_column, spec);

  std::vector<double> closes;
  std::vector<std::string> dates;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) {
      ++dropped;
      continue;
    }
    const std::vector<std::string> cells = split_line(line, spec.delimiter);
    if (cells.size() <= std::max(date_col, close_col)) {
      fail(Errc::kParseError, spec.path.string() + " row " +
                                  std::to_string(line_number) +
                                  ": too few columns");
    }
    std::string raw = trim(cells[close_col]);
    if (spec.decimal_comma) {
      std::erase(raw, '.');  // thousands separators
      std::replace(raw.begin(), raw.end(), ',', '.');
    }
    double value = 0.0;
    const auto* begin = raw.data();
    const auto* end = raw.data() + raw.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || raw.empty()) {
      fail(Errc::kParseError, spec.path.string() + " row " +
                                  std::to_string(line_number) + " column '" +
                                  spec.close_column + "': cannot parse '" +
                                  trim(cells[close_col]) + "'");
    }
    if (value <= 0.0) {
      fail(Errc::kNonPositivePrice,
           spec.path.string() + " row " + std::to_string(line_number) +
               ": close must be > 0, got " + raw);
    }
    closes.push_back(value);
    dates.push_back(trim(cells[date_col]));
  }
  if (closes.empty()) {
    fail(Errc::kEmptyFile, spec.path.string() + " has no data rows");
  }

  Eigen::VectorXd values(static_cast<Eigen::Index>(closes.size()));
  for (std::size_t i = 0; i < closes.size(); ++i) {
    values(static_cast<Eigen::Index>(i)) = closes[i];
  }
  return Dataset{PriceSeries(std::move(values)), std::move(dates),
                 closes.size(), dropped};
}

std::string format_double(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace garchfis
