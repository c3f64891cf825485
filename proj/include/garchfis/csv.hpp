#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "garchfis/series.hpp"

namespace garchfis {

/// Where and how to read a close-price CSV.
struct DatasetSpec {
  std::filesystem::path path;
  std::string date_column = "date";
  std::string close_column = "close";
  char delimiter = ',';
  bool decimal_comma = false;  // parse "1.234,56"-style decimals
};

struct Dataset {
  PriceSeries prices;
  std::vector<std::string> dates;  // carried verbatim into reports
  std::size_t rows_read = 0;       // data rows parsed
  std::size_t rows_dropped = 0;    // blank lines skipped
};

/// Reads the file into a gapless, file-ordered price series. Parse problems
/// name the physical line and column; non-positive closes are rejected.
Dataset ingest(const DatasetSpec& spec);

/// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double value);

}  // namespace garchfis
