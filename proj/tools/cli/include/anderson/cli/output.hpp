#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <anderson/analysis.hpp>

namespace anderson::cli {

/// CSV file whose first line is "# anderson_lab <kind> v<version>".
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::string_view kind, int version = 1);

  void row(const std::vector<std::string>& cells);

  /// Shortest round-trip text for v; empty for NaN.
  static std::string num(double v);

 private:
  std::ofstream out_;
};

namespace svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Panel {
  std::string title;
  std::vector<Series> series;
  bool log_y = false;
  /// When set, the panel is drawn as bars from this histogram instead of lines.
  const Histogram* histogram = nullptr;
};

/// Panels stacked vertically. Non-finite points are skipped.
std::string render(const std::vector<Panel>& panels);

void write(const std::filesystem::path& path, const std::vector<Panel>& panels);

}  // namespace svg

}  // namespace anderson::cli
