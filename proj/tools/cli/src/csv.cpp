#include <charconv>
#include <cmath>

#include <anderson/error.hpp>

#include "anderson/cli/output.hpp"

namespace anderson::cli {

CsvWriter::CsvWriter(const std::filesystem::path& path, std::string_view kind, int version)
    : out_(path) {
  if (!out_) throw Error(ErrorKind::ConfigError, "cannot write " + path.string());
  out_ << "# anderson_lab " << kind << " v" << version << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

std::string CsvWriter::num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace anderson::cli
