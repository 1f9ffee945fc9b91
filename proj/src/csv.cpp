#include "loclab/csv.hpp"

#include <cstdio>

namespace loclab {

std::string format_number(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_number(long v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%ld", v);
  return buf;
}

std::string format_number(int v) { return format_number(long(v)); }

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
    : out_(path), n_columns_(columns.size()) {
  if (!out_) throw Error("cannot open " + path.string() + " for writing");
  write_row(columns);
}

void CsvWriter::write_row(const std::vector<std::string>& cells) {
  if (cells.size() != n_columns_) throw Error("csv row width mismatch");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

std::string file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string() + " for checksum");
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char c;
  while (in.get(c)) {
    hash ^= std::uint8_t(c);
    hash *= 0x100000001b3ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace loclab
