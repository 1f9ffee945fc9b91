#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "loclab/types.hpp"

namespace loclab {

// Deterministic number formatting: shortest round-trip would depend on the
// runtime, so columns are pinned to %.17g.
std::string format_number(Real v);
std::string format_number(long v);
std::string format_number(int v);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns);
  void write_row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  size_t n_columns_;
};

// FNV-1a over the file bytes, as a 16-digit hex string.
std::string file_checksum(const std::filesystem::path& path);

}  // namespace loclab
