#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace splap {

/// Serialize a double with 17 significant digits: enough to round-trip any
/// IEEE-754 binary64 value, so identical computations give identical files.
inline std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/**
 * Minimal CSV emitter: one header row, then data rows.  All numeric cells go
 * through format_full so that output files are a faithful byte-level function
 * of the computed values (the determinism contract for `verify` and `sweep`).
 */
class CsvWriter {
public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
    write_row_raw(header);
  }

  void write_row(const std::vector<std::string>& cells) { write_row_raw(cells); }

  /// Convenience for all-numeric rows.
  void write_numeric_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_full(v));
    write_row_raw(cells);
  }

private:
  void write_row_raw(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n'; // fixed newline (binary mode) keeps files identical across platforms
  }

  std::ofstream out_;
};

} // namespace splap
