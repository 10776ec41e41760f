#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "altgdmin/core/matrix.hpp"

namespace altgdmin {

// Binary matrix file: 16-byte header (magic "ALTM", u32 version, u32 rows,
// u32 cols, all little-endian) followed by rows*cols IEEE-754 f64
// little-endian values in row-major order.

inline constexpr std::uint32_t kMatrixFormatVersion = 1;

void write_matrix_file(const std::string& path, const DenseMatrix& m);
DenseMatrix read_matrix_file(const std::string& path);

/// CSV writer with pinned formatting: UTF-8, LF endings, doubles rendered
/// with "%.17g" (round-trip exact), so identical values give identical bytes.
class CsvWriter {
 public:
  explicit CsvWriter(std::string header);

  void add_cell(const std::string& s);
  void add_cell(double v);
  void add_cell(std::uint64_t v);
  void add_cell(std::int64_t v);
  void end_row();

  const std::string& str() const { return buf_; }
  void write_to(const std::string& path) const;

  static std::string format_double(double v);

 private:
  std::string buf_;
  bool row_started_ = false;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace altgdmin
