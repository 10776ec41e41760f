#include "altgdmin/core/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "altgdmin/errors.hpp"

namespace altgdmin {

namespace {

constexpr char kMagic[4] = {'A', 'L', 'T', 'M'};

void put_u32le(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

std::uint32_t get_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_f64le(std::string& out, double v) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

double get_f64le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i)
    bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_matrix_file(const std::string& path, const DenseMatrix& m) {
  std::string out;
  out.reserve(16 + 8 * m.size());
  out.append(kMagic, 4);
  put_u32le(out, kMatrixFormatVersion);
  put_u32le(out, static_cast<std::uint32_t>(m.rows()));
  put_u32le(out, static_cast<std::uint32_t>(m.cols()));
  for (std::size_t i = 0; i < m.size(); ++i) put_f64le(out, m.data()[i]);
  write_text_file(path, out);
}

DenseMatrix read_matrix_file(const std::string& path) {
  const std::string raw = read_text_file(path);
  if (raw.size() < 16) throw IoError("matrix file too short: " + path);
  const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
  if (std::memcmp(p, kMagic, 4) != 0)
    throw IoError("bad magic in matrix file: " + path);
  const std::uint32_t version = get_u32le(p + 4);
  if (version != kMatrixFormatVersion)
    throw IoError("unsupported matrix file version");
  const std::uint32_t rows = get_u32le(p + 8);
  const std::uint32_t cols = get_u32le(p + 12);
  const std::size_t want = 16 + 8ull * rows * cols;
  if (raw.size() != want) throw IoError("matrix file size mismatch: " + path);
  std::vector<double> entries(static_cast<std::size_t>(rows) * cols);
  for (std::size_t i = 0; i < entries.size(); ++i)
    entries[i] = get_f64le(p + 16 + 8 * i);
  try {
    return DenseMatrix(rows, cols, std::move(entries));
  } catch (const Error& e) {
    throw IoError(std::string("invalid matrix payload: ") + e.what());
  }
}

CsvWriter::CsvWriter(std::string header) : buf_(std::move(header)) {
  buf_.push_back('\n');
}

void CsvWriter::add_cell(const std::string& s) {
  if (row_started_) buf_.push_back(',');
  buf_ += s;
  row_started_ = true;
}

void CsvWriter::add_cell(double v) { add_cell(format_double(v)); }

void CsvWriter::add_cell(std::uint64_t v) { add_cell(std::to_string(v)); }

void CsvWriter::add_cell(std::int64_t v) { add_cell(std::to_string(v)); }

void CsvWriter::end_row() {
  buf_.push_back('\n');
  row_started_ = false;
}

std::string CsvWriter::format_double(double v) {
  char tmp[40];
  std::snprintf(tmp, sizeof(tmp), "%.17g", v);
  return tmp;
}

void CsvWriter::write_to(const std::string& path) const {
  write_text_file(path, buf_);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for write: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for read: " + path);
  std::string out((std::istreambuf_iterator<char>(f)),
                  std::istreambuf_iterator<char>());
  if (f.bad()) throw IoError("read failed: " + path);
  return out;
}

}  // namespace altgdmin
