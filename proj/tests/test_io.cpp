#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "altgdmin/core/io.hpp"
#include "support/test_support.hpp"

using namespace altgdmin;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("altgdmin_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("matrix files round-trip bitwise") {
  TempDir dir;
  const DenseMatrix m = test::random_matrix(7, 5, 123);
  const std::string path = dir.file("m.mat");
  write_matrix_file(path, m);
  const DenseMatrix back = read_matrix_file(path);
  CHECK(back == m);
}

TEST_CASE("matrix file header layout is pinned") {
  TempDir dir;
  DenseMatrix m(2, 3);
  m(0, 0) = 1.0;
  const std::string path = dir.file("h.mat");
  write_matrix_file(path, m);
  const std::string raw = read_text_file(path);
  REQUIRE(raw.size() == 16 + 8 * 6);
  CHECK(raw.substr(0, 4) == "ALTM");
  // version 1, rows 2, cols 3, little-endian u32s.
  const auto u32 = [&](std::size_t off) {
    return static_cast<unsigned char>(raw[off]) |
           (static_cast<unsigned char>(raw[off + 1]) << 8) |
           (static_cast<unsigned char>(raw[off + 2]) << 16) |
           (static_cast<unsigned char>(raw[off + 3]) << 24);
  };
  CHECK(u32(4) == 1);
  CHECK(u32(8) == 2);
  CHECK(u32(12) == 3);
  // First payload f64 is 1.0 => little-endian bytes 00..f0 3f.
  CHECK(static_cast<unsigned char>(raw[16 + 6]) == 0xF0);
  CHECK(static_cast<unsigned char>(raw[16 + 7]) == 0x3F);
}

TEST_CASE("matrix reader rejects malformed files") {
  TempDir dir;
  const std::string path = dir.file("bad.mat");
  write_text_file(path, "BOGUS...........");
  CHECK_THROWS_AS(read_matrix_file(path), IoError);
  write_text_file(path, "ALT");  // too short
  CHECK_THROWS_AS(read_matrix_file(path), IoError);
  const DenseMatrix m = test::random_matrix(3, 3, 9);
  write_matrix_file(path, m);
  std::string truncated = read_text_file(path);
  truncated.resize(truncated.size() - 5);
  write_text_file(path, truncated);
  CHECK_THROWS_AS(read_matrix_file(path), IoError);
  CHECK_THROWS_AS(read_matrix_file(dir.file("missing.mat")), IoError);
}

TEST_CASE("csv writer formatting is byte-stable") {
  CsvWriter w("a,b,c");
  w.add_cell(1.5);
  w.add_cell(std::uint64_t{42});
  w.add_cell(std::string("x"));
  w.end_row();
  w.add_cell(0.1);
  w.add_cell(std::numeric_limits<double>::quiet_NaN());
  w.add_cell(std::string());
  w.end_row();
  CHECK(w.str() ==
        "a,b,c\n1.5,42,x\n0.10000000000000001,nan,\n");
  // Round-trip exactness of the double format.
  CHECK(std::stod(CsvWriter::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

}  // TEST_SUITE
