#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include "pam/errors.hpp"
#include "pam/field.hpp"
#include "pam/field_io.hpp"

namespace {

pam::FieldGrid sample() {
  pam::GridSpec g;
  g.time_points = pam::lattice(0, 3, 0.5);
  g.space_points = {pam::lattice(-1, 2, 0.25), pam::lattice(0, 2, 1.0)};
  return pam::sample_sheet(g, pam::HurstParams::validate(2, 0.65, {0.3, 0.9}), pam::FieldMethod::CirculantEmbedding, 77);
}

void check_same(const pam::FieldGrid& a, const pam::FieldGrid& b) {
  CHECK(a.grid.time_points == b.grid.time_points);
  CHECK(a.grid.space_points == b.grid.space_points);
  CHECK(a.h0 == b.h0);
  CHECK(a.h == b.h);
  CHECK(a.seed == b.seed);
  CHECK(a.method == b.method);
  CHECK(a.values == b.values);
}

pam::ErrorCode read_code(const std::string& bytes) {
  std::istringstream is(bytes);
  try {
    pam::read_field_binary(is);
  } catch (const pam::Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return pam::ErrorCode::InvalidSpec;
}

}  // namespace

TEST_CASE("binary round trip through a stream") {
  auto f = sample();
  std::ostringstream os;
  pam::write_field_binary(os, f);
  const std::string bytes = os.str();
  CHECK(bytes.substr(0, 4) == "PAMF");
  std::istringstream is(bytes);
  check_same(f, pam::read_field_binary(is));
}

TEST_CASE("binary round trip through a file") {
  auto f = sample();
  const auto path = (std::filesystem::temp_directory_path() / "pam_field_io_test.bin").string();
  pam::save_field(path, f);
  check_same(f, pam::load_field(path));
  std::remove(path.c_str());
  CHECK_THROWS_AS(pam::load_field(path), pam::Error);
}

TEST_CASE("corrupt input is rejected") {
  std::ostringstream os;
  pam::write_field_binary(os, sample());
  std::string bytes = os.str();

  std::string bad = bytes;
  bad[0] = 'X';
  CHECK(read_code(bad) == pam::ErrorCode::Io);
  CHECK(read_code(bytes.substr(0, bytes.size() - 3)) == pam::ErrorCode::Io);
  CHECK(read_code("") == pam::ErrorCode::Io);
}

TEST_CASE("csv layout") {
  auto f = sample();
  std::ostringstream os;
  pam::write_field_csv(os, f);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,x1,x2,value");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
  }
  CHECK(rows == f.values.size());
}
