#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ntucker/error.hpp"
#include "ntucker/io.hpp"
#include "ntucker/random.hpp"

using namespace ntucker;

namespace {

ErrorCode code_of(const std::string& text, bool tucker) {
  std::istringstream is(text);
  try {
    if (tucker)
      read_tucker(is);
    else
      read_dense(is);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised for: " << text);
  return ErrorCode::invalid_argument;
}

std::string message_of(const std::string& text) {
  std::istringstream is(text);
  try {
    read_dense(is);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ntucker_io_" + name);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("dense round trip is bitwise exact") {
  Rng rng(211);
  DenseTensor x = random_tensor(rng, Shape{3, 4, 2});
  x[0] = Scalar(1.0 / 3.0, -2e-300);
  x[1] = Scalar(6.02214076e23, 0.1);
  std::stringstream ss;
  write_dense(ss, x);
  const DenseTensor y = read_dense(ss);
  CHECK(y.shape() == x.shape());
  CHECK(y.vec() == x.vec());
}

TEST_CASE("tucker round trip is bitwise exact") {
  Rng rng(223);
  const TuckerTensor y = random_tucker(rng, Shape{5, 4, 6}, std::vector<Index>{2, 3, 2});
  const auto path = temp_file("roundtrip.tkf");
  save_tucker(y, path);
  const TuckerTensor z = load_tucker(path);
  REQUIRE(z.factors.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(z.factors[i] == y.factors[i]);
  CHECK(z.core.shape() == y.core.shape());
  CHECK(z.core.vec() == y.core.vec());
  CHECK(sniff_kind(path) == FileKind::tucker);
  std::filesystem::remove(path);
}

TEST_CASE("a hand-written file follows the documented index order") {
  const std::string text = "DTF1 2 2 2\n1 0\n2 0\n3 0\n4 0.5\n";
  std::istringstream is(text);
  const DenseTensor x = read_dense(is);
  CHECK(x.at({0, 0}) == Scalar(1, 0));
  CHECK(x.at({1, 0}) == Scalar(2, 0));
  CHECK(x.at({0, 1}) == Scalar(3, 0));
  CHECK(x.at({1, 1}) == Scalar(4, 0.5));
}

TEST_CASE("tucker file layout: factors column-major, then the core") {
  const std::string text = "TKF1 2 2 1 1 1\n1 0\n0 0\n1 0\n2 0\n";
  std::istringstream is(text);
  const TuckerTensor y = read_tucker(is);
  CHECK(y.factors[0](0, 0) == Scalar(1));
  CHECK(y.factors[0](1, 0) == Scalar(0));
  CHECK(y.factors[1](0, 0) == Scalar(1));
  CHECK(y.core[0] == Scalar(2));
}

TEST_CASE("diagnostics are distinct") {
  std::string seven;
  for (int i = 0; i < 7; ++i) seven += "1 0\n";
  CHECK(code_of("DTF1 3 2 2 2\n" + seven, false) == ErrorCode::format);
  CHECK(message_of("DTF1 3 2 2 2\n" + seven).find("truncated data") != std::string::npos);
  CHECK(message_of("DTF1 3 2 2 2\n" + seven).find("expected 8 values, found 7") != std::string::npos);
  CHECK(message_of("DTF2 1 1\n1 0\n").find("malformed header") != std::string::npos);
  CHECK(code_of("DTF2 1 1\n1 0\n", false) == ErrorCode::format);
  CHECK(code_of("DTF1 x\n", false) == ErrorCode::format);
  CHECK(code_of("", false) == ErrorCode::format);
  CHECK(code_of("DTF1 3 2 2\n1 0\n", false) == ErrorCode::shape_mismatch);
  CHECK(message_of("DTF1 3 2 2\n1 0\n").find("extent mismatch") != std::string::npos);
  CHECK(code_of("DTF1 1 0\n", false) == ErrorCode::shape_mismatch);
  CHECK(code_of("DTF1 1 1\n1 0\n2 0\n", false) == ErrorCode::format);
  CHECK(message_of("DTF1 1 1\n1 0\n2 0\n").find("trailing data") != std::string::npos);
  CHECK(code_of("DTF1 1 1\n1 zero\n", false) == ErrorCode::format);
  CHECK(code_of("TKF1 2 2 2 3 1\n", true) == ErrorCode::shape_mismatch);
  CHECK(code_of("TKF1 2 2 1 1 1\n1 0\n", true) == ErrorCode::format);
}

TEST_CASE("file errors") {
  CHECK_THROWS_AS(load_dense("/nonexistent/dir/x.dtf"), Error);
  try {
    load_dense("/nonexistent/dir/x.dtf");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
  const auto path = temp_file("garbage.txt");
  std::ofstream(path) << "hello\n";
  CHECK_THROWS_AS(sniff_kind(path), Error);
  std::filesystem::remove(path);
}

}  // TEST_SUITE
