#include "ntucker/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "ntucker/error.hpp"

namespace ntucker {

namespace {

void write_value(std::ostream& os, Scalar v) {
  char buf[64];
  const int len = std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.real(), v.imag());
  os.write(buf, len);
}

bool parse_double(std::string_view& s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  if (s.empty()) return false;
  // from_chars rejects a leading '+', which some writers emit.
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc()) return false;
  s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
  return true;
}

class ValueReader {
 public:
  ValueReader(std::istream& is, Index expected) : is_(is), expected_(expected) {}

  Scalar next() {
    std::string line;
    while (std::getline(is_, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      std::string_view s(line);
      double re = 0.0, im = 0.0;
      if (!parse_double(s, re) || !parse_double(s, im) || s.find_first_not_of(" \t") != std::string_view::npos)
        fail(ErrorCode::format, "malformed value line " + std::to_string(read_ + 1) + ": '" + line + "'");
      ++read_;
      return {re, im};
    }
    fail(ErrorCode::format, "truncated data: expected " + std::to_string(expected_) + " values, found " +
                                std::to_string(read_));
  }

  void expect_end() {
    std::string line;
    while (std::getline(is_, line))
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        fail(ErrorCode::format, "trailing data after " + std::to_string(expected_) + " values");
  }

 private:
  std::istream& is_;
  Index expected_;
  Index read_ = 0;
};

std::vector<Index> parse_header(std::istream& is, const std::string& magic, Index groups) {
  std::string line;
  if (!std::getline(is, line)) fail(ErrorCode::format, "malformed header: empty input");
  std::istringstream hs(line);
  std::string word;
  if (!(hs >> word) || word != magic)
    fail(ErrorCode::format, "malformed header: expected magic '" + magic + "', got '" + word + "'");
  long long d = 0;
  if (!(hs >> d) || d < 1) fail(ErrorCode::format, "malformed header: missing or invalid order");
  std::vector<Index> ext;
  long long v = 0;
  while (hs >> v) ext.push_back(static_cast<Index>(v));
  if (!hs.eof()) fail(ErrorCode::format, "malformed header: non-numeric token in '" + line + "'");
  if (static_cast<long long>(ext.size()) != groups * d)
    fail(ErrorCode::shape_mismatch, "extent mismatch: header declares order " + std::to_string(d) + " but lists " +
                                        std::to_string(ext.size()) + " extents (expected " +
                                        std::to_string(groups * d) + ")");
  for (Index e : ext)
    if (e < 1) fail(ErrorCode::shape_mismatch, "extent mismatch: nonpositive extent " + std::to_string(e));
  return ext;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorCode::io, "cannot open '" + path.string() + "' for reading");
  return is;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) fail(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  return os;
}

}  // namespace

void write_dense(std::ostream& os, const DenseTensor& x) {
  os << "DTF1 " << x.order();
  for (Index n : x.shape().dims()) os << ' ' << n;
  os << '\n';
  for (const Scalar& v : x.data()) write_value(os, v);
}

DenseTensor read_dense(std::istream& is) {
  Shape shape(parse_header(is, "DTF1", 1));
  ValueReader reader(is, shape.numel());
  DenseTensor x(shape);
  for (Scalar& v : x.data()) v = reader.next();
  reader.expect_end();
  return x;
}

void write_tucker(std::ostream& os, const TuckerTensor& y) {
  os << "TKF1 " << y.order();
  for (const Matrix& u : y.factors) os << ' ' << u.rows();
  for (Index r : y.core.shape().dims()) os << ' ' << r;
  os << '\n';
  for (const Matrix& u : y.factors)
    for (Index j = 0; j < u.cols(); ++j)
      for (Index i = 0; i < u.rows(); ++i) write_value(os, u(i, j));
  for (const Scalar& v : y.core.data()) write_value(os, v);
}

TuckerTensor read_tucker(std::istream& is) {
  const std::vector<Index> ext = parse_header(is, "TKF1", 2);
  const std::size_t d = ext.size() / 2;
  Index total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (ext[d + i] > ext[i])
      fail(ErrorCode::shape_mismatch, "extent mismatch: rank " + std::to_string(ext[d + i]) + " exceeds extent " +
                                          std::to_string(ext[i]) + " in mode " + std::to_string(i + 1));
    total += ext[i] * ext[d + i];
  }
  Shape core_shape(std::vector<Index>(ext.begin() + static_cast<std::ptrdiff_t>(d), ext.end()));
  total += core_shape.numel() - 1;
  ValueReader reader(is, total);
  TuckerTensor y;
  for (std::size_t i = 0; i < d; ++i) {
    Matrix u(ext[i], ext[d + i]);
    for (Index c = 0; c < u.cols(); ++c)
      for (Index r = 0; r < u.rows(); ++r) u(r, c) = reader.next();
    y.factors.push_back(std::move(u));
  }
  y.core = DenseTensor(core_shape);
  for (Scalar& v : y.core.data()) v = reader.next();
  reader.expect_end();
  return y;
}

void save_dense(const DenseTensor& x, const std::filesystem::path& path) {
  auto os = open_out(path);
  write_dense(os, x);
  if (!os) fail(ErrorCode::io, "write to '" + path.string() + "' failed");
}

DenseTensor load_dense(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_dense(is);
}

void save_tucker(const TuckerTensor& y, const std::filesystem::path& path) {
  auto os = open_out(path);
  write_tucker(os, y);
  if (!os) fail(ErrorCode::io, "write to '" + path.string() + "' failed");
}

TuckerTensor load_tucker(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_tucker(is);
}

FileKind sniff_kind(const std::filesystem::path& path) {
  auto is = open_in(path);
  std::string magic;
  is >> magic;
  if (magic == "DTF1") return FileKind::dense;
  if (magic == "TKF1") return FileKind::tucker;
  fail(ErrorCode::format, "malformed header: unknown magic '" + magic + "' in '" + path.string() + "'");
}

}  // namespace ntucker
