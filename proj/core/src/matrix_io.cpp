#include "simlab/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace simlab::io {

namespace {

[[noreturn]] void parse_fail(const std::string& origin, int line, const std::string& what) {
  fail(ErrorCode::ParseError, origin + ":" + std::to_string(line) + ": " + what);
}

bool parse_full_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

std::string format_double(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Matrix read_matrix(std::istream& in, const std::string& origin) {
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) parse_fail(origin, 1, "missing header line");
  ++lineno;
  long rows = 0, cols = 0;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> rows >> cols) || (hs >> extra))
      parse_fail(origin, lineno, "header must be 'rows cols'");
    if (rows <= 0 || cols <= 0) parse_fail(origin, lineno, "dimensions must be positive");
  }
  Matrix m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) parse_fail(origin, lineno + 1, "unexpected end of file");
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    for (long j = 0; j < cols; ++j) {
      if (!(ls >> tok)) parse_fail(origin, lineno, "row has too few tokens");
      auto colon = tok.find(':');
      if (colon == std::string::npos || tok.find(':', colon + 1) != std::string::npos)
        parse_fail(origin, lineno, "bad token '" + tok + "' (expected re:im)");
      double re = 0.0, im = 0.0;
      if (!parse_full_double(tok.substr(0, colon), re) ||
          !parse_full_double(tok.substr(colon + 1), im))
        parse_fail(origin, lineno, "bad token '" + tok + "' (expected re:im)");
      m(i, j) = Complex(re, im);
    }
    std::string extra;
    if (ls >> extra) parse_fail(origin, lineno, "row has too many tokens");
  }
  return m;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  return read_matrix(in, path);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j).real()) << ':' << format_double(m(i, j).imag());
    }
    out << '\n';
  }
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);  // binary: keep LF on every platform
  if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  write_matrix(out, m);
  if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace simlab::io
