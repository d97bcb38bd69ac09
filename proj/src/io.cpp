#include "qwire/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "qwire/error.hpp"

namespace qwire {

namespace {

constexpr const char* kSpectrumHeader = "# qwire-spectra v1";

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw IoError("malformed number '" + s + "'");
  return v;
}

bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

CMatrix read_rows(std::istream& in, int rows, int cols) {
  CMatrix m(rows, cols);
  std::string line;
  for (int r = 0; r < rows; ++r) {
    if (!next_content_line(in, line)) throw IoError("matrix ended after " + std::to_string(r) + " rows");
    std::istringstream ls(line);
    std::string tok;
    int c = 0;
    while (ls >> tok) {
      if (c >= cols) throw IoError("too many entries in matrix row " + std::to_string(r + 1));
      m(r, c++) = parse_complex(tok);
    }
    if (c != cols) throw IoError("too few entries in matrix row " + std::to_string(r + 1));
  }
  return m;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_complex(Complex z) { return format_double(z.real()) + "," + format_double(z.imag()); }

Complex parse_complex(const std::string& token) {
  const auto comma = token.find(',');
  if (comma == std::string::npos) return {parse_double(token), 0.0};
  return {parse_double(token.substr(0, comma)), parse_double(token.substr(comma + 1))};
}

MatrixFile read_matrix(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw IoError("empty matrix file");
  std::istringstream hs(line);
  MatrixFile f;
  int rows = 0, cols = 0;
  if (!(hs >> f.n >> rows >> cols)) throw IoError("matrix header must be 'n rows cols'");
  if (f.n < 1 || rows < 1 || cols < 1) throw IoError("matrix header has non-positive sizes");
  if (rows != 2 * f.n || cols != 2 * f.n)
    throw IoError("matrix header must describe a 2n x 2n matrix, got '" + line + "'");
  f.m = read_rows(in, rows, cols);
  return f;
}

MatrixFile read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file '" + path + "'");
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const CMatrix& m) {
  out << m.rows() / 2 << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? " " : "") << format_complex(m(r, c));
    out << '\n';
  }
}

UnitaryCurve read_curve(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw IoError("empty curve file");
  std::istringstream hs(line);
  int m = 0, n = 0;
  if (!(hs >> m >> n) || m < 1 || n < 1) throw IoError("curve header must be 'm n' with m, n >= 1");
  UnitaryCurve c;
  for (int j = 0; j <= m; ++j) {
    if (!next_content_line(in, line)) throw IoError("curve ended after " + std::to_string(j) + " samples");
    std::istringstream ts(line);
    std::string tok, extra;
    if (!(ts >> tok) || (ts >> extra)) throw IoError("expected a single theta value");
    c.theta.push_back(parse_double(tok));
    c.u.push_back(read_rows(in, 2 * n, 2 * n));
  }
  return c;
}

UnitaryCurve read_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open curve file '" + path + "'");
  return read_curve(in);
}

void write_curve(std::ostream& out, const UnitaryCurve& c) {
  out << c.u.size() - 1 << ' ' << c.u.front().rows() / 2 << '\n';
  for (std::size_t j = 0; j < c.u.size(); ++j) {
    out << format_double(c.theta[j]) << '\n';
    const CMatrix& m = c.u[j];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index k = 0; k < m.cols(); ++k) out << (k ? " " : "") << format_complex(m(r, k));
      out << '\n';
    }
  }
}

void write_spectrum(std::ostream& out, const Spectrum& s) {
  out << kSpectrumHeader << '\n';
  for (const Level& l : s.levels)
    out << format_double(l.lambda) << ' ' << l.multiplicity << ' ' << format_double(l.residual) << '\n';
}

std::vector<Level> read_spectrum(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSpectrumHeader) throw IoError("missing spectrum header");
  std::vector<Level> levels;
  while (next_content_line(in, line)) {
    std::istringstream ls(line);
    std::string l, r;
    Level level;
    if (!(ls >> l >> level.multiplicity >> r)) throw IoError("malformed spectrum line '" + line + "'");
    level.lambda = parse_double(l);
    level.residual = parse_double(r);
    levels.push_back(level);
  }
  return levels;
}

}  // namespace qwire
