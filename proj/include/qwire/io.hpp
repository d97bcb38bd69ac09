#pragma once

#include <iosfwd>
#include <string>

#include "qwire/index.hpp"
#include "qwire/spectral.hpp"
#include "qwire/types.hpp"

namespace qwire {

/// 17 significant digits, the form used by every text output.
std::string format_double(double v);
/// "re,im"
std::string format_complex(Complex z);
Complex parse_complex(const std::string& token);

/// Matrix file: first line "n rows cols", then `rows` lines of `cols`
/// whitespace-separated "re,im" entries.
struct MatrixFile {
  int n = 0;
  CMatrix m;
};

MatrixFile read_matrix(std::istream& in);
MatrixFile read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const CMatrix& m);

/// Curve file: header "m n", then m + 1 blocks of a "theta" line followed by
/// the 2n rows of U(theta) in matrix-file entry format.
UnitaryCurve read_curve(std::istream& in);
UnitaryCurve read_curve_file(const std::string& path);
void write_curve(std::ostream& out, const UnitaryCurve& c);

/// "# qwire-spectra v1" then one "lambda multiplicity residual" line per level.
void write_spectrum(std::ostream& out, const Spectrum& s);
std::vector<Level> read_spectrum(std::istream& in);

}  // namespace qwire
