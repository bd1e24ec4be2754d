#pragma once

#include <complex>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "wofz/eval.hpp"

// Spectral-line application layer: maps physical line parameters (HWHM
// convention for both widths) to the reduced coordinates
//   x = sqrt(ln 2) (nu - nu0) / alpha_d,   y = sqrt(ln 2) gamma_l / alpha_d
// and synthesizes area-normalized Voigt profiles
//   intensity * (sqrt(ln 2) / (sqrt(pi) alpha_d)) * Re[w(x + iy)].

namespace wofz::lineshape {

inline constexpr double kSqrtLn2 = 0.8325546111576977564;

struct SpectralLine {
  double nu0;        // line center, cm^-1
  double alpha_d;    // Doppler HWHM, cm^-1; > 0
  double gamma_l;    // Lorentz HWHM, cm^-1; >= 0
  double intensity;  // line intensity, arbitrary units; >= 0
};

// Throws std::invalid_argument unless all fields are finite, alpha_d > 0,
// gamma_l >= 0, and intensity >= 0.
void validate(const SpectralLine& line);

struct WavenumberGrid {
  double nu_start;  // cm^-1
  double nu_end;    // cm^-1
  int n_points;     // >= 2
};

// Throws std::invalid_argument unless bounds are finite, nu_start < nu_end,
// and n_points >= 2.
void validate(const WavenumberGrid& grid);

// Equally spaced nodes with exact endpoints.
std::vector<double> grid_nu(const WavenumberGrid& grid);

// x + iy at wavenumber nu; y does not depend on nu. Validates the line.
std::complex<double> to_reduced_coords(double nu, const SpectralLine& line);

// Profile values at every grid node, length n_points. voigt_profile may
// evaluate nodes in parallel; output is bit-identical to the serial form
// because each node is a pure function of its wavenumber.
std::vector<double> voigt_profile(const SpectralLine& line,
                                  const WavenumberGrid& grid,
                                  const CoefficientTable& table);
std::vector<double> voigt_profile_serial(const SpectralLine& line,
                                         const WavenumberGrid& grid,
                                         const CoefficientTable& table);

// Sum of the per-line profiles, accumulated in line-list order.
std::vector<double> synthesize(const std::vector<SpectralLine>& lines,
                               const WavenumberGrid& grid,
                               const CoefficientTable& table);

// Parse or invariant failure in a line list; row() is the 1-based physical
// line number in the file, counting the header as line 1.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int row)
      : std::runtime_error(message), row_(row) {}
  int row() const { return row_; }

 private:
  int row_;
};

// CSV with mandatory header `nu0,alpha_d,gamma_l,intensity`; blank lines are
// skipped; every data row must have exactly those four numeric fields and
// satisfy the SpectralLine invariants. Throws ParseError with the offending
// row number; the path overload throws std::runtime_error when the file
// cannot be opened.
std::vector<SpectralLine> parse_line_list(std::istream& in);
std::vector<SpectralLine> parse_line_list(const std::string& path);

}  // namespace wofz::lineshape
