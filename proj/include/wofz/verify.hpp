#pragma once

#include <complex>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wofz/eval.hpp"
#include "wofz/oracle.hpp"

// Relative-error measurement of the double-precision evaluators against the
// extended-precision oracle: grid sweeps producing per-point error surfaces,
// their summaries, and deterministic CSV/JSON artifacts.

namespace wofz::verify {

enum class Scale { Linear, Log10 };

// Rectangular evaluation grid. Axis nodes are equally spaced in the raw
// coordinate (Linear) or in log10 (Log10); both endpoints are exact grid
// nodes. A one-node axis degenerates to its minimum.
struct GridSpec {
  double x_min = 0.0;
  double x_max = 10.0;
  int nx = 101;
  double y_min = 1e-14;
  double y_max = 1e-1;
  int ny = 61;
  Scale x_scale = Scale::Linear;
  Scale y_scale = Scale::Log10;
};

// Throws std::invalid_argument unless: all bounds finite, x_min <= x_max,
// y_min <= y_max, nx >= 1, ny >= 1, and each Log10 axis has a positive
// minimum.
void validate(const GridSpec& grid);

std::vector<double> grid_x(const GridSpec& grid);
std::vector<double> grid_y(const GridSpec& grid);

// Per-point relative errors, row-major with y as the outer index:
// entry (iy, ix) lives at iy*nx + ix. Entries are >= 0, or NaN where the
// corresponding reference component is exactly zero.
struct ErrorMap {
  GridSpec grid;
  Variant variant;
  std::vector<double> delta_re;
  std::vector<double> delta_im;
};

// NaN entries are excluded everywhere; argmax holds the grid node (x, y).
// A component whose entries are all NaN reports NaN stats and an
// (NaN, NaN) argmax.
struct ErrorSummary {
  double max_re;
  double max_im;
  std::complex<double> argmax_re;
  std::complex<double> argmax_im;
  double p999_re;  // 99.9th percentile, nearest-rank
  double p999_im;
};

// Raised by summarize when every entry of both components is NaN.
class EmptyMapError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Component-wise |(ref - approx) / ref| with the reference rounded to
// double first; a delta is NaN where the reference component is exactly 0.
std::pair<double, double> rel_err_components(std::complex<double> approx,
                                             std::complex<double> reference);
std::pair<double, double> rel_err_components(
    std::complex<double> approx, const oracle::ReferenceValue& reference);

// Evaluates `variant` (Auto routes through the dispatcher) and the oracle at
// every grid node. The grid must lie in the closed upper-right quadrant
// (std::domain_error). Oracle errors propagate. `sweep` may run the points
// in parallel; its output is bit-identical to sweep_serial because every
// point is a pure function of its coordinates.
ErrorMap sweep(const GridSpec& grid, Variant variant,
               const CoefficientTable& table,
               int digits = oracle::kDefaultDigits);
ErrorMap sweep_serial(const GridSpec& grid, Variant variant,
                      const CoefficientTable& table,
                      int digits = oracle::kDefaultDigits);

ErrorSummary summarize(const ErrorMap& map);

// Max over the grid of |w_a(z) - w_b(z)| / |w_a(z)|; no oracle involved.
// Defaults compare the two formulas inside their joint high-accuracy band.
double overlap_consistency(const GridSpec& grid,
                           const CoefficientTable& table,
                           Variant variant_a = Variant::Eq2,
                           Variant variant_b = Variant::Eq4);

// CSV: header `x,y,delta_re,delta_im`, one row per node, row-major (y outer,
// x inner), shortest round-trip decimals, NaN rendered as `nan`, LF endings.
void write_csv(const ErrorMap& map, std::ostream& os);
void write_csv(const ErrorMap& map, const std::string& path);

// Single JSON object with keys max_re, max_im, argmax_re_x, argmax_re_y,
// argmax_im_x, argmax_im_y, p999_re, p999_im; NaN rendered as null.
std::string summary_json(const ErrorSummary& summary);
void write_summary(const ErrorSummary& summary, const std::string& path);

}  // namespace wofz::verify
