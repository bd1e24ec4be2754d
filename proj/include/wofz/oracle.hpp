#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <mpfr.h>

// Extended-precision reference values for w(z), computed by two
// mathematically independent methods so that a defect in either one is
// detectable:
//   - the Maclaurin series w(z) = sum_k (iz)^k / Gamma(k/2 + 1), summed
//     with enough guard digits to absorb its e^{|z|^2} cancellation
//     (usable for |z| <= 12), and
//   - the Laplace continued fraction
//     w(z) = (i/sqrt(pi)) / (z - (1/2)/(z - 1/(z - (3/2)/(z - ...)))),
//     evaluated bottom-up with depth doubling (usable for large |z|, but
//     blind to the exponentially small e^{-z^2} component near the real
//     axis).
// w_ref picks the method per region and cross-checks both inside the
// annulus 6 < |z| < 8 when the fraction converges there (Im[z] >= 1).

namespace wofz::oracle {

inline constexpr int kMinDigits = 20;
inline constexpr int kMaxDigits = 50;
inline constexpr int kDefaultDigits = 30;

// Im[z] below which the continued fraction is not trusted: it stalls near
// the real axis once the missing e^{-z^2} component exceeds the target
// accuracy, so the series is used instead wherever |z| <= 12.
inline constexpr double kCfMinY = 1.0;

// Raised when depth doubling or the series fails to converge within its
// iteration budget.
class ConvergenceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when the two independent methods disagree; invalidates any
// verification run in progress.
class InconsistencyError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Arbitrary-precision real with per-value precision; copyable, movable.
class BigReal {
 public:
  explicit BigReal(mpfr_prec_t bits);
  BigReal(const BigReal& o);
  BigReal(BigReal&& o) noexcept;
  BigReal& operator=(const BigReal& o);
  BigReal& operator=(BigReal&& o) noexcept;
  ~BigReal();

  double to_double() const;  // round to nearest double
  std::string to_string(int significant_digits) const;
  bool is_zero() const;

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

 private:
  mpfr_t v_;
};

struct BigComplex {
  BigReal re;
  BigReal im;
  std::complex<double> to_double() const {
    return {re.to_double(), im.to_double()};
  }
};

enum class Method { MaclaurinSeries, ContinuedFraction, CrossChecked };

struct ReferenceValue {
  // Carries the full working precision; certified to `digits` decimals.
  BigComplex value;
  int digits;
  Method method;
  std::complex<double> rounded() const { return value.to_double(); }
};

// Decimal digits to which two values agree: floor(-log10(|a - b| / |a|)),
// clamped to [0, 9999]; 9999 when the difference is exactly zero.
int agreement_digits(const BigReal& a, const BigReal& b);
int agreement_digits(const BigComplex& a, const BigComplex& b);

// Maclaurin series. Requires finite z with |z| <= 12 (std::out_of_range)
// and digits in [kMinDigits, kMaxDigits] (std::invalid_argument).
ReferenceValue w_ref_series(std::complex<double> z, int digits);

// Laplace continued fraction. Requires finite z with |z| >= 6 and
// Im[z] >= 0 (std::out_of_range); same digits contract. Throws
// ConvergenceError if successive depths have not settled by depth 8192.
ReferenceValue w_ref_cf(std::complex<double> z, int digits);

// Region dispatch over the closed upper-right quadrant
// (std::domain_error outside it):
//   |z| <= 6                 series
//   6 < |z| < 8, Im >= 1     both methods, cross-checked to digits - 2
//   6 < |z| < 8, Im < 1      series
//   8 <= |z| <= 12           continued fraction if Im >= 1, else series
//   |z| > 12                 continued fraction
// Throws InconsistencyError if the cross-check fails.
ReferenceValue w_ref(std::complex<double> z, int digits);

// e^t at `digits` precision.
BigReal exp_real(double t, int digits);

// e * erfc(1) = w(i), computed with the library complementary error
// function; independent of both w methods above.
BigReal e_times_erfc_one(int digits);

}  // namespace wofz::oracle
