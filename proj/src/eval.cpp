#include "wofz/eval.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wofz {
namespace {

constexpr double kPi = std::numbers::pi;

// (e^{iu} - 1)/u. Below the pole guard the Taylor form keeps the removable
// singularity at u = 0 below 1 ulp; the limit is i.
std::complex<double> expm1i_over(std::complex<double> u) {
  if (std::abs(u) < kPoleGuard) {
    const std::complex<double> i(0.0, 1.0);
    return i - u / 2.0 - i * u * u / 6.0 + u * u * u / 24.0;
  }
  const std::complex<double> e =
      std::exp(std::complex<double>(-u.imag(), u.real()));
  return (e - 1.0) / u;
}

// (cos u - 1)/u = -2 sin^2(u/2)/u, Taylor form below the pole guard;
// the limit at u = 0 is 0.
std::complex<double> cosm1_over(std::complex<double> u) {
  if (std::abs(u) < kPoleGuard) {
    return -u / 2.0 + u * u * u / 24.0;
  }
  const std::complex<double> s = std::sin(u / 2.0);
  return -2.0 * s * s / u;
}

// Exact -i * v.
std::complex<double> neg_i_times(std::complex<double> v) {
  return {v.imag(), -v.real()};
}

// One summand of either series. osc is the hoisted oscillatory factor,
// e^{i tau z} (Exp) or cos(tau z) (Cos), always evaluated at the full
// argument tz so that standalone and in-loop calls agree bit for bit.
//
// With u = tz - n pi the summand equals -a_n k(u) / (2 n pi + u) where
// k = (e^{iu}-1)/u or (cos u - 1)/u. That form is used near the pole and
// near the origin; elsewhere the printed formula
// a_n ((-1)^n osc - 1) / (n^2 pi^2 - tz^2) is cheaper and, far from the
// pole, avoids the phase error of reconstructing e^{iu} from u.
template <TermMode Mode>
std::complex<double> nth_summand(int n, std::complex<double> tz,
                                 std::complex<double> t2z2,
                                 std::complex<double> osc, double a_n) {
  const double npi = static_cast<double>(n) * kPi;
  const std::complex<double> u = tz - npi;
  if (std::abs(tz) < kPoleGuard || std::abs(u) < kPoleGuard) {
    const std::complex<double> k =
        Mode == TermMode::Exp ? expm1i_over(u) : cosm1_over(u);
    return -a_n * k / (2.0 * static_cast<double>(n) * kPi + u);
  }
  const std::complex<double> num = (n % 2 == 0 ? osc : -osc) - 1.0;
  return a_n * num / (npi * npi - t2z2);
}

std::complex<double> osc_exp(std::complex<double> tz) {
  return std::exp(std::complex<double>(-tz.imag(), tz.real()));
}

void require_upper_right(std::complex<double> z, const char* who) {
  if (z.real() < 0.0 || z.imag() < 0.0) {
    throw std::domain_error(std::string(who) +
                            ": requires Re[z] >= 0 and Im[z] >= 0 "
                            "(use w_any for other quadrants)");
  }
}

}  // namespace

CoefficientTable build_coefficients(double tau_m, int n_terms) {
  if (!(tau_m > 0.0)) {
    throw std::invalid_argument("build_coefficients: tau_m must be > 0");
  }
  if (n_terms < 1) {
    throw std::invalid_argument("build_coefficients: n_terms must be >= 1");
  }
  CoefficientTable t;
  t.tau_m = tau_m;
  t.n_terms = n_terms;
  t.a.resize(static_cast<size_t>(n_terms) + 1);
  const double scale = 2.0 * kSqrtPi / tau_m;
  for (int n = 0; n <= n_terms; ++n) {
    const double q = static_cast<double>(n) * kPi / tau_m;
    t.a[static_cast<size_t>(n)] = scale * std::exp(-q * q);
  }
  if (!(t.a.back() > 0.0)) {
    throw std::invalid_argument(
        "build_coefficients: n_terms too large, trailing coefficients "
        "underflow to zero");
  }
  return t;
}

std::complex<double> leading_term_eq2(std::complex<double> z, double tau_m) {
  // i (1 - e^{i tz}) / tz == -i (e^{i tz} - 1) / tz, exactly, in IEEE
  // arithmetic: the negations commute with the division bit for bit.
  return neg_i_times(expm1i_over(tau_m * z));
}

std::complex<double> series_term(int n, std::complex<double> z,
                                 const CoefficientTable& table,
                                 TermMode mode) {
  if (n < 1 || n > table.n_terms) {
    throw std::out_of_range("series_term: n must lie in [1, n_terms]");
  }
  const std::complex<double> tz = table.tau_m * z;
  const std::complex<double> t2z2 = tz * tz;
  const double a_n = table.a[static_cast<size_t>(n)];
  if (mode == TermMode::Exp) {
    return nth_summand<TermMode::Exp>(n, tz, t2z2, osc_exp(tz), a_n);
  }
  return nth_summand<TermMode::Cos>(n, tz, t2z2, std::cos(tz), a_n);
}

std::complex<double> w_eq2(std::complex<double> z,
                           const CoefficientTable& table) {
  require_upper_right(z, "w_eq2");
  const std::complex<double> tz = table.tau_m * z;
  const std::complex<double> t2z2 = tz * tz;
  const std::complex<double> osc = osc_exp(tz);
  std::complex<double> s(0.0, 0.0);
  for (int n = 1; n <= table.n_terms; ++n) {
    s += nth_summand<TermMode::Exp>(n, tz, t2z2, osc,
                                    table.a[static_cast<size_t>(n)]);
  }
  const double c = table.tau_m * table.tau_m / kSqrtPi;
  return leading_term_eq2(z, table.tau_m) +
         std::complex<double>(0.0, c) * (z * s);
}

std::complex<double> w_eq4(std::complex<double> z,
                           const CoefficientTable& table) {
  require_upper_right(z, "w_eq4");
  const std::complex<double> tz = table.tau_m * z;
  const std::complex<double> t2z2 = tz * tz;
  const std::complex<double> osc = std::cos(tz);
  const std::complex<double> gauss = std::exp(-(z * z));
  const std::complex<double> mid = neg_i_times(cosm1_over(tz));
  std::complex<double> s(0.0, 0.0);
  for (int n = 1; n <= table.n_terms; ++n) {
    s += nth_summand<TermMode::Cos>(n, tz, t2z2, osc,
                                    table.a[static_cast<size_t>(n)]);
  }
  const double c = table.tau_m * table.tau_m / kSqrtPi;
  return gauss + mid + std::complex<double>(0.0, c) * (z * s);
}

std::complex<double> w_upper_right(std::complex<double> z,
                                   const CoefficientTable& table) {
  require_upper_right(z, "w_upper_right");
  return z.imag() < kYSwitch ? w_eq4(z, table) : w_eq2(z, table);
}

std::complex<double> w_any(std::complex<double> z,
                           const CoefficientTable& table) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  if (std::isnan(z.real()) || std::isnan(z.imag())) {
    return {kNaN, kNaN};
  }
  if (z.imag() < 0.0) {
    // w(z) = 2 e^{-z^2} - w(-z); |2 e^{-z^2}| = 2 e^{y^2 - x^2} must stay
    // within the double range, otherwise the result is not representable.
    static const double kGrowthLimit =
        std::log(std::numeric_limits<double>::max() / 2.0);
    const double growth =
        (z.imag() - z.real()) * (z.imag() + z.real());  // y^2 - x^2
    if (growth > kGrowthLimit) {
      throw std::overflow_error(
          "w_any: 2 exp(-z^2) exceeds the double range for this z");
    }
    return 2.0 * std::exp(-(z * z)) - w_any(-z, table);
  }
  if (z.real() < 0.0) {
    return std::conj(w_upper_right(-std::conj(z), table));
  }
  return w_upper_right(z, table);
}

double voigt(double x, double y, const CoefficientTable& table) {
  if (y < 0.0) {
    throw std::domain_error("voigt: requires y >= 0");
  }
  return w_upper_right({std::fabs(x), y}, table).real();
}

}  // namespace wofz
