#pragma once

#include <complex>
#include <vector>

// Double-precision evaluation of the Faddeeva function
//   w(z) = e^{-z^2} (1 + (2i/sqrt(pi)) * integral_0^z e^{t^2} dt)
// through a truncated Fourier expansion with period parameter tau_m and
// n_terms coefficients, in two algebraic forms:
//   w_eq2: leading term + exponential-summand series; accurate over the
//          whole upper-right quadrant except very small Im[z].
//   w_eq4: e^{-z^2} + cosine-summand series; exact on the real axis and
//          accurate for Im[z] up to about 0.1.
// w_upper_right dispatches between the two; w_any extends to all four
// quadrants via the reflection identities.

namespace wofz {

inline constexpr double kTauDefault = 12.0;
inline constexpr int kTermsDefault = 23;

// sqrt(pi) and the dispatch/guard thresholds shared by the two forms.
inline constexpr double kSqrtPi = 1.7724538509055160273;
// |tau_m z - n pi| below which the summand switches to the Taylor form of
// its removable singularity (truncation error < 1 ulp at the boundary).
inline constexpr double kPoleGuard = 1e-4;
// Im[z] below which w_upper_right selects the cosine form.
inline constexpr double kYSwitch = 0.05;

enum class Variant { Eq2, Eq4, Auto };
enum class TermMode { Exp, Cos };

// Immutable after construction; safe to share across threads.
struct CoefficientTable {
  double tau_m = kTauDefault;
  int n_terms = kTermsDefault;
  // a[n] = (2 sqrt(pi)/tau_m) exp(-n^2 pi^2 / tau_m^2), n = 0..n_terms.
  // a[0] is stored but not consumed by the implemented forms.
  std::vector<double> a;
};

// Throws std::invalid_argument if tau_m <= 0, n_terms < 1, or n_terms is so
// large that the smallest coefficient underflows to zero.
CoefficientTable build_coefficients(double tau_m = kTauDefault,
                                    int n_terms = kTermsDefault);

// i (1 - e^{i tau_m z}) / (tau_m z), with the removable singularity at
// z = 0 evaluated by Taylor series (limit 1).
std::complex<double> leading_term_eq2(std::complex<double> z, double tau_m);

// n-th summand a_n ((-1)^n f(tau_m z) - 1) / (n^2 pi^2 - tau_m^2 z^2) with
// f = exp(i*) (Exp) or cos (Cos); the removable singularity at
// tau_m z = n pi is evaluated stably. Throws std::out_of_range unless
// 1 <= n <= table.n_terms.
std::complex<double> series_term(int n, std::complex<double> z,
                                 const CoefficientTable& table, TermMode mode);

// Exponential form. Requires Re[z] >= 0 and Im[z] >= 0
// (std::domain_error otherwise); NaN components propagate without throwing.
std::complex<double> w_eq2(std::complex<double> z,
                           const CoefficientTable& table);

// Cosine form, same domain contract as w_eq2. Re[w_eq4(x + 0i)] equals
// std::exp(-x*x) exactly: every non-Gaussian term is purely imaginary for
// real z.
std::complex<double> w_eq4(std::complex<double> z,
                           const CoefficientTable& table);

// Dispatch: w_eq4 when Im[z] < kYSwitch, else w_eq2. Same domain contract.
std::complex<double> w_upper_right(std::complex<double> z,
                                   const CoefficientTable& table);

// Whole-plane evaluation via w(-conj(z)) = conj(w(z)) and
// w(z) = 2 e^{-z^2} - w(-z). Throws std::overflow_error when Im[z] < 0 and
// |2 e^{-z^2}| exceeds the double range; NaN components yield NaN + NaN i.
std::complex<double> w_any(std::complex<double> z,
                           const CoefficientTable& table);

// Voigt function Re[w(|x| + iy)] (even in x). Requires y >= 0.
double voigt(double x, double y, const CoefficientTable& table);

}  // namespace wofz
