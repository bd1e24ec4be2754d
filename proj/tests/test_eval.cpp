#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "wofz/eval.hpp"
#include "wofz/oracle.hpp"
#include "wofz/verify.hpp"

using std::complex;
using namespace wofz;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double crel(complex<double> a, complex<double> b) {
  return std::abs(a - b) / std::abs(b);
}

// Monotone order-preserving key: ulp distance works across signs and zero.
std::uint64_t float_key(double v) {
  const auto u = std::bit_cast<std::uint64_t>(v);
  return (u >> 63) ? ~u : (u | (1ULL << 63));
}

std::uint64_t ulp_distance(double a, double b) {
  const std::uint64_t ka = float_key(a), kb = float_key(b);
  return ka > kb ? ka - kb : kb - ka;
}

bool bit_equal(complex<double> a, complex<double> b) {
  return std::bit_cast<std::uint64_t>(a.real()) ==
             std::bit_cast<std::uint64_t>(b.real()) &&
         std::bit_cast<std::uint64_t>(a.imag()) ==
             std::bit_cast<std::uint64_t>(b.imag());
}

// Nearest doubles to n*pi/12, n = 1..23: the removable singularities.
constexpr double kPoleX[23] = {
    0.26179938779914946, 0.5235987755982989, 0.7853981633974483,
    1.0471975511965979,  1.3089969389957472, 1.5707963267948966,
    1.8325957145940461,  2.0943951023931957, 2.356194490192345,
    2.6179938779914944,  2.879793265790644,  3.141592653589793,
    3.4033920413889427,  3.6651914291880923, 3.9269908169872414,
    4.188790204786391,   4.4505895925855405, 4.71238898038469,
    4.97418836818384,    5.235987755982989,  5.497787143782138,
    5.759586531581288,   6.021385919380437,
};

}  // namespace

TEST_CASE("build_coefficients populates the table") {
  const CoefficientTable t = build_coefficients();
  CHECK(t.tau_m == 12.0);
  CHECK(t.n_terms == 23);
  REQUIRE(t.a.size() == 24);
  CHECK(t.a[0] == 2.0 * kSqrtPi / 12.0);
  CHECK(std::abs(t.a[0] - 0.29540897515091934) <= 1e-16);
  CHECK(std::abs(t.a[1] - 0.27584023329217708) / 0.27584023329217708 <=
        1e-15);
  for (std::size_t n = 0; n + 1 < t.a.size(); ++n) {
    CHECK(t.a[n] > 0.0);
    CHECK(t.a[n + 1] < t.a[n]);
  }
  CHECK(t.a.back() > 0.0);
}

TEST_CASE("build_coefficients validates parameters") {
  CHECK_THROWS_AS(build_coefficients(0.0, 23), std::invalid_argument);
  CHECK_THROWS_AS(build_coefficients(-1.0, 23), std::invalid_argument);
  CHECK_THROWS_AS(build_coefficients(12.0, 0), std::invalid_argument);
  CHECK_NOTHROW(build_coefficients(12.0, 104));
  // a[105] underflows to zero, violating a[n] > 0.
  CHECK_THROWS_AS(build_coefficients(12.0, 105), std::invalid_argument);
}

TEST_CASE("leading_term_eq2 limit and small-argument accuracy") {
  const complex<double> at0 = leading_term_eq2({0.0, 0.0}, 12.0);
  CHECK(at0.real() == 1.0);
  CHECK(at0.imag() == 0.0);

  const complex<double> tiny = leading_term_eq2({1e-9, 1e-9}, 12.0);
  const complex<double> want{0.9999999940, 5.999999952000000517689543e-9};
  CHECK(crel(tiny, want) <= 1e-15);
}

TEST_CASE("leading_term_eq2 matches the naive formula away from zero") {
  const complex<double> z{2.0, 0.05};
  const complex<double> tz = 12.0 * z;
  const complex<double> naive =
      complex<double>{0.0, 1.0} * (1.0 - std::exp(complex<double>{0.0, 1.0} * tz)) / tz;
  const complex<double> got = leading_term_eq2(z, 12.0);
  CHECK(ulp_distance(got.real(), naive.real()) <= 2);
  CHECK(ulp_distance(got.imag(), naive.imag()) <= 2);
}

TEST_CASE("series_term rejects out-of-range indices") {
  const CoefficientTable t = build_coefficients();
  CHECK_THROWS_AS(series_term(0, {1.0, 0.0}, t, TermMode::Cos),
                  std::out_of_range);
  CHECK_THROWS_AS(series_term(24, {1.0, 0.0}, t, TermMode::Cos),
                  std::out_of_range);
}

TEST_CASE("series_term at the first pole, cosine mode") {
  const CoefficientTable t = build_coefficients();
  // tau*z lands within one ulp of pi: the u-form carries the limit.
  const complex<double> v = series_term(1, {kPoleX[0], 0.0}, t, TermMode::Cos);
  CHECK(std::isfinite(v.real()));
  CHECK(std::isfinite(v.imag()));
  CHECK(std::abs(v.real() - 7.05987337921135e-18) <= 1e-15);
  CHECK(std::abs(v.imag()) <= 1e-15);
}

TEST_CASE("series_term just off the second pole, exponential mode") {
  const CoefficientTable t = build_coefficients();
  const complex<double> v =
      series_term(2, {kPoleX[1], 1e-13}, t, TermMode::Exp);
  const complex<double> want{-1.700809661064547e-15,
                             -0.01787102753183707117234701};
  CHECK(crel(v, want) <= 1e-13);
}

TEST_CASE("series_term matches the naive formula far from poles") {
  const CoefficientTable t = build_coefficients();
  const int n = 3;
  const complex<double> z{5.0, 0.01};
  const complex<double> tz = 12.0 * z;
  const double npi2 = static_cast<double>(n) * n * M_PI * M_PI;
  const complex<double> naive =
      t.a[n] * (-std::exp(complex<double>{0.0, 1.0} * tz) - 1.0) /
      (npi2 - tz * tz);
  const complex<double> got = series_term(n, z, t, TermMode::Exp);
  CHECK(ulp_distance(got.real(), naive.real()) <= 4);
  CHECK(ulp_distance(got.imag(), naive.imag()) <= 4);
}

TEST_CASE("w_eq2 known values") {
  const CoefficientTable t = build_coefficients();
  CHECK(std::abs(w_eq2({0.0, 0.0}, t) - 1.0) <= 1e-15);

  const complex<double> at11 = w_eq2({1.0, 1.0}, t);
  CHECK(crel(at11, {0.3047442052569126, 0.2082189382028316}) <= 1e-12);

  const complex<double> far = w_eq2({1000.0, 1.0}, t);
  const complex<double> far_ref{5.641898656424070e-7, 5.641893014522593e-4};
  CHECK(crel(far, far_ref) <= 1e-9);
  const auto oracle_far = wofz::oracle::w_ref({1000.0, 1.0}, 30);
  CHECK(crel(far, oracle_far.rounded()) <= 1e-9);
}

TEST_CASE("w_eq2 and w_eq4 reject the other quadrants") {
  const CoefficientTable t = build_coefficients();
  CHECK_THROWS_AS(w_eq2({-1.0, 1.0}, t), std::domain_error);
  CHECK_THROWS_AS(w_eq2({1.0, -1.0}, t), std::domain_error);
  CHECK_THROWS_AS(w_eq4({-1.0, 1.0}, t), std::domain_error);
  CHECK_THROWS_AS(w_eq4({1.0, -1.0}, t), std::domain_error);
}

TEST_CASE("w_eq4 known values") {
  const CoefficientTable t = build_coefficients();
  CHECK(std::abs(w_eq4({0.0, 0.0}, t) - 1.0) <= 1e-15);

  // On the real axis every non-Gaussian contribution is purely imaginary.
  const complex<double> at2 = w_eq4({2.0, 0.0}, t);
  CHECK(at2.real() == std::exp(-4.0));
  CHECK(std::abs(at2.real() - 0.018315638888734179) / 0.018315638888734179 <=
        1e-13);

  const complex<double> v = w_eq4({5.0, 1e-10}, t);
  const auto ref = wofz::oracle::w_ref({5.0, 1e-10}, 30);
  const auto [dre, dim] = wofz::verify::rel_err_components(v, ref);
  CHECK(dre <= 1e-12);
}

TEST_CASE("w_upper_right routes by the y threshold") {
  const CoefficientTable t = build_coefficients();
  CHECK(bit_equal(w_upper_right({3.0, 1e-8}, t), w_eq4({3.0, 1e-8}, t)));
  CHECK(bit_equal(w_upper_right({3.0, 10.0}, t), w_eq2({3.0, 10.0}, t)));

  const complex<double> hi = w_upper_right({3.0, 0.05}, t);
  const complex<double> lo = w_upper_right({3.0, 0.05 - 1e-12}, t);
  CHECK(crel(hi, lo) <= 1e-11);
}

TEST_CASE("w_any reflects into the other quadrants") {
  const CoefficientTable t = build_coefficients();

  const complex<double> mirrored = w_any({-1.0, 1.0}, t);
  CHECK(crel(mirrored, {0.3047442052569126, -0.2082189382028316}) <= 1e-12);
  CHECK(bit_equal(mirrored, std::conj(w_any({1.0, 1.0}, t))));

  const complex<double> lower = w_any({1.0, -0.5}, t);
  const complex<double> lower_ref{0.15554114245433108, 1.1378372157816864};
  CHECK(crel(lower, lower_ref) <= 1e-10);

  CHECK_THROWS_AS(w_any({0.0, -30.0}, t), std::overflow_error);

  const complex<double> bad = w_any({kNaN, 1.0}, t);
  CHECK(std::isnan(bad.real()));
  CHECK(std::isnan(bad.imag()));
}

TEST_CASE("w_any conjugate symmetry is exact for upper-half inputs") {
  const CoefficientTable t = build_coefficients();
  const complex<double> zs[] = {
      {0.3, 1e-6}, {2.0, 0.03}, {7.0, 4.0}, {1000.0, 1.0}, {0.5, 55.0}};
  for (const auto z : zs) {
    CHECK(bit_equal(w_any(-std::conj(z), t), std::conj(w_any(z, t))));
  }
  // Lower-half inputs go through exp(-z^2), where only ulp-level symmetry
  // of the libm kernels is guaranteed.
  const complex<double> lows[] = {{1.0, -0.5}, {3.0, -0.02}};
  for (const auto z : lows) {
    const complex<double> a = w_any(-std::conj(z), t);
    const complex<double> b = std::conj(w_any(z, t));
    CHECK(ulp_distance(a.real(), b.real()) <= 2);
    CHECK(ulp_distance(a.imag(), b.imag()) <= 2);
  }
}

TEST_CASE("voigt wraps the real part") {
  const CoefficientTable t = build_coefficients();
  CHECK(voigt(0.0, 0.0, t) == 1.0);
  CHECK(std::abs(voigt(2.0, 0.0, t) - std::exp(-4.0)) / std::exp(-4.0) <=
        1e-13);
  CHECK(std::abs(voigt(1.0, 1.0, t) - 0.3047442052569126) /
            0.3047442052569126 <=
        1e-12);
  CHECK(voigt(-3.0, 0.1, t) == voigt(3.0, 0.1, t));
  CHECK_THROWS_AS(voigt(1.0, -1e-30, t), std::domain_error);
}

TEST_CASE("pole abscissas stay finite and accurate") {
  const CoefficientTable t = build_coefficients();
  const double ys[] = {0.0, 1e-14, 1e-8};
  for (const int n : {1, 12, 23}) {
    for (const double y : ys) {
      const complex<double> z{kPoleX[n - 1], y};
      const complex<double> v = w_upper_right(z, t);
      REQUIRE(std::isfinite(v.real()));
      REQUIRE(std::isfinite(v.imag()));
      const auto ref = wofz::oracle::w_ref(z, 30);
      const auto [dre, dim] = wofz::verify::rel_err_components(v, ref);
      CHECK(dre <= 1e-12);
      CHECK(dim <= 1e-12);
    }
  }
}

TEST_CASE("real part stays positive over the practical domain") {
  const CoefficientTable t = build_coefficients();
  std::vector<double> xs;
  for (int i = 0; i <= 100; ++i) {
    xs.push_back(400.0 * i);
  }
  for (int i = 0; i <= 40; ++i) {
    xs.push_back(std::pow(10.0, -4.0 + 8.6 * i / 40.0));  // up to ~4e4
  }
  const double ys[] = {0.0, 1e-14, 1e-8, 1e-4, 0.03, 1.0, 100.0};
  for (const double y : ys) {
    for (const double x : xs) {
      const double re = w_upper_right({x, y}, t).real();
      if (y == 0.0) {
        // Past x ~ 27.3 the true value e^{-x^2} is below the smallest
        // subnormal; +0 is the correctly rounded result there.
        CHECK(re >= 0.0);
        CHECK(!std::signbit(re));
        if (x <= 26.0) {
          CHECK(re > 0.0);
        }
      } else {
        CHECK(re > 0.0);
      }
    }
  }
}

TEST_CASE("limit at the origin") {
  const CoefficientTable t = build_coefficients();
  for (const double eps : {1e-8, 1e-10, 1e-12}) {
    CHECK(std::abs(w_upper_right({eps, eps}, t) - 1.0) <= 10.0 * eps);
  }
}

TEST_CASE("repeated evaluation is bit-identical") {
  const CoefficientTable t = build_coefficients();
  const complex<double> zs[] = {
      {0.0, 1e-14}, {3.7, 0.02}, {9.9, 0.1}, {123.4, 5.6}, {40000.0, 1e-4}};
  for (const auto z : zs) {
    CHECK(bit_equal(w_upper_right(z, t), w_upper_right(z, t)));
    const CoefficientTable t2 = build_coefficients();
    CHECK(bit_equal(w_upper_right(z, t), w_upper_right(z, t2)));
  }
}
