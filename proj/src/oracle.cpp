#include "wofz/oracle.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <utility>

namespace wofz::oracle {
namespace {

constexpr double kLog2Of10 = 3.3219280948873623;
constexpr mpfr_rnd_t R = MPFR_RNDN;

mpfr_prec_t bits_for(int decimal_digits) {
  return static_cast<mpfr_prec_t>(
             std::ceil(decimal_digits * kLog2Of10)) +
         16;
}

void check_digits(int digits) {
  if (digits < kMinDigits || digits > kMaxDigits) {
    throw std::invalid_argument(
        "oracle: digits must lie in [" + std::to_string(kMinDigits) + ", " +
        std::to_string(kMaxDigits) + "]");
  }
}

bool finite_z(std::complex<double> z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Largest binary exponent among the nonzero arguments; LONG_MIN if all zero.
long mag_exp2(mpfr_srcptr a, mpfr_srcptr b) {
  long m = LONG_MIN;
  if (!mpfr_zero_p(a)) m = std::max(m, static_cast<long>(mpfr_get_exp(a)));
  if (!mpfr_zero_p(b)) m = std::max(m, static_cast<long>(mpfr_get_exp(b)));
  return m;
}

// d = a * b (complex), d distinct from a and b.
void cmul(BigReal& dre, BigReal& dim, const BigReal& are, const BigReal& aim,
          const BigReal& bre, const BigReal& bim, BigReal& t) {
  mpfr_mul(dre.raw(), are.raw(), bre.raw(), R);
  mpfr_mul(t.raw(), aim.raw(), bim.raw(), R);
  mpfr_sub(dre.raw(), dre.raw(), t.raw(), R);
  mpfr_mul(dim.raw(), are.raw(), bim.raw(), R);
  mpfr_mul(t.raw(), aim.raw(), bre.raw(), R);
  mpfr_add(dim.raw(), dim.raw(), t.raw(), R);
}

}  // namespace

BigReal::BigReal(mpfr_prec_t bits) { mpfr_init2(v_, bits); }

BigReal::BigReal(const BigReal& o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, R);
}

BigReal::BigReal(BigReal&& o) noexcept {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, o.v_);
}

BigReal& BigReal::operator=(const BigReal& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, R);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& o) noexcept {
  if (this != &o) {
    mpfr_swap(v_, o.v_);
  }
  return *this;
}

BigReal::~BigReal() { mpfr_clear(v_); }

double BigReal::to_double() const { return mpfr_get_d(v_, R); }

std::string BigReal::to_string(int significant_digits) const {
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*RNg", significant_digits, v_);
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

bool BigReal::is_zero() const { return mpfr_zero_p(v_) != 0; }

int agreement_digits(const BigReal& a, const BigReal& b) {
  const mpfr_prec_t p =
      std::max(mpfr_get_prec(a.raw()), mpfr_get_prec(b.raw())) + 64;
  BigReal diff(p), mag(p);
  mpfr_sub(diff.raw(), a.raw(), b.raw(), R);
  if (mpfr_zero_p(diff.raw())) {
    return 9999;
  }
  mpfr_abs(diff.raw(), diff.raw(), R);
  mpfr_abs(mag.raw(), a.raw(), R);
  if (mpfr_zero_p(mag.raw())) {
    return 0;
  }
  mpfr_div(diff.raw(), diff.raw(), mag.raw(), R);
  mpfr_log10(diff.raw(), diff.raw(), R);
  mpfr_neg(diff.raw(), diff.raw(), R);
  const long d = mpfr_get_si(diff.raw(), MPFR_RNDD);
  return static_cast<int>(std::clamp(d, 0L, 9999L));
}

int agreement_digits(const BigComplex& a, const BigComplex& b) {
  const mpfr_prec_t p =
      std::max({mpfr_get_prec(a.re.raw()), mpfr_get_prec(a.im.raw()),
                mpfr_get_prec(b.re.raw()), mpfr_get_prec(b.im.raw())}) +
      64;
  BigReal dre(p), dim(p), mag(p);
  mpfr_sub(dre.raw(), a.re.raw(), b.re.raw(), R);
  mpfr_sub(dim.raw(), a.im.raw(), b.im.raw(), R);
  mpfr_hypot(dre.raw(), dre.raw(), dim.raw(), R);
  if (mpfr_zero_p(dre.raw())) {
    return 9999;
  }
  mpfr_hypot(mag.raw(), a.re.raw(), a.im.raw(), R);
  if (mpfr_zero_p(mag.raw())) {
    return 0;
  }
  mpfr_div(dre.raw(), dre.raw(), mag.raw(), R);
  mpfr_log10(dre.raw(), dre.raw(), R);
  mpfr_neg(dre.raw(), dre.raw(), R);
  const long d = mpfr_get_si(dre.raw(), MPFR_RNDD);
  return static_cast<int>(std::clamp(d, 0L, 9999L));
}

ReferenceValue w_ref_series(std::complex<double> z, int digits) {
  check_digits(digits);
  const double az2 = z.real() * z.real() + z.imag() * z.imag();
  if (!finite_z(z) || az2 > 144.0) {
    throw std::out_of_range(
        "w_ref_series: requires finite z with |z| <= 12 (the series loses "
        "e^{|z|^2} digits to cancellation)");
  }
  // Guard digits absorb the cancellation; the threshold below which a term
  // no longer moves the sum is wd decimal digits under the running sum.
  const int wd = digits + static_cast<int>(std::ceil(az2 * 0.4342944819032518)) + 10;
  const mpfr_prec_t p = bits_for(wd);
  const long thr = -static_cast<long>(std::ceil(wd * kLog2Of10)) - 4;
  const double kmin = 2.0 * az2 + 4.0;

  BigReal m2re(p), m2im(p), sre(p), sim(p), tere(p), teim(p), tore(p),
      toim(p), t(p), u(p);

  // m2 = -z^2 = (y^2 - x^2) - 2xy i; products of doubles are exact at p.
  mpfr_set_d(t.raw(), z.real(), R);
  mpfr_sqr(t.raw(), t.raw(), R);
  mpfr_set_d(u.raw(), z.imag(), R);
  mpfr_sqr(u.raw(), u.raw(), R);
  mpfr_sub(m2re.raw(), u.raw(), t.raw(), R);
  mpfr_set_d(t.raw(), z.real(), R);
  mpfr_mul_d(t.raw(), t.raw(), z.imag(), R);
  mpfr_mul_2ui(t.raw(), t.raw(), 1, R);
  mpfr_neg(m2im.raw(), t.raw(), R);

  // s = 1 + 2iz/sqrt(pi); even chain starts at 1, odd chain at 2iz/sqrt(pi).
  mpfr_const_pi(t.raw(), R);
  mpfr_sqrt(t.raw(), t.raw(), R);  // sqrt(pi)
  mpfr_set_d(tore.raw(), z.imag(), R);
  mpfr_mul_2ui(tore.raw(), tore.raw(), 1, R);
  mpfr_div(tore.raw(), tore.raw(), t.raw(), R);
  mpfr_neg(tore.raw(), tore.raw(), R);  // -2y/sqrt(pi)
  mpfr_set_d(toim.raw(), z.real(), R);
  mpfr_mul_2ui(toim.raw(), toim.raw(), 1, R);
  mpfr_div(toim.raw(), toim.raw(), t.raw(), R);  // 2x/sqrt(pi)
  mpfr_set_ui(tere.raw(), 1, R);
  mpfr_set_ui(teim.raw(), 0, R);
  mpfr_set_ui(sre.raw(), 1, R);
  mpfr_set_ui(sim.raw(), 0, R);
  mpfr_add(sre.raw(), sre.raw(), tore.raw(), R);
  mpfr_add(sim.raw(), sim.raw(), toim.raw(), R);

  BigReal nre(p), nim(p);
  long k = 0;
  unsigned long m = 0;
  while (true) {
    // t_{k+2} = t_k * (-z^2) / (k/2 + 1) for each parity chain.
    cmul(nre, nim, tere, teim, m2re, m2im, t);
    mpfr_div_ui(tere.raw(), nre.raw(), m + 1, R);
    mpfr_div_ui(teim.raw(), nim.raw(), m + 1, R);
    cmul(nre, nim, tore, toim, m2re, m2im, t);
    mpfr_div_ui(nre.raw(), nre.raw(), 2 * m + 3, R);
    mpfr_div_ui(nim.raw(), nim.raw(), 2 * m + 3, R);
    mpfr_mul_2ui(tore.raw(), nre.raw(), 1, R);
    mpfr_mul_2ui(toim.raw(), nim.raw(), 1, R);
    mpfr_add(sre.raw(), sre.raw(), tere.raw(), R);
    mpfr_add(sim.raw(), sim.raw(), teim.raw(), R);
    mpfr_add(sre.raw(), sre.raw(), tore.raw(), R);
    mpfr_add(sim.raw(), sim.raw(), toim.raw(), R);
    k += 2;
    ++m;
    if (static_cast<double>(k) >= kmin) {
      const long me = std::max(mag_exp2(tere.raw(), teim.raw()),
                               mag_exp2(tore.raw(), toim.raw()));
      const long ms = mag_exp2(sre.raw(), sim.raw());
      if (me == LONG_MIN || (ms != LONG_MIN && me < ms + thr)) {
        break;
      }
    }
    if (k > 200000) {
      throw ConvergenceError("w_ref_series: series did not settle");
    }
  }

  BigComplex out{BigReal(p), BigReal(p)};
  mpfr_set(out.re.raw(), sre.raw(), R);
  mpfr_set(out.im.raw(), sim.raw(), R);
  return ReferenceValue{std::move(out), digits, Method::MaclaurinSeries};
}

namespace {

// One bottom-up pass of the continued fraction at a fixed depth.
void cf_pass(double x, double y, long depth, mpfr_prec_t p, BigReal& out_re,
             BigReal& out_im) {
  BigReal xr(p), yr(p), fre(p), fim(p), d2(p), hk(p), t(p), u(p);
  mpfr_set_d(xr.raw(), x, R);
  mpfr_set_d(yr.raw(), y, R);
  mpfr_set(fre.raw(), xr.raw(), R);
  mpfr_set(fim.raw(), yr.raw(), R);
  for (long k = depth; k >= 1; --k) {
    if (mpfr_zero_p(fre.raw()) && mpfr_zero_p(fim.raw())) {
      // Escape hatch for an exact zero convergent (real-axis input).
      mpfr_set_ui_2exp(fre.raw(), 1, -8 * static_cast<mpfr_exp_t>(p), R);
    }
    mpfr_sqr(d2.raw(), fre.raw(), R);
    mpfr_sqr(t.raw(), fim.raw(), R);
    mpfr_add(d2.raw(), d2.raw(), t.raw(), R);
    mpfr_set_ui(hk.raw(), static_cast<unsigned long>(k), R);
    mpfr_div_2ui(hk.raw(), hk.raw(), 1, R);  // k/2, exact
    // f <- z - (k/2) conj(f) / |f|^2
    mpfr_mul(t.raw(), hk.raw(), fre.raw(), R);
    mpfr_div(t.raw(), t.raw(), d2.raw(), R);
    mpfr_mul(u.raw(), hk.raw(), fim.raw(), R);
    mpfr_div(u.raw(), u.raw(), d2.raw(), R);
    mpfr_sub(fre.raw(), xr.raw(), t.raw(), R);
    mpfr_add(fim.raw(), yr.raw(), u.raw(), R);
  }
  if (mpfr_zero_p(fre.raw()) && mpfr_zero_p(fim.raw())) {
    mpfr_set_ui_2exp(fre.raw(), 1, -8 * static_cast<mpfr_exp_t>(p), R);
  }
  // w = (i/sqrt(pi)) / f = (1/sqrt(pi)) (fim + i fre) / |f|^2
  mpfr_sqr(d2.raw(), fre.raw(), R);
  mpfr_sqr(t.raw(), fim.raw(), R);
  mpfr_add(d2.raw(), d2.raw(), t.raw(), R);
  mpfr_const_pi(t.raw(), R);
  mpfr_sqrt(t.raw(), t.raw(), R);
  mpfr_ui_div(t.raw(), 1, t.raw(), R);  // 1/sqrt(pi)
  mpfr_mul(out_re.raw(), t.raw(), fim.raw(), R);
  mpfr_div(out_re.raw(), out_re.raw(), d2.raw(), R);
  mpfr_mul(out_im.raw(), t.raw(), fre.raw(), R);
  mpfr_div(out_im.raw(), out_im.raw(), d2.raw(), R);
}

}  // namespace

ReferenceValue w_ref_cf(std::complex<double> z, int digits) {
  check_digits(digits);
  const double r2 = z.real() * z.real() + z.imag() * z.imag();
  if (!finite_z(z) || r2 < 36.0 || z.imag() < 0.0) {
    throw std::out_of_range(
        "w_ref_cf: requires finite z with |z| >= 6 and Im[z] >= 0");
  }
  const mpfr_prec_t p = bits_for(digits + 10);
  BigReal cre(p), cim(p), pre(p), pim(p), dre(p), dim(p), mag(p), scaled(p);
  bool have_prev = false;
  for (long depth = 8; depth <= 8192; depth *= 2) {
    cf_pass(z.real(), z.imag(), depth, p, cre, cim);
    if (have_prev) {
      mpfr_sub(dre.raw(), cre.raw(), pre.raw(), R);
      mpfr_sub(dim.raw(), cim.raw(), pim.raw(), R);
      mpfr_hypot(dre.raw(), dre.raw(), dim.raw(), R);
      mpfr_hypot(mag.raw(), cre.raw(), cim.raw(), R);
      // Agreement test: |cur - prev| * 10^{digits+2} <= |cur|.
      mpfr_ui_pow_ui(scaled.raw(), 10,
                     static_cast<unsigned long>(digits) + 2, R);
      mpfr_mul(scaled.raw(), scaled.raw(), dre.raw(), R);
      if (mpfr_cmp(scaled.raw(), mag.raw()) <= 0) {
        BigComplex out{BigReal(p), BigReal(p)};
        mpfr_set(out.re.raw(), cre.raw(), R);
        mpfr_set(out.im.raw(), cim.raw(), R);
        return ReferenceValue{std::move(out), digits,
                              Method::ContinuedFraction};
      }
    }
    mpfr_set(pre.raw(), cre.raw(), R);
    mpfr_set(pim.raw(), cim.raw(), R);
    have_prev = true;
  }
  throw ConvergenceError(
      "w_ref_cf: successive depths did not agree within the depth budget");
}

ReferenceValue w_ref(std::complex<double> z, int digits) {
  check_digits(digits);
  if (!finite_z(z) || z.real() < 0.0 || z.imag() < 0.0) {
    throw std::domain_error(
        "w_ref: requires finite z in the closed upper-right quadrant "
        "(callers apply the reflection identities)");
  }
  const double r = std::hypot(z.real(), z.imag());
  if (r <= 6.0) {
    return w_ref_series(z, digits);
  }
  if (r < 8.0) {
    if (z.imag() >= kCfMinY) {
      ReferenceValue s = w_ref_series(z, digits);
      const ReferenceValue c = w_ref_cf(z, digits);
      const int agree = agreement_digits(s.value, c.value);
      if (agree < digits - 2) {
        throw InconsistencyError(
            "w_ref: series and continued fraction agree to only " +
            std::to_string(agree) + " digits at z = (" +
            std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
            "), need " + std::to_string(digits - 2));
      }
      return ReferenceValue{std::move(s.value), digits, Method::CrossChecked};
    }
    return w_ref_series(z, digits);
  }
  if (r <= 12.0) {
    return z.imag() >= kCfMinY ? w_ref_cf(z, digits)
                               : w_ref_series(z, digits);
  }
  return w_ref_cf(z, digits);
}

BigReal exp_real(double t, int digits) {
  check_digits(digits);
  const mpfr_prec_t p = bits_for(digits + 10);
  BigReal out(p);
  mpfr_set_d(out.raw(), t, R);
  mpfr_exp(out.raw(), out.raw(), R);
  return out;
}

BigReal e_times_erfc_one(int digits) {
  check_digits(digits);
  const mpfr_prec_t p = bits_for(digits + 10);
  BigReal e(p), out(p);
  mpfr_set_ui(e.raw(), 1, R);
  mpfr_exp(e.raw(), e.raw(), R);
  mpfr_set_ui(out.raw(), 1, R);
  mpfr_erfc(out.raw(), out.raw(), R);
  mpfr_mul(out.raw(), out.raw(), e.raw(), R);
  return out;
}

}  // namespace wofz::oracle
