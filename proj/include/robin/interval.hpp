#pragma once

#include <mpfr.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

#include "robin/rational.hpp"

namespace robin {

enum class SignVerdict { Positive, Negative, Indeterminate };

inline const char* to_string(SignVerdict s) {
  switch (s) {
    case SignVerdict::Positive: return "positive";
    case SignVerdict::Negative: return "negative";
    default: return "indeterminate";
  }
}

inline SignVerdict sign_verdict_from_string(const std::string& s) {
  if (s == "positive") return SignVerdict::Positive;
  if (s == "negative") return SignVerdict::Negative;
  if (s == "indeterminate") return SignVerdict::Indeterminate;
  throw std::invalid_argument("unknown sign verdict '" + s + "'");
}

inline constexpr mpfr_prec_t kDefaultPrecision = 128;

// Closed interval [lo, hi] whose endpoints are MPFR floats rounded toward
// -inf / +inf on every operation. If the inputs enclose their true values,
// so does the result; all verdicts derived from it are certified.
class CertifiedInterval {
 public:
  CertifiedInterval() : CertifiedInterval(kDefaultPrecision) {}
  explicit CertifiedInterval(mpfr_prec_t prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }
  CertifiedInterval(const CertifiedInterval& o) {
    mpfr_init2(lo_, mpfr_get_prec(o.lo_));
    mpfr_init2(hi_, mpfr_get_prec(o.hi_));
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  CertifiedInterval(CertifiedInterval&& o) noexcept {
    mpfr_init2(lo_, MPFR_PREC_MIN);
    mpfr_init2(hi_, MPFR_PREC_MIN);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
  }
  CertifiedInterval& operator=(CertifiedInterval o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    return *this;
  }
  ~CertifiedInterval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  static CertifiedInterval of_long(long v, mpfr_prec_t prec = kDefaultPrecision) {
    CertifiedInterval r(prec);
    mpfr_set_si(r.lo_, v, MPFR_RNDD);
    mpfr_set_si(r.hi_, v, MPFR_RNDU);
    return r;
  }
  static CertifiedInterval of_ulong(unsigned long v, mpfr_prec_t prec = kDefaultPrecision) {
    CertifiedInterval r(prec);
    mpfr_set_ui(r.lo_, v, MPFR_RNDD);
    mpfr_set_ui(r.hi_, v, MPFR_RNDU);
    return r;
  }
  static CertifiedInterval of_integer(const mpz_class& n, mpfr_prec_t prec = kDefaultPrecision) {
    CertifiedInterval r(prec);
    mpfr_set_z(r.lo_, n.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_, n.get_mpz_t(), MPFR_RNDU);
    return r;
  }
  static CertifiedInterval of_rational(const ExactRational& q, mpfr_prec_t prec = kDefaultPrecision) {
    CertifiedInterval r(prec);
    mpfr_set_q(r.lo_, q.raw().get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.raw().get_mpq_t(), MPFR_RNDU);
    return r;
  }
  static CertifiedInterval of_rational_range(const ExactRational& lo, const ExactRational& hi,
                                             mpfr_prec_t prec = kDefaultPrecision) {
    if (hi < lo) throw std::invalid_argument("interval endpoints out of order");
    CertifiedInterval r(prec);
    mpfr_set_q(r.lo_, lo.raw().get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, hi.raw().get_mpq_t(), MPFR_RNDU);
    return r;
  }
  static CertifiedInterval of_mpfr(mpfr_srcptr lo, mpfr_srcptr hi) {
    CertifiedInterval r(std::max(mpfr_get_prec(lo), mpfr_get_prec(hi)));
    mpfr_set(r.lo_, lo, MPFR_RNDD);
    mpfr_set(r.hi_, hi, MPFR_RNDU);
    if (mpfr_cmp(r.lo_, r.hi_) > 0)
      throw std::invalid_argument("interval endpoints out of order");
    return r;
  }
  static CertifiedInterval euler_gamma(mpfr_prec_t prec = kDefaultPrecision) {
    CertifiedInterval r(prec);
    mpfr_const_euler(r.lo_, MPFR_RNDD);
    mpfr_const_euler(r.hi_, MPFR_RNDU);
    return r;
  }
  // Endpoints given as decimal strings; the result encloses [lo, hi].
  static CertifiedInterval of_decimal(const std::string& lo, const std::string& hi,
                                      mpfr_prec_t prec = kDefaultPrecision) {
    CertifiedInterval r(prec);
    if (mpfr_set_str(r.lo_, lo.c_str(), 10, MPFR_RNDD) != 0)
      throw std::invalid_argument("bad decimal endpoint '" + lo + "'");
    if (mpfr_set_str(r.hi_, hi.c_str(), 10, MPFR_RNDU) != 0)
      throw std::invalid_argument("bad decimal endpoint '" + hi + "'");
    if (mpfr_cmp(r.lo_, r.hi_) > 0)
      throw std::invalid_argument("decimal interval endpoints out of order");
    return r;
  }

  mpfr_prec_t precision() const {
    return std::max(mpfr_get_prec(lo_), mpfr_get_prec(hi_));
  }
  mpfr_srcptr lo_raw() const { return lo_; }
  mpfr_srcptr hi_raw() const { return hi_; }

  double lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  double mid_double() const {
    mpfr_t m;
    mpfr_init2(m, 64);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    double d = mpfr_get_d(m, MPFR_RNDN);
    mpfr_clear(m);
    return d;
  }
  // Upper bound on hi - lo.
  double width_double() const {
    mpfr_t w;
    mpfr_init2(w, 64);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
  }

  bool contains(const ExactRational& q) const {
    return mpfr_cmp_q(lo_, q.raw().get_mpq_t()) <= 0 &&
           mpfr_cmp_q(hi_, q.raw().get_mpq_t()) >= 0;
  }
  bool contains(long v) const {
    return mpfr_cmp_si(lo_, v) <= 0 && mpfr_cmp_si(hi_, v) >= 0;
  }
  bool contains_zero() const { return contains(0L); }
  bool subset_of(const CertifiedInterval& o) const {
    return mpfr_cmp(o.lo_, lo_) <= 0 && mpfr_cmp(hi_, o.hi_) <= 0;
  }
  bool intersects(const CertifiedInterval& o) const {
    return mpfr_cmp(lo_, o.hi_) <= 0 && mpfr_cmp(o.lo_, hi_) <= 0;
  }
  // Certified strict dominance: every point of *this exceeds every point of o.
  bool certainly_greater_than(const CertifiedInterval& o) const {
    return mpfr_cmp(lo_, o.hi_) > 0;
  }

  friend CertifiedInterval operator+(const CertifiedInterval& a, const CertifiedInterval& b) {
    CertifiedInterval r(std::max(a.precision(), b.precision()));
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }
  friend CertifiedInterval operator-(const CertifiedInterval& a, const CertifiedInterval& b) {
    CertifiedInterval r(std::max(a.precision(), b.precision()));
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
  }
  friend CertifiedInterval operator-(const CertifiedInterval& a) {
    CertifiedInterval r(a.precision());
    mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    return r;
  }
  friend CertifiedInterval operator*(const CertifiedInterval& a, const CertifiedInterval& b) {
    CertifiedInterval r(std::max(a.precision(), b.precision()));
    mpfr_t t;
    mpfr_init2(t, r.precision());
    mpfr_srcptr ae[2] = {a.lo_, a.hi_};
    mpfr_srcptr be[2] = {b.lo_, b.hi_};
    bool first = true;
    for (auto* x : ae)
      for (auto* y : be) {
        mpfr_mul(t, x, y, MPFR_RNDD);
        if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, x, y, MPFR_RNDU);
        if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
        first = false;
      }
    mpfr_clear(t);
    return r;
  }
  friend CertifiedInterval operator/(const CertifiedInterval& a, const CertifiedInterval& b) {
    if (b.contains_zero())
      throw std::domain_error("interval division: divisor encloses zero");
    CertifiedInterval r(std::max(a.precision(), b.precision()));
    mpfr_t t;
    mpfr_init2(t, r.precision());
    mpfr_srcptr ae[2] = {a.lo_, a.hi_};
    mpfr_srcptr be[2] = {b.lo_, b.hi_};
    bool first = true;
    for (auto* x : ae)
      for (auto* y : be) {
        mpfr_div(t, x, y, MPFR_RNDD);
        if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
        mpfr_div(t, x, y, MPFR_RNDU);
        if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
        first = false;
      }
    mpfr_clear(t);
    return r;
  }

  friend CertifiedInterval interval_ln(const CertifiedInterval& x) {
    if (mpfr_sgn(x.lo_) <= 0)
      throw std::domain_error("interval_ln: argument must be certainly positive");
    CertifiedInterval r(x.precision());
    mpfr_log(r.lo_, x.lo_, MPFR_RNDD);
    mpfr_log(r.hi_, x.hi_, MPFR_RNDU);
    return r;
  }
  friend CertifiedInterval interval_exp(const CertifiedInterval& x) {
    CertifiedInterval r(x.precision());
    mpfr_exp(r.lo_, x.lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, x.hi_, MPFR_RNDU);
    return r;
  }
  // Pointwise max, [max(a.lo, b.lo), max(a.hi, b.hi)].
  friend CertifiedInterval interval_max(const CertifiedInterval& a, const CertifiedInterval& b) {
    CertifiedInterval r(std::max(a.precision(), b.precision()));
    mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

// Namespace-scope declarations for the hidden friends above, so qualified
// robin:: calls resolve too.
CertifiedInterval interval_ln(const CertifiedInterval& x);
CertifiedInterval interval_exp(const CertifiedInterval& x);
CertifiedInterval interval_max(const CertifiedInterval& a, const CertifiedInterval& b);

inline CertifiedInterval rational_to_interval(const ExactRational& q,
                                              mpfr_prec_t prec = kDefaultPrecision) {
  return CertifiedInterval::of_rational(q, prec);
}

inline CertifiedInterval integer_to_interval(const mpz_class& n,
                                             mpfr_prec_t prec = kDefaultPrecision) {
  return CertifiedInterval::of_integer(n, prec);
}

inline SignVerdict certified_sign(const CertifiedInterval& x) {
  if (mpfr_sgn(x.lo_raw()) > 0) return SignVerdict::Positive;
  if (mpfr_sgn(x.hi_raw()) < 0) return SignVerdict::Negative;
  return SignVerdict::Indeterminate;
}

namespace detail {
inline std::string mpfr_decimal(mpfr_srcptr v, mpfr_rnd_t rnd, int digits) {
  char* s = nullptr;
  // %R*e prints in scientific form with the requested rounding direction.
  if (mpfr_asprintf(&s, "%.*R*e", digits - 1, rnd, v) < 0)
    throw std::runtime_error("mpfr_asprintf failed");
  std::string out(s);
  mpfr_free_str(s);
  return out;
}
}  // namespace detail

// Decimal rendering rounded outward, so the printed pair is still an
// enclosure of the true value.
inline std::string decimal_lo(const CertifiedInterval& x, int digits = 15) {
  return detail::mpfr_decimal(x.lo_raw(), MPFR_RNDD, digits);
}
inline std::string decimal_hi(const CertifiedInterval& x, int digits = 15) {
  return detail::mpfr_decimal(x.hi_raw(), MPFR_RNDU, digits);
}

// An interval plus its outwardly rounded decimal rendering. The strings are
// authoritative for serialization (byte-stable across write/parse cycles);
// the live interval is authoritative for arithmetic.
struct ReportedInterval {
  CertifiedInterval value;
  std::string lo;
  std::string hi;

  static ReportedInterval of(const CertifiedInterval& v, int digits = 15) {
    return {v, decimal_lo(v, digits), decimal_hi(v, digits)};
  }
  static ReportedInterval parse(const std::string& lo, const std::string& hi,
                                mpfr_prec_t prec = kDefaultPrecision) {
    return {CertifiedInterval::of_decimal(lo, hi, prec), lo, hi};
  }
  friend bool operator==(const ReportedInterval& a, const ReportedInterval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

// Enclosures of the Euler-Mascheroni constant and its exponentials.
// Computed at the requested precision (never below the 128-bit default, which
// keeps every width at or below 1e-30) and validated once against embedded
// 40-digit reference digits.
struct Constants {
  CertifiedInterval gamma;
  CertifiedInterval exp_gamma;
  CertifiedInterval exp_neg_gamma;

  static const Constants& at(mpfr_prec_t prec = kDefaultPrecision) {
    static std::mutex mu;
    static std::map<mpfr_prec_t, std::unique_ptr<Constants>> cache;
    if (prec < kDefaultPrecision) prec = kDefaultPrecision;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[prec];
    if (!slot) {
      auto c = std::make_unique<Constants>();
      c->gamma = CertifiedInterval::euler_gamma(prec);
      c->exp_gamma = interval_exp(c->gamma);
      c->exp_neg_gamma = interval_exp(-c->gamma);
      self_check(*c);
      slot = std::move(c);
    }
    return *slot;
  }

 private:
  static void self_check(const Constants& c) {
    static std::once_flag flag;
    std::call_once(flag, [&c] {
      // 40-digit truncations; the true values sit within 1e-39 above them.
      check_against(c.gamma, "0.5772156649015328606065120900824024310421", "gamma");
      check_against(c.exp_gamma, "1.781072417990197985236504103107179549169", "exp(gamma)");
      check_against(c.exp_neg_gamma, "0.5614594835668851698241432147908807867657", "exp(-gamma)");
      if (!(c.exp_gamma * c.exp_neg_gamma).contains(ExactRational(1)))
        throw std::logic_error("constants self-check: exp(gamma)*exp(-gamma) misses 1");
    });
  }
  static void check_against(const CertifiedInterval& computed, const std::string& digits,
                            const char* name) {
    CertifiedInterval ref =
        CertifiedInterval::of_decimal(digits, digits, kDefaultPrecision + 32);
    CertifiedInterval pad = CertifiedInterval::of_decimal("-1e-38", "1e-38");
    if (!computed.subset_of(ref + pad))
      throw std::logic_error(std::string("constants self-check failed for ") + name);
  }
};

}  // namespace robin
