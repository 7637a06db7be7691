#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "robin/factorization.hpp"
#include "robin/interval.hpp"
#include "robin/rational.hpp"
#include "robin/sieve.hpp"

namespace robin {

struct EvalOptions {
  mpfr_prec_t precision_bits = kDefaultPrecision;
  // Indeterminate signs trigger re-evaluation at doubled precision,
  // 128 -> 256 -> ... -> 2048 by default.
  int max_precision_doublings = 4;
};

// One evaluation of F(n) = e^gamma ln ln n - sigma(n)/n. The ratio is exact;
// all rounding lives in the Gronwall term and the final subtraction.
struct RobinEvaluation {
  mpz_class n;
  ExactRational sigma_ratio;
  CertifiedInterval gronwall_term;
  CertifiedInterval f;
  SignVerdict sign = SignVerdict::Indeterminate;
  mpfr_prec_t precision_bits = kDefaultPrecision;
};

// Enclosure of ln ln n; needs n >= 3 so the inner logarithm is certainly > 1.
inline CertifiedInterval loglog_interval(const mpz_class& n,
                                         mpfr_prec_t prec = kDefaultPrecision) {
  if (n < 3) throw std::domain_error("ln ln n requires n >= 3");
  return interval_ln(interval_ln(integer_to_interval(n, prec)));
}

inline CertifiedInterval gronwall_term(const mpz_class& n,
                                       mpfr_prec_t prec = kDefaultPrecision) {
  return Constants::at(prec).exp_gamma * loglog_interval(n, prec);
}

inline RobinEvaluation evaluate_F(const Factorization& fac, const EvalOptions& opts = {}) {
  RobinEvaluation ev;
  ev.n = fac.value();
  if (ev.n < 3) throw std::domain_error("evaluate_F: n must be >= 3");
  ev.sigma_ratio = sigma_ratio(fac);
  for (int k = 0;; ++k) {
    ev.precision_bits = opts.precision_bits << k;
    ev.gronwall_term = gronwall_term(ev.n, ev.precision_bits);
    ev.f = ev.gronwall_term - rational_to_interval(ev.sigma_ratio, ev.precision_bits);
    ev.sign = certified_sign(ev.f);
    if (ev.sign != SignVerdict::Indeterminate || k >= opts.max_precision_doublings) break;
  }
  return ev;
}

inline RobinEvaluation evaluate_F(const mpz_class& n, const EvalOptions& opts = {}) {
  if (n < 3) throw std::domain_error("evaluate_F: n must be >= 3");
  return evaluate_F(factorize(n), opts);
}

struct ScanOptions {
  mpfr_prec_t precision_bits = kDefaultPrecision;
  int max_precision_doublings = 4;
  std::uint64_t block_size = kDefaultBlockSize;
  unsigned workers = 1;
};

// One reported point of a scan. Interval endpoints are carried as outwardly
// rounded 15-digit decimals: still a certified enclosure, and byte-stable
// under serialization round trips.
struct ScanEntry {
  std::uint64_t n = 0;
  ExactRational sigma_ratio;
  std::string f_lo;
  std::string f_hi;
  SignVerdict sign = SignVerdict::Indeterminate;
  friend bool operator==(const ScanEntry& a, const ScanEntry& b) {
    return a.n == b.n && a.sigma_ratio == b.sigma_ratio && a.f_lo == b.f_lo &&
           a.f_hi == b.f_hi && a.sign == b.sign;
  }
};

struct ScanReport {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::vector<ScanEntry> violations;      // certified Negative, ascending
  std::vector<ScanEntry> indeterminates;  // unresolved at the retry cap, ascending
  ScanEntry min_f;                        // smallest F upper bound, ties to smaller n
  friend bool operator==(const ScanReport& a, const ScanReport& b) {
    return a.lo == b.lo && a.hi == b.hi && a.violations == b.violations &&
           a.indeterminates == b.indeterminates && a.min_f == b.min_f;
  }
};

namespace detail {

// Worker-local scratch for the per-n hot path. All endpoint arithmetic is
// directed scalar ops; every quantity here is positive for n >= 3.
class ScanEvaluator {
 public:
  explicit ScanEvaluator(mpfr_prec_t prec)
      : prec_(prec), exp_gamma_(Constants::at(prec).exp_gamma) {
    for (auto* v : {&n_, &ln_lo_, &ln_hi_, &ll_lo_, &ll_hi_, &g_lo_, &g_hi_,
                    &q_lo_, &q_hi_, &f_lo_, &f_hi_, &num_})
      mpfr_init2(*v, prec);
  }
  ~ScanEvaluator() {
    for (auto* v : {&n_, &ln_lo_, &ln_hi_, &ll_lo_, &ll_hi_, &g_lo_, &g_hi_,
                    &q_lo_, &q_hi_, &f_lo_, &f_hi_, &num_})
      mpfr_clear(*v);
  }
  ScanEvaluator(const ScanEvaluator&) = delete;
  ScanEvaluator& operator=(const ScanEvaluator&) = delete;

  // F enclosure for one n with known exact sigma.
  void eval(std::uint64_t n, std::uint64_t sig) {
    mpfr_set_ui(n_, n, MPFR_RNDD);  // exact: n < 2^63
    mpfr_log(ln_lo_, n_, MPFR_RNDD);
    mpfr_log(ln_hi_, n_, MPFR_RNDU);
    mpfr_log(ll_lo_, ln_lo_, MPFR_RNDD);
    mpfr_log(ll_hi_, ln_hi_, MPFR_RNDU);
    mpfr_mul(g_lo_, exp_gamma_.lo_raw(), ll_lo_, MPFR_RNDD);
    mpfr_mul(g_hi_, exp_gamma_.hi_raw(), ll_hi_, MPFR_RNDU);
    mpfr_set_ui(num_, sig, MPFR_RNDD);  // exact
    mpfr_div(q_lo_, num_, n_, MPFR_RNDD);
    mpfr_div(q_hi_, num_, n_, MPFR_RNDU);
    mpfr_sub(f_lo_, g_lo_, q_hi_, MPFR_RNDD);
    mpfr_sub(f_hi_, g_hi_, q_lo_, MPFR_RNDU);
  }

  SignVerdict sign() const {
    if (mpfr_sgn(f_lo_) > 0) return SignVerdict::Positive;
    if (mpfr_sgn(f_hi_) < 0) return SignVerdict::Negative;
    return SignVerdict::Indeterminate;
  }
  mpfr_srcptr f_hi() const { return f_hi_; }
  mpfr_srcptr f_lo() const { return f_lo_; }

 private:
  mpfr_prec_t prec_;
  CertifiedInterval exp_gamma_;
  mpfr_t n_, ln_lo_, ln_hi_, ll_lo_, ll_hi_, g_lo_, g_hi_, q_lo_, q_hi_, f_lo_, f_hi_, num_;
};

struct ScanPoint {
  std::uint64_t n = 0;
  std::uint64_t sig = 0;
  std::string f_lo, f_hi;
  SignVerdict sign = SignVerdict::Indeterminate;
};

struct ScanBlockResult {
  std::vector<ScanPoint> violations;
  std::vector<ScanPoint> indeterminates;
  ScanPoint min_point;
  // base-precision F enclosure at min_point.n; merge compares its upper end
  CertifiedInterval min_f_base;
};

inline ScanEntry make_scan_entry(const ScanPoint& p) {
  ScanEntry e;
  e.n = p.n;
  e.sigma_ratio = ExactRational(mpz_class(p.sig), mpz_class(p.n));
  e.f_lo = p.f_lo;
  e.f_hi = p.f_hi;
  e.sign = p.sign;
  return e;
}

}  // namespace detail

// Exhaustive certified scan of [lo, hi]. Deterministic: the report is
// byte-identical for any worker count.
inline ScanReport scan_range(std::uint64_t lo, std::uint64_t hi, const ScanOptions& opts = {}) {
  if (lo < 3) throw std::domain_error("scan_range: lo must be >= 3");
  if (hi < lo) throw std::domain_error("scan_range: need lo <= hi");
  if (hi > kSigmaSieveMax) throw std::domain_error("scan_range: hi exceeds sieve domain");
  if (opts.block_size < 1) throw std::invalid_argument("scan_range: block size must be >= 1");
  const unsigned workers = std::max(1u, opts.workers);

  const std::uint64_t nblocks = (hi - lo) / opts.block_size + 1;
  std::vector<detail::ScanBlockResult> results(static_cast<std::size_t>(nblocks));

  // Constants are cached per precision; touch them before spawning workers.
  Constants::at(opts.precision_bits);

  std::atomic<std::uint64_t> next{0};
  auto run = [&] {
    detail::ScanEvaluator ev(opts.precision_bits);
    mpfr_t min_hi;
    mpfr_init2(min_hi, opts.precision_bits);
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= nblocks) break;
      const std::uint64_t blo = lo + b * opts.block_size;
      const std::uint64_t bhi = std::min(hi, blo + opts.block_size - 1);
      auto sig = sigma_block_values(blo, bhi);
      detail::ScanBlockResult out;
      bool have_min = false;
      for (std::uint64_t n = blo; n <= bhi; ++n) {
        const std::uint64_t s = sig[static_cast<std::size_t>(n - blo)];
        ev.eval(n, s);
        SignVerdict v = ev.sign();
        detail::ScanPoint pt;
        pt.n = n;
        pt.sig = s;
        pt.sign = v;
        if (v == SignVerdict::Indeterminate) {
          // resolve with the full retry ladder on the exact ratio
          ExactRational sr{mpz_class(s), mpz_class(n)};
          CertifiedInterval f;
          for (int k = 0; k <= opts.max_precision_doublings; ++k) {
            const mpfr_prec_t p = opts.precision_bits << k;
            f = gronwall_term(mpz_class(n), p) - rational_to_interval(sr, p);
            v = certified_sign(f);
            if (v != SignVerdict::Indeterminate) break;
          }
          pt.sign = v;
          pt.f_lo = decimal_lo(f);
          pt.f_hi = decimal_hi(f);
        } else {
          pt.f_lo = detail::mpfr_decimal(ev.f_lo(), MPFR_RNDD, 15);
          pt.f_hi = detail::mpfr_decimal(ev.f_hi(), MPFR_RNDU, 15);
        }
        if (pt.sign == SignVerdict::Negative) out.violations.push_back(pt);
        else if (pt.sign == SignVerdict::Indeterminate) out.indeterminates.push_back(pt);
        // min tracking always uses the base-precision upper bound
        if (!have_min || mpfr_cmp(ev.f_hi(), min_hi) < 0) {
          mpfr_set(min_hi, ev.f_hi(), MPFR_RNDU);
          out.min_point = pt;
          out.min_f_base = CertifiedInterval::of_mpfr(ev.f_lo(), ev.f_hi());
          have_min = true;
        }
      }
      results[static_cast<std::size_t>(b)] = std::move(out);
    }
    mpfr_clear(min_hi);
  };

  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }

  ScanReport report;
  report.lo = lo;
  report.hi = hi;
  const detail::ScanBlockResult* best = nullptr;
  for (const auto& blk : results) {
    for (const auto& p : blk.violations) report.violations.push_back(detail::make_scan_entry(p));
    for (const auto& p : blk.indeterminates)
      report.indeterminates.push_back(detail::make_scan_entry(p));
    if (best == nullptr ||
        mpfr_cmp(blk.min_f_base.hi_raw(), best->min_f_base.hi_raw()) < 0)
      best = &blk;
  }
  report.min_f = detail::make_scan_entry(best->min_point);
  return report;
}

}  // namespace robin
