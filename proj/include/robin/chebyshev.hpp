#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "robin/factorization.hpp"
#include "robin/interval.hpp"
#include "robin/sieve.hpp"

namespace robin {

inline constexpr std::uint64_t kThetaMax = 100'000'000;

// theta(x) = sum of ln p over primes p <= x, as a certified enclosure,
// together with pi(x).
struct ThetaValue {
  std::uint64_t x = 0;
  CertifiedInterval theta;
  std::uint64_t prime_count = 0;
};

namespace detail {

struct ThetaSegment {
  CertifiedInterval sum;  // interval sum of ln p over the segment, ascending
  std::uint64_t count = 0;
};

inline ThetaSegment theta_segment(std::uint64_t lo, std::uint64_t hi, mpfr_prec_t prec) {
  ThetaSegment seg;
  mpfr_t p_val, ln_lo, ln_hi, sum_lo, sum_hi;
  mpfr_inits2(prec, p_val, ln_lo, ln_hi, sum_lo, sum_hi, nullptr);
  mpfr_set_zero(sum_lo, 1);
  mpfr_set_zero(sum_hi, 1);
  for_each_prime(lo, hi, [&](std::uint64_t p) {
    mpfr_set_ui(p_val, p, MPFR_RNDD);  // exact
    mpfr_log(ln_lo, p_val, MPFR_RNDD);
    mpfr_log(ln_hi, p_val, MPFR_RNDU);
    mpfr_add(sum_lo, sum_lo, ln_lo, MPFR_RNDD);
    mpfr_add(sum_hi, sum_hi, ln_hi, MPFR_RNDU);
    ++seg.count;
  });
  seg.sum = CertifiedInterval::of_mpfr(sum_lo, sum_hi);
  mpfr_clears(p_val, ln_lo, ln_hi, sum_lo, sum_hi, nullptr);
  return seg;
}

}  // namespace detail

// Full sieve up to x with one interval logarithm per prime. Segments may be
// sieved concurrently; the combination order is fixed (ascending), so the
// result does not depend on the worker count.
inline ThetaValue theta(std::uint64_t x, mpfr_prec_t prec = kDefaultPrecision,
                        unsigned workers = 1) {
  if (x < 1) throw std::domain_error("theta: x must be >= 1");
  if (x > kThetaMax) throw std::domain_error("theta: x exceeds supported sieve domain");
  constexpr std::uint64_t kSegment = std::uint64_t{1} << 22;
  const std::uint64_t nsegs = (x - 1) / kSegment + 1;
  std::vector<detail::ThetaSegment> segs(static_cast<std::size_t>(nsegs));

  std::atomic<std::uint64_t> next{0};
  auto run = [&] {
    for (;;) {
      const std::uint64_t s = next.fetch_add(1);
      if (s >= nsegs) break;
      const std::uint64_t lo = 1 + s * kSegment;
      const std::uint64_t hi = std::min(x, lo + kSegment - 1);
      segs[static_cast<std::size_t>(s)] = detail::theta_segment(lo, hi, prec);
    }
  };
  if (workers <= 1 || nsegs == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }

  ThetaValue out;
  out.x = x;
  CertifiedInterval total(prec);
  for (const auto& seg : segs) {
    total = total + seg.sum;
    out.prime_count += seg.count;
  }
  out.theta = total;
  return out;
}

// Streams (p, theta(p), pi(p)) for every prime p <= limit, with theta updated
// incrementally. Sequential by construction.
template <class F>
inline void theta_over_primes(std::uint64_t limit, mpfr_prec_t prec, F&& f) {
  if (limit > kThetaMax)
    throw std::domain_error("theta_over_primes: limit exceeds supported sieve domain");
  mpfr_t p_val, ln_lo, ln_hi, sum_lo, sum_hi;
  mpfr_inits2(prec, p_val, ln_lo, ln_hi, sum_lo, sum_hi, nullptr);
  mpfr_set_zero(sum_lo, 1);
  mpfr_set_zero(sum_hi, 1);
  std::uint64_t count = 0;
  for_each_prime(2, limit, [&](std::uint64_t p) {
    mpfr_set_ui(p_val, p, MPFR_RNDD);
    mpfr_log(ln_lo, p_val, MPFR_RNDD);
    mpfr_log(ln_hi, p_val, MPFR_RNDU);
    mpfr_add(sum_lo, sum_lo, ln_lo, MPFR_RNDD);
    mpfr_add(sum_hi, sum_hi, ln_hi, MPFR_RNDU);
    ++count;
    f(p, CertifiedInterval::of_mpfr(sum_lo, sum_hi), count);
  });
  mpfr_clears(p_val, ln_lo, ln_hi, sum_lo, sum_hi, nullptr);
}

// True iff the primes of f are exactly all primes up to its largest prime,
// so n >= primorial(p_kappa) = exp(theta(p_kappa)) applies. Vacuously true
// for n = 1.
inline bool is_prime_complete(const Factorization& f) {
  if (f.empty()) return true;
  const mpz_class& pk = f.largest_prime();
  if (pk > kThetaMax)
    throw std::domain_error("is_prime_complete: largest prime exceeds sieve domain");
  const std::uint64_t limit = pk.get_ui();
  std::uint64_t count = 0;
  for_each_prime(2, limit, [&](std::uint64_t) { ++count; });
  // kappa distinct primes <= p_kappa equal the full set iff the counts match
  return count == f.kappa();
}

enum class CheckResult { Holds, Fails, NotApplicable };

inline const char* to_string(CheckResult r) {
  switch (r) {
    case CheckResult::Holds: return "holds";
    case CheckResult::Fails: return "fails";
    default: return "not-applicable";
  }
}

// Certified check of n >= exp(theta(p_kappa)) for prime-complete n. The
// comparison is taken in exponent space, where both sides are exact
// integers: n versus the primorial of p_kappa. No rounding is involved, so
// the equality case n = primorial certifies as Holds.
inline CheckResult theta_bound_check(const Factorization& f) {
  if (!is_prime_complete(f)) return CheckResult::NotApplicable;
  if (f.empty()) return CheckResult::Holds;  // n = 1, theta over no primes is 0
  mpz_class primorial = 1;
  for (const auto& e : f.entries()) primorial *= e.prime;
  return f.value() >= primorial ? CheckResult::Holds : CheckResult::Fails;
}

// Certified check of theta(p) > p/2, the inequality behind the paper's
// closing n > exp(p_kappa/2) step. Holds requires lo-side dominance.
inline CheckResult half_prime_claim_check(const mpz_class& p) {
  if (!is_prime(p)) throw std::domain_error("half_prime_claim_check: p must be prime");
  if (p > kThetaMax)
    throw std::domain_error("half_prime_claim_check: p exceeds sieve domain");
  ThetaValue tv = theta(p.get_ui());
  ExactRational half(p, mpz_class(2));
  return mpfr_cmp_q(tv.theta.lo_raw(), half.raw().get_mpq_t()) > 0 ? CheckResult::Holds
                                                                   : CheckResult::Fails;
}

}  // namespace robin
