#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "robin/criterion.hpp"
#include "robin/factorization.hpp"
#include "robin/interval.hpp"
#include "robin/rational.hpp"
#include "robin/sieve.hpp"

namespace robin {

// An extremal probe for the minimum of F: a colossally abundant or
// superabundant number together with its evaluation.
struct CandidateNumber {
  mpz_class n;
  Factorization factorization;
  std::optional<ExactRational> epsilon;    // present for CA-generated candidates
  std::optional<RobinEvaluation> f_eval;   // absent for n < 3
  bool boundary_epsilon = false;           // exponent rule hit an integer boundary
};

namespace detail {

// floor(log_p((p^(1+eps) - 1)/(p^eps - 1))), certified by refining the
// working precision until the interval pins a single integer. A rational
// eps can never land exactly on an integer boundary (p^eps is then either
// integral or irrational and the boundary equation has no solution), so the
// refinement terminates; the cap resolves downward and flags the candidate.
inline long ca_exponent_rule(std::uint32_t p, const ExactRational& eps, bool& boundary) {
  for (mpfr_prec_t prec = 192; prec <= 4096; prec *= 2) {
    CertifiedInterval pv = CertifiedInterval::of_ulong(p, prec);
    CertifiedInterval q =
        interval_exp(rational_to_interval(eps, prec) * interval_ln(pv));  // p^eps
    CertifiedInterval one = CertifiedInterval::of_long(1, prec);
    if (mpfr_cmp_ui(q.lo_raw(), 1) <= 0) continue;  // too coarse to separate q from 1
    CertifiedInterval ratio = (pv * q - one) / (q - one);
    CertifiedInterval level = interval_ln(ratio) / interval_ln(pv);
    mpfr_t fl;
    mpfr_init2(fl, prec);
    mpfr_floor(fl, level.lo_raw());
    long lo_floor = mpfr_get_si(fl, MPFR_RNDN);
    mpfr_floor(fl, level.hi_raw());
    long hi_floor = mpfr_get_si(fl, MPFR_RNDN);
    mpfr_clear(fl);
    if (lo_floor == hi_floor) return lo_floor;
    if (prec * 2 > 4096) {
      boundary = true;
      return lo_floor;  // tie: resolve downward
    }
  }
  throw std::domain_error("ca_exponent_rule: eps too small to separate at supported precision");
}

}  // namespace detail

// Colossally abundant number for parameter eps via the classical exponent
// rule alpha_p = floor(log_p((p^(1+eps) - 1)/(p^eps - 1))) - 1, stopping at
// the first prime with alpha_p = 0. Large eps legitimately yields n = 1.
inline CandidateNumber generate_ca(const ExactRational& eps, const EvalOptions& opts = {}) {
  if (eps.sign() <= 0) throw std::domain_error("generate_ca: eps must be > 0");
  CandidateNumber cand;
  cand.epsilon = eps;
  std::vector<PrimePower> entries;
  long prev_alpha = 0;
  bool terminated = false;
  for (std::uint32_t p : small_primes()) {
    long alpha = detail::ca_exponent_rule(p, eps, cand.boundary_epsilon) - 1;
    if (alpha <= 0) {
      terminated = true;
      break;
    }
    if (!entries.empty() && alpha > prev_alpha)
      throw std::logic_error("generate_ca: exponent rule produced increasing exponents");
    entries.push_back({mpz_class(p), static_cast<unsigned>(alpha)});
    prev_alpha = alpha;
  }
  if (!terminated)
    throw std::domain_error("generate_ca: eps too small for the supported prime table");
  if (entries.size() >= 2 && entries.back().exponent != 1)
    throw std::logic_error("generate_ca: largest prime entered above the first power");
  cand.factorization = Factorization(std::move(entries), /*validate=*/false);
  cand.n = cand.factorization.value();
  if (cand.n >= 3) cand.f_eval = evaluate_F(cand.factorization, opts);
  return cand;
}

// All n <= limit whose sigma(n)/n strictly exceeds every earlier value,
// found by exhaustive comparison over the sigma sieve.
inline std::vector<CandidateNumber> enumerate_superabundant(std::uint64_t limit,
                                                            const EvalOptions& opts = {}) {
  if (limit < 1) throw std::domain_error("enumerate_superabundant: limit must be >= 1");
  if (limit > kSigmaSieveMax)
    throw std::domain_error("enumerate_superabundant: limit exceeds sieve domain");
  std::vector<std::uint64_t> records;
  std::uint64_t best_n = 0, best_sig = 0;
  for (std::uint64_t lo = 1; lo <= limit; lo += kDefaultBlockSize) {
    const std::uint64_t hi = std::min(limit, lo + kDefaultBlockSize - 1);
    auto sig = sigma_block_values(lo, hi);
    for (std::uint64_t n = lo; n <= hi; ++n) {
      const std::uint64_t s = sig[static_cast<std::size_t>(n - lo)];
      // sigma(n)/n > best  <=>  sigma(n) * best_n > best_sig * n
      if (best_n == 0 || static_cast<unsigned __int128>(s) * best_n >
                             static_cast<unsigned __int128>(best_sig) * n) {
        records.push_back(n);
        best_n = n;
        best_sig = s;
      }
    }
  }
  std::vector<CandidateNumber> out;
  out.reserve(records.size());
  for (std::uint64_t n : records) {
    CandidateNumber cand;
    cand.n = n;
    cand.factorization = factorize(cand.n);
    // superabundant exponents are non-increasing (products of primorials)
    unsigned prev = 0;
    bool first = true;
    for (const auto& e : cand.factorization.entries()) {
      if (!first && e.exponent > prev)
        throw std::logic_error("enumerate_superabundant: exponents not non-increasing");
      prev = e.exponent;
      first = false;
    }
    if (cand.n >= 3) cand.f_eval = evaluate_F(cand.factorization, opts);
    out.push_back(std::move(cand));
  }
  return out;
}

}  // namespace robin
