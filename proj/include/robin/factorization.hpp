#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "robin/rational.hpp"
#include "robin/sieve.hpp"

namespace robin {

namespace detail {

inline bool miller_rabin_witness(const mpz_class& n, const mpz_class& a,
                                 const mpz_class& d, unsigned long r) {
  mpz_class x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n - 1) return false;
  for (unsigned long i = 1; i < r; ++i) {
    x = (x * x) % n;
    if (x == n - 1) return false;
  }
  return true;  // a proves n composite
}

}  // namespace detail

// Deterministic Miller-Rabin for everything the toolkit can reach: the first
// twelve prime bases decide primality for n < 3.317e24; larger inputs fall
// back to GMP's probabilistic test.
inline bool is_prime(const mpz_class& n) {
  if (n < 2) return false;
  static const unsigned long kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (unsigned long b : kBases) {
    if (n == b) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), b)) return false;
  }
  static const mpz_class kDeterministicBound("3317044064679887385961981");
  if (n >= kDeterministicBound)
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
  mpz_class d = n - 1;
  unsigned long r = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), r);
  for (unsigned long b : kBases)
    if (detail::miller_rabin_witness(n, mpz_class(b), d, r)) return false;
  return true;
}

struct PrimePower {
  mpz_class prime;
  unsigned exponent = 1;
  friend bool operator==(const PrimePower& a, const PrimePower& b) {
    return a.prime == b.prime && a.exponent == b.exponent;
  }
};

// Ordered prime-power decomposition. Entries are strictly increasing primes
// with exponents >= 1; the empty list represents n = 1.
class Factorization {
 public:
  Factorization() = default;
  explicit Factorization(std::vector<PrimePower> entries, bool validate = true)
      : entries_(std::move(entries)) {
    if (validate) {
      for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.exponent < 1)
          throw std::invalid_argument("Factorization: exponent must be >= 1");
        if (i > 0 && !(entries_[i - 1].prime < e.prime))
          throw std::invalid_argument("Factorization: primes must be strictly increasing");
        if (!is_prime(e.prime))
          throw std::invalid_argument("Factorization: " + e.prime.get_str() + " is not prime");
      }
    }
  }

  const std::vector<PrimePower>& entries() const { return entries_; }
  std::size_t kappa() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const mpz_class& largest_prime() const {
    if (entries_.empty()) throw std::logic_error("Factorization: n = 1 has no primes");
    return entries_.back().prime;
  }
  unsigned largest_prime_exponent() const {
    if (entries_.empty()) throw std::logic_error("Factorization: n = 1 has no primes");
    return entries_.back().exponent;
  }
  unsigned exponent_of(const mpz_class& p) const {
    for (const auto& e : entries_)
      if (e.prime == p) return e.exponent;
    return 0;
  }

  mpz_class value() const {
    mpz_class n = 1;
    mpz_class pw;
    for (const auto& e : entries_) {
      mpz_pow_ui(pw.get_mpz_t(), e.prime.get_mpz_t(), e.exponent);
      n *= pw;
    }
    return n;
  }

  friend bool operator==(const Factorization& a, const Factorization& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<PrimePower> entries_;
};

namespace detail {

// Brent's cycle-finding variant of Pollard rho with batched gcds.
// Expects odd composite n with no factor below the trial-division bound.
inline mpz_class pollard_brent(const mpz_class& n) {
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(20260810UL);  // fixed seed keeps factorizations reproducible
  for (unsigned long c = 1;; ++c) {
    mpz_class y = rng.get_z_range(n - 3) + 2;
    mpz_class g = 1, r = 1, q = 1, x, ys;
    while (g == 1) {
      x = y;
      for (mpz_class i = 0; i < r; ++i) y = (y * y + c) % n;
      mpz_class k = 0;
      const long m = 128;
      while (k < r && g == 1) {
        ys = y;
        for (long i = 0; i < m && k + i < r; ++i) {
          y = (y * y + c) % n;
          q = q * abs(x - y) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      }
      r *= 2;
    }
    if (g == n) {
      // backtrack one step at a time
      do {
        ys = (ys * ys + c) % n;
        mpz_class d = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
    // cycle degenerated; retry with the next polynomial
  }
}

inline void factor_into(const mpz_class& n, std::map<mpz_class, unsigned>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  mpz_class d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

// Trial division over the cached prime table, then Pollard rho with
// Miller-Rabin certification for anything that survives.
inline Factorization factorize(const mpz_class& n) {
  if (n <= 0) throw std::domain_error("factorize: n must be >= 1");
  std::map<mpz_class, unsigned> found;
  mpz_class m = n;
  for (std::uint32_t p : small_primes()) {
    if (m == 1) break;
    if (mpz_cmp_ui(m.get_mpz_t(), p) < 0) break;
    if (mpz_fits_ulong_p(m.get_mpz_t())) {
      unsigned long mv = m.get_ui();
      if (static_cast<unsigned long>(p) * p > mv) break;
    }
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      m /= p;
      ++found[mpz_class(p)];
    }
  }
  if (m > 1) {
    // m is now either prime or a product of primes above the table limit
    if (m < mpz_class(kSmallPrimeLimit) * kSmallPrimeLimit) ++found[m];
    else detail::factor_into(m, found);
  }
  std::vector<PrimePower> entries;
  entries.reserve(found.size());
  for (const auto& [p, a] : found) entries.push_back({p, a});
  return Factorization(std::move(entries), /*validate=*/false);
}

inline mpz_class sigma_of_prime_power(const mpz_class& p, unsigned alpha) {
  mpz_class pw;
  mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), alpha + 1);
  return (pw - 1) / (p - 1);
}

// sigma(n) = product over p^a || n of (p^(a+1) - 1)/(p - 1).
inline mpz_class sigma(const mpz_class& n) {
  if (n <= 0) throw std::domain_error("sigma: n must be >= 1");
  const Factorization f = factorize(n);
  mpz_class s = 1;
  for (const auto& e : f.entries()) s *= sigma_of_prime_power(e.prime, e.exponent);
  return s;
}

// Exact sigma(n)/n from a factorization, never touching n itself.
inline ExactRational sigma_ratio(const Factorization& f) {
  ExactRational r(1);
  mpz_class pw;
  for (const auto& e : f.entries()) {
    mpz_pow_ui(pw.get_mpz_t(), e.prime.get_mpz_t(), e.exponent);
    r *= ExactRational(sigma_of_prime_power(e.prime, e.exponent), pw);
  }
  return r;
}

}  // namespace robin
