#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "robin/criterion.hpp"
#include "robin/factorization.hpp"
#include "robin/interval.hpp"
#include "robin/rational.hpp"

namespace robin {

// Finite difference of p^alpha when the exponent drops by one:
// p^alpha - p^(alpha-1).
inline mpz_class delta_prime_power(const mpz_class& p, unsigned alpha) {
  if (alpha < 1) throw std::domain_error("delta_prime_power: alpha must be >= 1");
  mpz_class hi, lo;
  mpz_pow_ui(hi.get_mpz_t(), p.get_mpz_t(), alpha);
  mpz_pow_ui(lo.get_mpz_t(), p.get_mpz_t(), alpha - 1);
  return hi - lo;
}

namespace detail {

inline void require_divisor(const mpz_class& n, const mpz_class& p, const char* op) {
  if (!mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t()))
    throw std::domain_error(std::string(op) + ": p must divide n");
}

inline void require_prime(const mpz_class& p, const char* op) {
  if (!is_prime(p)) throw std::domain_error(std::string(op) + ": p must be prime");
}

}  // namespace detail

// Chain-rule form of the exponent-space difference of ln ln n: (1 - 1/p)/ln n.
inline CertifiedInterval paper_delta_loglog(const mpz_class& n, const mpz_class& p,
                                            mpfr_prec_t prec = kDefaultPrecision) {
  if (n < 3) throw std::domain_error("paper_delta_loglog: n must be >= 3");
  detail::require_prime(p, "paper_delta_loglog");
  detail::require_divisor(n, p, "paper_delta_loglog");
  return rational_to_interval(ExactRational(p - 1, p), prec) /
         interval_ln(integer_to_interval(n, prec));
}

// The same difference taken literally: ln ln n - ln ln(n/p).
inline CertifiedInterval exact_delta_loglog(const mpz_class& n, const mpz_class& p,
                                            mpfr_prec_t prec = kDefaultPrecision) {
  if (n < 3) throw std::domain_error("exact_delta_loglog: n must be >= 3");
  detail::require_prime(p, "exact_delta_loglog");
  detail::require_divisor(n, p, "exact_delta_loglog");
  mpz_class reduced = n / p;
  if (reduced < 3)
    throw std::domain_error("exact_delta_loglog: n/p must be >= 3");
  return loglog_interval(n, prec) - loglog_interval(reduced, prec);
}

namespace detail {

// sigma(n0)/n0 for n0 = n / p^alpha: the part of sigma(n)/n coprime to p.
inline ExactRational coprime_part(const Factorization& f, const mpz_class& p) {
  ExactRational r(1);
  mpz_class pw;
  for (const auto& e : f.entries()) {
    if (e.prime == p) continue;
    mpz_pow_ui(pw.get_mpz_t(), e.prime.get_mpz_t(), e.exponent);
    r *= ExactRational(sigma_of_prime_power(e.prime, e.exponent), pw);
  }
  return r;
}

inline ExactRational local_part(const mpz_class& p, unsigned alpha) {
  mpz_class pw;
  mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), alpha);
  return ExactRational(sigma_of_prime_power(p, alpha), pw);
}

}  // namespace detail

// Exact drop of sigma(n)/n when p's exponent decreases by one. Equals
// A/p^alpha with A the coprime part, and also sigma(n)/n - sigma(n/p)/(n/p).
inline ExactRational delta_sigma_ratio(const Factorization& f, const mpz_class& p) {
  unsigned alpha = f.exponent_of(p);
  if (alpha == 0) throw std::domain_error("delta_sigma_ratio: p must divide n");
  mpz_class pw;
  mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), alpha);
  return detail::coprime_part(f, p) / ExactRational(pw);
}

inline ExactRational delta_sigma_ratio(const mpz_class& n, const mpz_class& p) {
  detail::require_prime(p, "delta_sigma_ratio");
  detail::require_divisor(n, p, "delta_sigma_ratio");
  return delta_sigma_ratio(factorize(n), p);
}

// Eq-7-style residual with the local sum resummed at exponent a:
// e^gamma (1 - 1/p)/ln n - (sigma(n)/n)(p - 1)/(p^(a+1) - 1).
// At p's actual exponent this is exactly
// e^gamma (1 - 1/p)/ln n - A/p^alpha, and it vanishes at the real exponent
// alpha_star by construction.
inline CertifiedInterval stationarity_residual_at(const ExactRational& sigma_over_n,
                                                  const CertifiedInterval& ln_n,
                                                  const mpz_class& p, unsigned alpha,
                                                  mpfr_prec_t prec = kDefaultPrecision) {
  mpz_class pw;
  mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), alpha + 1);
  CertifiedInterval lhs = Constants::at(prec).exp_gamma *
                          rational_to_interval(ExactRational(p - 1, p), prec) / ln_n;
  ExactRational tail = sigma_over_n * ExactRational(p - 1, pw - 1);
  return lhs - rational_to_interval(tail, prec);
}

inline CertifiedInterval stationarity_residual(const Factorization& f, const mpz_class& p,
                                               mpfr_prec_t prec = kDefaultPrecision) {
  unsigned alpha = f.exponent_of(p);
  if (alpha == 0) throw std::domain_error("stationarity_residual: p must divide n");
  mpz_class n = f.value();
  if (n < 3) throw std::domain_error("stationarity_residual: n must be >= 3");
  return stationarity_residual_at(sigma_ratio(f), interval_ln(integer_to_interval(n, prec)),
                                  p, alpha, prec);
}

inline CertifiedInterval stationarity_residual(const mpz_class& n, const mpz_class& p,
                                               mpfr_prec_t prec = kDefaultPrecision) {
  if (n < 3) throw std::domain_error("stationarity_residual: n must be >= 3");
  detail::require_prime(p, "stationarity_residual");
  detail::require_divisor(n, p, "stationarity_residual");
  return stationarity_residual(factorize(n), p, prec);
}

// Real exponent solving the stationarity condition for a freely chosen prime:
// log_p(e^(-gamma) sigma(n) ln n / n + 1/p). p need not divide n.
inline CertifiedInterval alpha_star(const Factorization& f, const mpz_class& p,
                                    mpfr_prec_t prec = kDefaultPrecision) {
  detail::require_prime(p, "alpha_star");
  mpz_class n = f.value();
  if (n < 3) throw std::domain_error("alpha_star: n must be >= 3");
  CertifiedInterval inner =
      Constants::at(prec).exp_neg_gamma * rational_to_interval(sigma_ratio(f), prec) *
          interval_ln(integer_to_interval(n, prec)) +
      rational_to_interval(ExactRational(mpz_class(1), p), prec);
  return interval_ln(inner) / interval_ln(integer_to_interval(p, prec));
}

inline CertifiedInterval alpha_star(const mpz_class& n, const mpz_class& p,
                                    mpfr_prec_t prec = kDefaultPrecision) {
  if (n < 3) throw std::domain_error("alpha_star: n must be >= 3");
  detail::require_prime(p, "alpha_star");
  return alpha_star(factorize(n), p, prec);
}

// Both sides of the geometric-sum resummation
// (1 - 1/p)(1 + p + ... + p^alpha) = p^alpha - 1/p, as exact rationals.
inline std::pair<ExactRational, ExactRational> resummed_identity_check(const mpz_class& p,
                                                                       unsigned alpha) {
  if (alpha < 1) throw std::domain_error("resummed_identity_check: alpha must be >= 1");
  detail::require_prime(p, "resummed_identity_check");
  mpz_class pw;
  mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), alpha + 1);
  mpz_class geometric = (pw - 1) / (p - 1);  // 1 + p + ... + p^alpha
  ExactRational lhs = ExactRational(p - 1, p) * ExactRational(geometric);
  ExactRational rhs = ExactRational(pw - 1, p);  // p^alpha - 1/p over common denominator
  return {lhs, rhs};
}

// sigma(n)/n forced by a stationary configuration whose largest prime enters
// with exponent one: e^gamma (p^2 - 1)/(p ln n).
inline CertifiedInterval implied_sigma_ratio(const mpz_class& n, const mpz_class& p_kappa,
                                             mpfr_prec_t prec = kDefaultPrecision) {
  if (n < 3) throw std::domain_error("implied_sigma_ratio: n must be >= 3");
  detail::require_prime(p_kappa, "implied_sigma_ratio");
  ExactRational factor(p_kappa * p_kappa - 1, p_kappa);
  return Constants::at(prec).exp_gamma * rational_to_interval(factor, prec) /
         interval_ln(integer_to_interval(n, prec));
}

// Right-hand side of the counter-example identity:
// e^gamma p ln n ln ln n - e^gamma (p^2 - 1). Its sign is the sign of F at a
// stationary counter-example with alpha_kappa = 1. Accepts ln_n.lo >= 1 so
// the boundary substitution ln n = 1 stays evaluable (ln ln n = 0 there).
inline CertifiedInterval hjk_rhs(const CertifiedInterval& ln_n, const mpz_class& p_kappa,
                                 mpfr_prec_t prec = kDefaultPrecision) {
  detail::require_prime(p_kappa, "hjk_rhs");
  if (mpfr_cmp_ui(ln_n.lo_raw(), 1) < 0)
    throw std::domain_error("hjk_rhs: need ln n >= 1");
  const auto& c = Constants::at(prec);
  CertifiedInterval first =
      c.exp_gamma * integer_to_interval(p_kappa, prec) * ln_n * interval_ln(ln_n);
  CertifiedInterval second =
      c.exp_gamma * rational_to_interval(ExactRational(mpz_class(p_kappa * p_kappa - 1)), prec);
  return first - second;
}

// Per-prime diagnostics of the exponent-space analysis at one n.
struct StationarityEntry {
  mpz_class p;
  unsigned alpha = 1;
  mpz_class n0;              // n with every factor of p removed
  ExactRational coprime_part;  // A = sigma(n0)/n0
  ExactRational local_part;    // u = 1 + 1/p + ... + 1/p^alpha
  ReportedInterval paper_delta_loglog;
  std::optional<ReportedInterval> exact_delta_loglog;  // needs n/p >= 3
  ExactRational delta_sigma_ratio;
  ReportedInterval delta_f;  // residual at the actual exponent
  ReportedInterval alpha_star;
  long alpha_floor = 0;
  ReportedInterval residual_at_floor;
  long alpha_ceil = 0;
  ReportedInterval residual_at_ceil;

  friend bool operator==(const StationarityEntry& a, const StationarityEntry& b) {
    return a.p == b.p && a.alpha == b.alpha && a.n0 == b.n0 &&
           a.coprime_part == b.coprime_part && a.local_part == b.local_part &&
           a.paper_delta_loglog == b.paper_delta_loglog &&
           a.exact_delta_loglog == b.exact_delta_loglog &&
           a.delta_sigma_ratio == b.delta_sigma_ratio && a.delta_f == b.delta_f &&
           a.alpha_star == b.alpha_star && a.alpha_floor == b.alpha_floor &&
           a.residual_at_floor == b.residual_at_floor && a.alpha_ceil == b.alpha_ceil &&
           a.residual_at_ceil == b.residual_at_ceil;
  }
};

struct StationarityReport {
  mpz_class n;
  Factorization factorization;
  std::vector<StationarityEntry> entries;  // one per prime of n, ascending
  bool kappa_check = false;                // largest prime enters to the first power

  friend bool operator==(const StationarityReport& a, const StationarityReport& b) {
    return a.n == b.n && a.factorization == b.factorization && a.entries == b.entries &&
           a.kappa_check == b.kappa_check;
  }
};

inline StationarityReport build_report(const mpz_class& n,
                                       mpfr_prec_t prec = kDefaultPrecision) {
  if (n < 3) throw std::domain_error("build_report: n must be >= 3");
  StationarityReport rep;
  rep.n = n;
  rep.factorization = factorize(n);
  rep.kappa_check = rep.factorization.largest_prime_exponent() == 1;
  const ExactRational sr = sigma_ratio(rep.factorization);
  const CertifiedInterval ln_n = interval_ln(integer_to_interval(n, prec));

  for (const auto& e : rep.factorization.entries()) {
    StationarityEntry ent;
    ent.p = e.prime;
    ent.alpha = e.exponent;
    mpz_class pw;
    mpz_pow_ui(pw.get_mpz_t(), e.prime.get_mpz_t(), e.exponent);
    ent.n0 = n / pw;
    ent.coprime_part = detail::coprime_part(rep.factorization, e.prime);
    ent.local_part = detail::local_part(e.prime, e.exponent);
    ent.paper_delta_loglog = ReportedInterval::of(paper_delta_loglog(n, e.prime, prec));
    if (n / e.prime >= 3)
      ent.exact_delta_loglog = ReportedInterval::of(exact_delta_loglog(n, e.prime, prec));
    ent.delta_sigma_ratio = delta_sigma_ratio(rep.factorization, e.prime);
    ent.delta_f = ReportedInterval::of(
        stationarity_residual_at(sr, ln_n, e.prime, e.exponent, prec));
    CertifiedInterval astar = alpha_star(rep.factorization, e.prime, prec);
    ent.alpha_star = ReportedInterval::of(astar);
    const double mid = astar.mid_double();
    ent.alpha_floor = std::max(0L, static_cast<long>(std::floor(mid)));
    ent.alpha_ceil = std::max(ent.alpha_floor, static_cast<long>(std::ceil(mid)));
    ent.residual_at_floor = ReportedInterval::of(stationarity_residual_at(
        sr, ln_n, e.prime, static_cast<unsigned>(ent.alpha_floor), prec));
    ent.residual_at_ceil = ReportedInterval::of(stationarity_residual_at(
        sr, ln_n, e.prime, static_cast<unsigned>(ent.alpha_ceil), prec));
    rep.entries.push_back(std::move(ent));
  }
  return rep;
}

}  // namespace robin
