#include <catch2/catch_amalgamated.hpp>

#include "oracle.hpp"
#include "robin/chebyshev.hpp"

using robin::CheckResult;
using robin::ExactRational;
using robin::Factorization;
using robin::factorize;
using robin::half_prime_claim_check;
using robin::is_prime_complete;
using robin::theta;
using robin::theta_bound_check;
using robin::ThetaValue;

TEST_CASE("theta at small arguments") {
  auto t1 = theta(1);
  CHECK(t1.prime_count == 0);
  CHECK(t1.theta.contains(ExactRational(0)));
  CHECK(t1.theta.width_double() == 0.0);

  auto t2 = theta(2);
  CHECK(t2.prime_count == 1);
  CHECK(oracle::ln(ExactRational(2)).inside(t2.theta));

  auto t10 = theta(10);
  CHECK(t10.prime_count == 4);
  CHECK(oracle::ln(ExactRational(210)).inside(t10.theta));  // ln(2*3*5*7)
  CHECK_THAT(t10.theta.mid_double(), Catch::Matchers::WithinAbs(5.34710753071747, 1e-12));

  CHECK_THROWS_AS(theta(0), std::domain_error);
}

TEST_CASE("theta equals the log of the primorial") {
  auto t13 = theta(13);
  CHECK(t13.prime_count == 6);
  CHECK(oracle::ln(ExactRational(2L * 3 * 5 * 7 * 11 * 13)).inside(t13.theta));
}

TEST_CASE("theta is monotone in x") {
  double prev = 0;
  for (std::uint64_t x : {2ULL, 10ULL, 100ULL, 1000ULL, 10000ULL}) {
    auto tv = theta(x);
    CHECK(tv.theta.lo_double() >= prev);
    prev = tv.theta.lo_double();
  }
}

TEST_CASE("theta is deterministic across worker counts") {
  auto a = theta(20'000'000, robin::kDefaultPrecision, 1);
  auto b = theta(20'000'000, robin::kDefaultPrecision, 4);
  CHECK(robin::decimal_lo(a.theta) == robin::decimal_lo(b.theta));
  CHECK(robin::decimal_hi(a.theta) == robin::decimal_hi(b.theta));
  CHECK(a.prime_count == b.prime_count);
}

TEST_CASE("theta desk-scale ratio sanity") {
  auto tv = theta(10'000);
  // theta(10^4) = 9895.99... so the ratio sits just below 1
  CHECK(tv.theta.lo_double() / 10'000 > 0.98);
  CHECK(tv.theta.hi_double() / 10'000 < 1.0);
}

TEST_CASE("theta_over_primes matches theta pointwise") {
  std::uint64_t seen = 0;
  robin::theta_over_primes(100, robin::kDefaultPrecision,
                           [&](std::uint64_t p, const robin::CertifiedInterval& th,
                               std::uint64_t count) {
    ++seen;
    CHECK(count == seen);
    auto direct = theta(p);
    CHECK(direct.prime_count == count);
    CHECK(th.intersects(direct.theta));
  });
  CHECK(seen == 25);  // pi(100)
}

TEST_CASE("is_prime_complete") {
  CHECK(is_prime_complete(factorize(5040)));  // 2^4 3^2 5 7
  CHECK_FALSE(is_prime_complete(factorize(28)));  // missing 3 and 5
  CHECK(is_prime_complete(Factorization()));      // n = 1, vacuously
  CHECK(is_prime_complete(factorize(2)));
  CHECK(is_prime_complete(factorize(4)));
  CHECK(is_prime_complete(factorize(6)));
  CHECK(is_prime_complete(factorize(210)));
  CHECK_FALSE(is_prime_complete(factorize(15)));  // missing 2
}

TEST_CASE("theta_bound_check") {
  CHECK(theta_bound_check(factorize(5040)) == CheckResult::Holds);
  // 210 = exp(theta(7)) exactly; the exponent-space comparison certifies it
  CHECK(theta_bound_check(factorize(210)) == CheckResult::Holds);
  CHECK(theta_bound_check(factorize(28)) == CheckResult::NotApplicable);
  CHECK(theta_bound_check(Factorization()) == CheckResult::Holds);
  // prime-complete numbers can never fail: spot-check a spread
  for (unsigned long n : {2UL, 4UL, 6UL, 12UL, 30UL, 360UL, 2310UL, 720720UL}) {
    auto f = factorize(n);
    if (is_prime_complete(f)) CHECK(theta_bound_check(f) == CheckResult::Holds);
  }
}

TEST_CASE("half_prime_claim_check") {
  CHECK(half_prime_claim_check(2) == CheckResult::Fails);  // theta(2) = 0.693 < 1
  CHECK(half_prime_claim_check(3) == CheckResult::Holds);  // 1.79 > 1.5
  CHECK(half_prime_claim_check(101) == CheckResult::Holds);
  CHECK_THROWS_AS(half_prime_claim_check(8), std::domain_error);
}

TEST_CASE("half-prime claim holds for every prime in [3, 10^4], fails only at 2") {
  std::uint64_t holds = 0, fails = 0;
  robin::theta_over_primes(10'000, robin::kDefaultPrecision,
                           [&](std::uint64_t p, const robin::CertifiedInterval& th,
                               std::uint64_t) {
    ExactRational half(mpz_class(static_cast<unsigned long>(p)), mpz_class(2));
    bool ok = mpfr_cmp_q(th.lo_raw(), half.raw().get_mpq_t()) > 0;
    if (ok) ++holds;
    else {
      ++fails;
      CHECK(p == 2);  // the single recorded exception
    }
  });
  CHECK(fails == 1);
  CHECK(holds == 1228);  // pi(10^4) - 1
}
