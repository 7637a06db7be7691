#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracle.hpp"
#include "robin/chebyshev.hpp"
#include "robin/stationarity.hpp"

using robin::alpha_star;
using robin::build_report;
using robin::CertifiedInterval;
using robin::certified_sign;
using robin::delta_prime_power;
using robin::delta_sigma_ratio;
using robin::exact_delta_loglog;
using robin::ExactRational;
using robin::factorize;
using robin::hjk_rhs;
using robin::implied_sigma_ratio;
using robin::paper_delta_loglog;
using robin::resummed_identity_check;
using robin::sigma;
using robin::sigma_ratio;
using robin::SignVerdict;
using robin::stationarity_residual;

namespace {
std::mt19937_64 rng(0x5eed0004);
}

TEST_CASE("delta_prime_power") {
  CHECK(delta_prime_power(2, 2) == 2);
  CHECK(delta_prime_power(7, 1) == 6);
  CHECK(delta_prime_power(3, 4) == 54);  // 81 - 27
  CHECK_THROWS_AS(delta_prime_power(2, 0), std::domain_error);
}

TEST_CASE("paper_delta_loglog") {
  auto d282 = paper_delta_loglog(28, 2);
  CHECK(oracle::div_pos({ExactRational(1L, 2L), ExactRational(1L, 2L)},
                        oracle::ln(ExactRational(28)))
            .inside(d282));
  CHECK_THAT(d282.mid_double(), Catch::Matchers::WithinAbs(0.150050814250207, 1e-12));

  CHECK_THAT(paper_delta_loglog(28, 7).mid_double(),
             Catch::Matchers::WithinAbs(0.257229967286068, 1e-12));
  CHECK_THAT(paper_delta_loglog(9, 3).mid_double(),
             Catch::Matchers::WithinAbs(0.303413075542279, 1e-12));

  CHECK_THROWS_AS(paper_delta_loglog(28, 3), std::domain_error);  // 3 does not divide 28
  CHECK_THROWS_AS(paper_delta_loglog(2, 2), std::domain_error);   // n < 3
}

TEST_CASE("exact_delta_loglog") {
  auto d282 = exact_delta_loglog(28, 2);
  auto bounds = oracle::sub(oracle::lnln(ExactRational(28)), oracle::lnln(ExactRational(14)));
  CHECK(bounds.inside(d282));
  CHECK_THAT(d282.mid_double(), Catch::Matchers::WithinAbs(0.233212318747306, 1e-12));

  CHECK_THAT(exact_delta_loglog(28, 7).mid_double(),
             Catch::Matchers::WithinAbs(0.876999840046390, 1e-12));

  // ln ln 9 - ln ln 3 collapses to exactly ln 2 because ln 9 = 2 ln 3
  auto d93 = exact_delta_loglog(9, 3);
  CHECK(oracle::ln(ExactRational(2)).inside(d93));

  CHECK_THROWS_AS(exact_delta_loglog(6, 3), std::domain_error);  // 6/3 = 2 < 3
  CHECK_THROWS_AS(exact_delta_loglog(28, 5), std::domain_error);
}

TEST_CASE("chain-rule form is dominated by the exact difference") {
  // ln p > 1 - 1/p makes the true finite difference strictly larger; the
  // intervals are tight enough to certify it pointwise
  for (unsigned long n = 6; n <= 400; ++n) {
    const auto fac = factorize(n);
    for (const auto& e : fac.entries()) {
      if (mpz_class(n) / e.prime < 3) continue;
      auto exact = exact_delta_loglog(n, e.prime);
      auto paper = paper_delta_loglog(n, e.prime);
      CHECK(exact.certainly_greater_than(paper));
    }
  }
}

TEST_CASE("delta_sigma_ratio examples") {
  CHECK(delta_sigma_ratio(mpz_class(28), mpz_class(2)) == ExactRational(2L, 7L));
  CHECK(delta_sigma_ratio(mpz_class(28), mpz_class(7)) == ExactRational(1L, 4L));
  for (long p : {2L, 3L, 5L, 97L})
    CHECK(delta_sigma_ratio(mpz_class(p), mpz_class(p)) == ExactRational(1L, p));
  CHECK_THROWS_AS(delta_sigma_ratio(mpz_class(28), mpz_class(3)), std::domain_error);
}

TEST_CASE("delta_sigma_ratio equals the literal two-point difference") {
  std::uniform_int_distribution<std::uint64_t> dist(2, 1'000'000);
  for (int i = 0; i < 1'000; ++i) {
    mpz_class n(static_cast<unsigned long>(dist(rng)));
    auto f = factorize(n);
    const auto& entry = f.entries()[rng() % f.kappa()];
    mpz_class p = entry.prime;
    mpz_class reduced = n / p;
    ExactRational direct =
        ExactRational(sigma(n), n) -
        (reduced == 1 ? ExactRational(1) : ExactRational(sigma(reduced), reduced));
    CHECK(delta_sigma_ratio(f, p) == direct);
  }
}

TEST_CASE("stationarity_residual examples") {
  auto r282 = stationarity_residual(mpz_class(28), mpz_class(2));
  auto bounds = oracle::sub(
      oracle::div_pos(oracle::mul_pos(oracle::exp_gamma(),
                                      {ExactRational(1L, 2L), ExactRational(1L, 2L)}),
                      oracle::ln(ExactRational(28))),
      {ExactRational(2L, 7L), ExactRational(2L, 7L)});
  CHECK(bounds.inside(r282));
  CHECK_THAT(r282.mid_double(), Catch::Matchers::WithinAbs(-0.0184629191562723, 1e-10));

  auto r63 = stationarity_residual(mpz_class(6), mpz_class(3));
  CHECK_THAT(r63.mid_double(), Catch::Matchers::WithinAbs(0.162690295425103, 1e-10));

  CHECK_THROWS_AS(stationarity_residual(mpz_class(28), mpz_class(5)), std::domain_error);
}

TEST_CASE("residual assembled from parts lands on the same value") {
  for (unsigned long n : {28UL, 5040UL, 720720UL}) {
    const auto fac = factorize(n);
    for (const auto& e : fac.entries()) {
      auto direct = stationarity_residual(mpz_class(n), e.prime);
      auto assembled =
          robin::Constants::at().exp_gamma * paper_delta_loglog(n, e.prime) -
          robin::rational_to_interval(delta_sigma_ratio(mpz_class(n), e.prime));
      CHECK(direct.intersects(assembled));
      CHECK(assembled.width_double() < 1e-30);
      CHECK(direct.width_double() < 1e-30);
    }
  }
}

TEST_CASE("resummed identity") {
  auto both22 = resummed_identity_check(2, 2);
  CHECK(both22.first == ExactRational(7L, 2L));
  CHECK(both22.second == ExactRational(7L, 2L));
  auto both71 = resummed_identity_check(7, 1);
  CHECK(both71.first == ExactRational(48L, 7L));
  CHECK(both71.second == ExactRational(48L, 7L));
  // alpha = 1 collapses to p - 1/p
  for (long p : {2L, 3L, 5L, 11L, 97L}) {
    auto both = resummed_identity_check(p, 1);
    CHECK(both.first == ExactRational(p * p - 1, p));
    CHECK(both.first == both.second);
  }
  for (unsigned long p : {2UL, 3UL, 5UL, 7UL, 11UL, 97UL})
    for (unsigned a = 1; a <= 20; ++a) {
      auto both = resummed_identity_check(p, a);
      CHECK(both.first == both.second);
    }
  CHECK_THROWS_AS(resummed_identity_check(2, 0), std::domain_error);
  CHECK_THROWS_AS(resummed_identity_check(4, 1), std::domain_error);
}

TEST_CASE("alpha_star at 5040") {
  auto a2 = alpha_star(mpz_class(5040), mpz_class(2));
  // oracle: log2(e^-gamma (19344/5040) ln 5040 + 1/2)
  auto inner = oracle::add(
      oracle::mul_pos(oracle::mul_pos(oracle::exp_neg_gamma(),
                                      {ExactRational(19344L, 5040L),
                                       ExactRational(19344L, 5040L)}),
                      oracle::ln(ExactRational(5040))),
      {ExactRational(1L, 2L), ExactRational(1L, 2L)});
  auto expect = oracle::div_pos(oracle::ln(inner), oracle::ln(ExactRational(2)));
  CHECK(expect.inside(a2));
  CHECK_THAT(a2.mid_double(), Catch::Matchers::WithinAbs(4.23811184013806, 1e-10));

  auto a7 = alpha_star(mpz_class(5040), mpz_class(7));
  CHECK_THAT(a7.mid_double(), Catch::Matchers::WithinAbs(1.49982699904800, 1e-10));

  // the paper's monotonicity: higher p, lower alpha*
  double prev = a2.mid_double();
  for (long p : {3L, 5L, 7L, 11L, 13L}) {
    double mid = alpha_star(mpz_class(5040), mpz_class(p)).mid_double();
    CHECK(mid < prev);
    prev = mid;
  }

  CHECK_THROWS_AS(alpha_star(mpz_class(2), mpz_class(2)), std::domain_error);
  CHECK_THROWS_AS(alpha_star(mpz_class(5040), mpz_class(4)), std::domain_error);
}

TEST_CASE("implied_sigma_ratio") {
  auto i7 = implied_sigma_ratio(mpz_class(5041), mpz_class(7));
  auto bounds = oracle::div_pos(
      oracle::mul_pos(oracle::exp_gamma(),
                      {ExactRational(48L, 7L), ExactRational(48L, 7L)}),
      oracle::ln(ExactRational(5041)));
  CHECK(bounds.inside(i7));
  CHECK_THAT(i7.mid_double(), Catch::Matchers::WithinAbs(1.43255749450656, 1e-10));
  CHECK_THAT(implied_sigma_ratio(mpz_class(5041), mpz_class(2)).mid_double(),
             Catch::Matchers::WithinAbs(0.313371951923309, 1e-10));
  // scaling: the (p^2 - 1) factor is linear in the formula
  auto doubled = robin::Constants::at().exp_gamma *
                 robin::rational_to_interval(ExactRational(96L, 7L)) /
                 robin::interval_ln(robin::integer_to_interval(5041));
  CHECK((i7 * CertifiedInterval::of_long(2)).intersects(doubled));
  CHECK_THROWS_AS(implied_sigma_ratio(mpz_class(2), mpz_class(7)), std::domain_error);
}

TEST_CASE("hjk_rhs") {
  auto ln5041 = robin::interval_ln(robin::integer_to_interval(5041));
  auto h7 = hjk_rhs(ln5041, mpz_class(7));
  CHECK(certified_sign(h7) == SignVerdict::Positive);
  CHECK_THAT(h7.mid_double(), Catch::Matchers::WithinAbs(142.292761554979, 1e-9));

  auto half5 = robin::rational_to_interval(ExactRational(5L, 2L));
  auto h5 = hjk_rhs(half5, mpz_class(5));
  CHECK(certified_sign(h5) == SignVerdict::Negative);
  CHECK_THAT(h5.mid_double(), Catch::Matchers::WithinAbs(-22.3459861642509, 1e-9));

  // ln n = theta(13): positive
  auto th13 = robin::theta(13).theta;
  CHECK(certified_sign(hjk_rhs(th13, mpz_class(13))) == SignVerdict::Positive);

  // boundary ln n = 1 is allowed: the first term vanishes exactly and the
  // result is -3 e^gamma
  auto one = CertifiedInterval::of_long(1);
  auto h2 = hjk_rhs(one, mpz_class(2));
  CHECK(certified_sign(h2) == SignVerdict::Negative);
  CHECK_THAT(h2.mid_double(), Catch::Matchers::WithinAbs(-5.34321725397059, 1e-12));

  CHECK_THROWS_AS(hjk_rhs(CertifiedInterval::of_decimal("0.5", "2"), mpz_class(5)),
                  std::domain_error);
  CHECK_THROWS_AS(hjk_rhs(ln5041, mpz_class(6)), std::domain_error);
}

TEST_CASE("build_report on the appendix example") {
  auto rep = build_report(28);
  REQUIRE(rep.entries.size() == 2);
  CHECK(rep.kappa_check);  // 7 enters to the first power

  const auto& e2 = rep.entries[0];
  CHECK(e2.p == 2);
  CHECK(e2.alpha == 2);
  CHECK(e2.n0 == 7);
  CHECK(e2.coprime_part == ExactRational(8L, 7L));  // A = (1+7)/7
  CHECK(e2.local_part == ExactRational(7L, 4L));    // u = (1+2+4)/4
  CHECK(e2.delta_sigma_ratio == ExactRational(2L, 7L));

  const auto& e7 = rep.entries[1];
  CHECK(e7.p == 7);
  CHECK(e7.coprime_part == ExactRational(7L, 4L));
  CHECK(e7.local_part == ExactRational(8L, 7L));
}

TEST_CASE("build_report kappa checks") {
  CHECK(build_report(5040).kappa_check);        // 5040 = 2^4 3^2 5 7
  CHECK_FALSE(build_report(9).kappa_check);     // 3^2
  CHECK(build_report(9).entries.size() == 1);
  CHECK_THROWS_AS(build_report(2), std::domain_error);
}

TEST_CASE("report decomposition: A times u is sigma(n)/n") {
  for (unsigned long n : {28UL, 9UL, 5040UL, 5041UL, 10080UL, 123456UL}) {
    auto rep = build_report(n);
    auto sr = sigma_ratio(rep.factorization);
    for (const auto& e : rep.entries) CHECK(e.coprime_part * e.local_part == sr);
  }
}

TEST_CASE("report alpha_star brackets and residual signs") {
  auto rep = build_report(5040);
  const auto& e2 = rep.entries[0];
  REQUIRE(e2.p == 2);
  CHECK(e2.alpha_floor == 4);  // alpha* ~ 4.238, actual exponent is 4
  CHECK(e2.alpha_ceil == 5);
  // the subtracted local term shrinks as alpha grows, so the residual is
  // increasing in alpha and brackets zero at floor/ceil of alpha*
  CHECK(certified_sign(e2.residual_at_floor.value) == SignVerdict::Negative);
  CHECK(certified_sign(e2.residual_at_ceil.value) == SignVerdict::Positive);
}

TEST_CASE("hjk consistency with implied_sigma_ratio") {
  // implied - sigma/n = (p+1) * residual, exactly, when alpha_kappa = 1
  for (unsigned long n : {28UL, 5040UL, 30UL, 210UL}) {
    auto f = factorize(n);
    REQUIRE(f.largest_prime_exponent() == 1);
    mpz_class p = f.largest_prime();
    auto lhs = implied_sigma_ratio(mpz_class(n), p) -
               robin::rational_to_interval(sigma_ratio(f));
    auto rhs = robin::integer_to_interval(mpz_class(p + 1)) *
               stationarity_residual(mpz_class(n), p);
    CHECK(lhs.intersects(rhs));
    // and if the residual interval contained zero, implied would meet
    // sigma(n)/n; here both sides certify the same nonzero sign instead
    CHECK(certified_sign(lhs) == certified_sign(rhs));
  }
}
