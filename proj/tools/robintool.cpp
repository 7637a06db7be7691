// Command-line surface for the certified Robin-criterion toolkit.
//
// Exit codes: 0 success (for `check`: certified positive), 1 certified
// negative / scan found violations, 2 indeterminate, 64 usage or domain
// error, 74 I/O error.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "robin/robin.hpp"

namespace {

struct GlobalConfig {
  long precision_bits = robin::kDefaultPrecision;
  unsigned long long block_size = robin::kDefaultBlockSize;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::string format = "text";
  std::string output;  // empty writes to stdout
};

void write_report(const GlobalConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open output file: " + cfg.output);
  f << text;
  f.flush();
  if (!f.good()) throw std::ios_base::failure("write failed: " + cfg.output);
}

// Summaries go to stderr when the report itself occupies stdout.
std::ostream& summary_stream(const GlobalConfig& cfg) {
  return cfg.output.empty() ? std::cerr : std::cout;
}

mpz_class parse_integer(const std::string& s) {
  try {
    return mpz_class(s);
  } catch (const std::invalid_argument&) {
    throw std::domain_error("not an integer: '" + s + "'");
  }
}

std::string interval_str(const robin::CertifiedInterval& v) {
  return "[" + robin::decimal_lo(v) + ", " + robin::decimal_hi(v) + "]";
}

// ------------------------------------------------------------------ check --

int cmd_check(const GlobalConfig& cfg, const std::string& n_str) {
  robin::EvalOptions opts;
  opts.precision_bits = cfg.precision_bits;
  const robin::RobinEvaluation ev = robin::evaluate_F(parse_integer(n_str), opts);

  std::ostringstream os;
  if (cfg.format == "json") {
    robin::json j{{"report", "check"},
                  {"n", ev.n.get_str()},
                  {"sigma", robin::detail::rational_json(ev.sigma_ratio)},
                  {"gronwall", robin::detail::interval_json(robin::decimal_lo(ev.gronwall_term),
                                                            robin::decimal_hi(ev.gronwall_term))},
                  {"F", robin::detail::interval_json(robin::decimal_lo(ev.f),
                                                     robin::decimal_hi(ev.f))},
                  {"sign", robin::to_string(ev.sign)},
                  {"precision_bits", ev.precision_bits}};
    os << j.dump(2) << '\n';
  } else if (cfg.format == "csv") {
    os << robin::kScanCsvHeader << '\n'
       << ev.n << ',' << ev.sigma_ratio.numerator() << ',' << ev.sigma_ratio.denominator()
       << ',' << robin::decimal_lo(ev.f) << ',' << robin::decimal_hi(ev.f) << ','
       << robin::to_string(ev.sign) << '\n';
  } else {
    os << "n          = " << ev.n << '\n'
       << "sigma(n)/n = " << ev.sigma_ratio << '\n'
       << "gronwall   = " << interval_str(ev.gronwall_term) << '\n'
       << "F          = " << interval_str(ev.f) << '\n'
       << "sign       = " << robin::to_string(ev.sign) << '\n'
       << "precision  = " << ev.precision_bits << " bits\n";
  }
  write_report(cfg, os.str());
  switch (ev.sign) {
    case robin::SignVerdict::Positive: return 0;
    case robin::SignVerdict::Negative: return 1;
    default: return 2;
  }
}

// ------------------------------------------------------------------- scan --

std::string scan_text(const robin::ScanReport& r) {
  std::ostringstream os;
  os << "scan range [" << r.lo << ", " << r.hi << "]\n"
     << "violations: " << r.violations.size() << '\n';
  for (const auto& e : r.violations)
    os << "  n=" << e.n << "  sigma(n)/n=" << e.sigma_ratio << "  F=[" << e.f_lo << ", "
       << e.f_hi << "]\n";
  os << "indeterminate: " << r.indeterminates.size() << '\n';
  for (const auto& e : r.indeterminates)
    os << "  n=" << e.n << "  sigma(n)/n=" << e.sigma_ratio << "  F=[" << e.f_lo << ", "
       << e.f_hi << "]\n";
  os << "min F at n=" << r.min_f.n << "  sigma(n)/n=" << r.min_f.sigma_ratio << "  F=["
     << r.min_f.f_lo << ", " << r.min_f.f_hi << "]  sign=" << robin::to_string(r.min_f.sign)
     << '\n';
  return os.str();
}

int cmd_scan(const GlobalConfig& cfg, std::uint64_t lo, std::uint64_t hi) {
  robin::ScanOptions opts;
  opts.precision_bits = cfg.precision_bits;
  opts.block_size = cfg.block_size;
  opts.workers = cfg.workers;
  const robin::ScanReport report = robin::scan_range(lo, hi, opts);

  if (cfg.format == "json") write_report(cfg, robin::to_json(report).dump(2) + "\n");
  else if (cfg.format == "csv") write_report(cfg, robin::to_csv(report));
  else write_report(cfg, scan_text(report));

  summary_stream(cfg) << "scan [" << lo << ", " << hi << "]: " << report.violations.size()
                      << " violations, " << report.indeterminates.size()
                      << " indeterminate; min F at n=" << report.min_f.n << " with F in ["
                      << report.min_f.f_lo << ", " << report.min_f.f_hi << "]\n";
  return (report.violations.empty() && report.indeterminates.empty()) ? 0 : 1;
}

// -------------------------------------------------------------- stationary --

std::string stationary_text(const robin::StationarityReport& r) {
  std::ostringstream os;
  os << "n = " << r.n << " = ";
  bool first = true;
  for (const auto& e : r.factorization.entries()) {
    if (!first) os << " * ";
    os << e.prime;
    if (e.exponent > 1) os << '^' << e.exponent;
    first = false;
  }
  os << "\nkappa_check (largest prime enters to the first power): "
     << (r.kappa_check ? "true" : "false") << '\n'
     << "note: " << robin::kAlphaStarConvention << "\n\n";
  for (const auto& e : r.entries) {
    os << "p = " << e.p << ", alpha = " << e.alpha << ", n0 = " << e.n0 << '\n'
       << "  A = sigma(n0)/n0      = " << e.coprime_part << '\n'
       << "  u = sigma(p^a)/p^a    = " << e.local_part << '\n'
       << "  chain-rule d(lnln n)  = [" << e.paper_delta_loglog.lo << ", "
       << e.paper_delta_loglog.hi << "]\n";
    if (e.exact_delta_loglog)
      os << "  exact    d(lnln n)    = [" << e.exact_delta_loglog->lo << ", "
         << e.exact_delta_loglog->hi << "]\n";
    else
      os << "  exact    d(lnln n)    = (undefined: n/p < 3)\n";
    os << "  d(sigma/n)            = " << e.delta_sigma_ratio << '\n'
       << "  residual dF/da        = [" << e.delta_f.lo << ", " << e.delta_f.hi << "]\n"
       << "  alpha*                = [" << e.alpha_star.lo << ", " << e.alpha_star.hi << "]\n"
       << "  residual at alpha=" << std::setw(2) << e.alpha_floor << "  = ["
       << e.residual_at_floor.lo << ", " << e.residual_at_floor.hi << "]\n"
       << "  residual at alpha=" << std::setw(2) << e.alpha_ceil << "  = ["
       << e.residual_at_ceil.lo << ", " << e.residual_at_ceil.hi << "]\n";
  }
  return os.str();
}

int cmd_stationary(const GlobalConfig& cfg, const std::string& n_str) {
  const robin::StationarityReport report =
      robin::build_report(parse_integer(n_str), cfg.precision_bits);
  if (cfg.format == "json") write_report(cfg, robin::to_json(report).dump(2) + "\n");
  else if (cfg.format == "csv") write_report(cfg, robin::to_csv(report));
  else write_report(cfg, stationary_text(report));
  return 0;
}

// ------------------------------------------------------------------ theta --

int cmd_theta(const GlobalConfig& cfg, std::uint64_t x) {
  const robin::ThetaValue tv = robin::theta(x, cfg.precision_bits, cfg.workers);
  std::ostringstream os;
  if (cfg.format == "json") {
    robin::json j{{"report", "theta"},
                  {"x", std::to_string(tv.x)},
                  {"theta", robin::detail::interval_json(robin::decimal_lo(tv.theta),
                                                         robin::decimal_hi(tv.theta))},
                  {"prime_count", tv.prime_count}};
    os << j.dump(2) << '\n';
  } else if (cfg.format == "csv") {
    os << "x,theta_lo,theta_hi,prime_count\n"
       << tv.x << ',' << robin::decimal_lo(tv.theta) << ',' << robin::decimal_hi(tv.theta)
       << ',' << tv.prime_count << '\n';
  } else {
    os << "theta(" << tv.x << ") = " << interval_str(tv.theta) << '\n'
       << "primes <= " << tv.x << ": " << tv.prime_count << '\n';
  }
  write_report(cfg, os.str());
  return 0;
}

// ------------------------------------------------------------- candidates --

std::string candidates_text(const std::vector<robin::CandidateRow>& rows) {
  std::ostringstream os;
  for (const auto& r : rows) {
    os << "n = " << r.n;
    if (r.epsilon) os << "  (epsilon = " << *r.epsilon << ")";
    os << "  sigma(n)/n = " << r.sigma_ratio;
    if (r.sign)
      os << "  F = [" << r.f_lo << ", " << r.f_hi << "]  sign = " << robin::to_string(*r.sign);
    else
      os << "  F undefined (n < 3)";
    if (r.boundary_epsilon) os << "  [boundary epsilon]";
    os << '\n';
  }
  return os.str();
}

int cmd_candidates(const GlobalConfig& cfg, std::uint64_t limit, const std::string& eps_str,
                   unsigned grid) {
  robin::EvalOptions opts;
  opts.precision_bits = cfg.precision_bits;
  std::vector<robin::CandidateNumber> found;
  if (limit > 0) {
    found = robin::enumerate_superabundant(limit, opts);
  } else if (!eps_str.empty()) {
    found.push_back(robin::generate_ca(robin::ExactRational::from_string(eps_str), opts));
  } else {
    std::map<mpz_class, robin::CandidateNumber> dedup;
    for (unsigned k = 1; k <= grid; ++k) {
      auto c = robin::generate_ca(robin::ExactRational(1L, static_cast<long>(k)), opts);
      dedup.emplace(c.n, std::move(c));
    }
    for (auto& [n, c] : dedup) found.push_back(std::move(c));
  }
  const auto rows = robin::candidate_rows(found);
  if (cfg.format == "json") write_report(cfg, robin::to_json(rows).dump(2) + "\n");
  else if (cfg.format == "csv") write_report(cfg, robin::to_csv(rows));
  else write_report(cfg, candidates_text(rows));
  return 0;
}

// -------------------------------------------------------------- verify-hjk --

int cmd_verify_hjk(const GlobalConfig& cfg, std::uint64_t prime_limit) {
  const mpfr_prec_t prec = cfg.precision_bits;
  const robin::CertifiedInterval ln5041 =
      interval_ln(robin::CertifiedInterval::of_ulong(5041, prec));

  struct Row {
    std::uint64_t p;
    std::string theta_lo, theta_hi;
    robin::SignVerdict theta_bound_sign;
    robin::SignVerdict half_prime_sign;
  };
  std::vector<Row> rows;
  std::uint64_t theta_pos = 0, theta_nonpos = 0, half_pos = 0, half_nonpos = 0;

  robin::theta_over_primes(prime_limit, prec,
                           [&](std::uint64_t p, const robin::CertifiedInterval& th,
                               std::uint64_t) {
    Row row;
    row.p = p;
    row.theta_lo = robin::decimal_lo(th);
    row.theta_hi = robin::decimal_hi(th);
    const mpz_class pz(static_cast<unsigned long>(p));
    // the paper's usable bound: ln n >= theta(p), never below the known
    // threshold ln 5041
    auto bound = interval_max(th, ln5041);
    row.theta_bound_sign = robin::certified_sign(robin::hjk_rhs(bound, pz, prec));
    // the paper's weaker substitution ln n = p/2
    auto half = robin::rational_to_interval(robin::ExactRational(pz, mpz_class(2)), prec);
    row.half_prime_sign = robin::certified_sign(robin::hjk_rhs(half, pz, prec));
    (row.theta_bound_sign == robin::SignVerdict::Positive ? theta_pos : theta_nonpos)++;
    (row.half_prime_sign == robin::SignVerdict::Positive ? half_pos : half_nonpos)++;
    rows.push_back(std::move(row));
  });

  std::ostringstream os;
  if (cfg.format == "json") {
    robin::json items = robin::json::array();
    for (const auto& r : rows)
      items.push_back(robin::json{
          {"p", r.p},
          {"theta", robin::detail::interval_json(r.theta_lo, r.theta_hi)},
          {"hjk_sign_at_theta_bound", robin::to_string(r.theta_bound_sign)},
          {"hjk_sign_at_half_prime", robin::to_string(r.half_prime_sign)}});
    robin::json j{{"report", "verify-hjk"},
                  {"prime_limit", prime_limit},
                  {"rows", items},
                  {"summary",
                   {{"theta_bound_positive", theta_pos},
                    {"theta_bound_nonpositive", theta_nonpos},
                    {"half_prime_positive", half_pos},
                    {"half_prime_nonpositive", half_nonpos}}}};
    os << j.dump(2) << '\n';
  } else if (cfg.format == "csv") {
    os << "p,theta_lo,theta_hi,hjk_sign_at_theta_bound,hjk_sign_at_half_prime\n";
    for (const auto& r : rows)
      os << r.p << ',' << r.theta_lo << ',' << r.theta_hi << ','
         << robin::to_string(r.theta_bound_sign) << ','
         << robin::to_string(r.half_prime_sign) << '\n';
  } else {
    os << "p        hjk sign at ln n = max(theta(p), ln 5041)   hjk sign at ln n = p/2\n";
    for (const auto& r : rows)
      os << std::left << std::setw(8) << r.p << ' ' << std::setw(44)
         << robin::to_string(r.theta_bound_sign) << ' '
         << robin::to_string(r.half_prime_sign) << '\n';
    os << "summary: theta-bound positive " << theta_pos << ", nonpositive " << theta_nonpos
       << "; p/2-bound positive " << half_pos << ", nonpositive " << half_nonpos << '\n';
  }
  write_report(cfg, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified evaluation of Robin's inequality and its exponent-space analysis"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalConfig cfg;
  app.add_option("--precision-bits", cfg.precision_bits, "working precision in bits")
      ->envname("ROBIN_PRECISION_BITS")
      ->check(CLI::Range(64L, 65536L));
  app.add_option("--block-size", cfg.block_size, "sieve block size")
      ->envname("ROBIN_BLOCK_SIZE")
      ->check(CLI::Range(1ULL, 1ULL << 28));
  app.add_option("--workers", cfg.workers, "worker threads for scans/sieves")
      ->envname("ROBIN_WORKERS")
      ->check(CLI::Range(1u, 256u));
  app.add_option("--format", cfg.format, "output format")
      ->envname("ROBIN_FORMAT")
      ->check(CLI::IsMember({"csv", "json", "text"}));
  app.add_option("--output", cfg.output, "write the report to this file")
      ->envname("ROBIN_OUTPUT");

  std::string check_n;
  auto* check = app.add_subcommand("check", "evaluate F(n) with a certified sign");
  check->add_option("n", check_n, "integer >= 3")->required();

  std::uint64_t scan_lo = 0, scan_hi = 0;
  auto* scan = app.add_subcommand("scan", "scan [lo, hi] for violations");
  scan->add_option("lo", scan_lo, "lower bound, >= 3")->required();
  scan->add_option("hi", scan_hi, "upper bound")->required();

  std::string stat_n;
  auto* stationary =
      app.add_subcommand("stationary", "per-prime finite-difference diagnostics");
  stationary->add_option("n", stat_n, "integer >= 3")->required();

  std::uint64_t theta_x = 0;
  auto* theta_cmd = app.add_subcommand("theta", "first Chebyshev function");
  theta_cmd->add_option("x", theta_x, "integer >= 1")->required();

  std::uint64_t cand_limit = 0;
  std::string cand_eps;
  unsigned cand_grid = 60;
  auto* candidates = app.add_subcommand("candidates", "extremal candidate numbers");
  auto* lim_opt = candidates->add_option("--limit", cand_limit,
                                         "enumerate superabundant numbers up to this bound");
  auto* eps_opt = candidates->add_option(
      "--epsilon", cand_eps, "colossally abundant number for one epsilon, e.g. 1/5");
  auto* grid_opt = candidates->add_option(
      "--grid", cand_grid, "colossally abundant survey over epsilon = 1/k, k = 1..K");
  lim_opt->excludes(eps_opt)->excludes(grid_opt);
  eps_opt->excludes(grid_opt);

  std::uint64_t hjk_limit = 0;
  auto* verify = app.add_subcommand(
      "verify-hjk", "tabulate the counter-example identity over primes");
  verify->add_option("prime_limit", hjk_limit, "largest prime to test")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  try {
    if (*check) return cmd_check(cfg, check_n);
    if (*scan) return cmd_scan(cfg, scan_lo, scan_hi);
    if (*stationary) return cmd_stationary(cfg, stat_n);
    if (*theta_cmd) return cmd_theta(cfg, theta_x);
    if (*candidates) {
      if (!*lim_opt && !*eps_opt && !*grid_opt)
        throw std::domain_error("candidates: pass one of --limit, --epsilon, --grid");
      return cmd_candidates(cfg, *lim_opt ? cand_limit : 0, cand_eps, cand_grid);
    }
    if (*verify) return cmd_verify_hjk(cfg, hjk_limit);
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 64;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 64;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 74;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 70;
  }
  return 64;
}
