#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "robin/report_io.hpp"

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

// Runs the CLI through the shell, capturing stdout; stderr is discarded
// unless the command redirects it.
RunResult run(const std::string& args, const std::string& env_prefix = "") {
  std::string cmd = env_prefix + std::string(ROBIN_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf;
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
  int status = pclose(pipe);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, out};
}

}  // namespace

TEST_CASE("check exit codes form a stable contract") {
  CHECK(run("check 5041").exit_code == 0);   // certified positive
  CHECK(run("check 5040").exit_code == 1);   // certified negative
  CHECK(run("check 2").exit_code == 64);     // domain error -> usage
  CHECK(run("check abc").exit_code == 64);
  CHECK(run("check").exit_code == 64);
  CHECK(run("bogus-subcommand").exit_code == 64);
  CHECK(run("--help").exit_code == 0);
}

TEST_CASE("check text output") {
  auto r = run("check 5041");
  CHECK(r.out.find("sigma(n)/n = 5113/5041") != std::string::npos);
  CHECK(r.out.find("sign       = positive") != std::string::npos);
  CHECK(r.out.find("precision  = 128 bits") != std::string::npos);
}

TEST_CASE("check json output") {
  auto r = run("check 5041 --format json");
  auto j = robin::json::parse(r.out);
  CHECK(j.at("sign") == "positive");
  CHECK(j.at("sigma").at("num") == "5113");
  CHECK(j.at("sigma").at("den") == "5041");
  CHECK(j.at("n") == "5041");
}

TEST_CASE("environment variables mirror flags, flags win") {
  auto env_json = run("check 5041", "ROBIN_FORMAT=json ");
  CHECK_NOTHROW(robin::json::parse(env_json.out));
  auto flag_wins = run("check 5041 --format text", "ROBIN_FORMAT=json ");
  CHECK(flag_wins.out.find("sign       = positive") != std::string::npos);
}

TEST_CASE("scan usage and exit codes") {
  CHECK(run("scan 10 3").exit_code == 64);   // lo > hi
  CHECK(run("scan 2 10").exit_code == 64);   // lo < 3
  CHECK(run("scan 5041 5100").exit_code == 0);
  CHECK(run("scan 3 10").exit_code == 1);    // violations present
}

TEST_CASE("scan csv output parses back") {
  auto r = run("scan 3 5040 --format csv --workers 2");
  CHECK(r.exit_code == 1);
  auto rep = robin::scan_report_from_csv(r.out);
  CHECK(rep.lo == 3);
  CHECK(rep.hi == 5040);
  CHECK(rep.violations.back().n == 5040);
  CHECK(rep.indeterminates.empty());
  // 5040 is the last violation of Robin's inequality
  CHECK(rep.min_f.n == 4);
}

TEST_CASE("scan writes report files") {
  std::string path = "/tmp/robin_cli_test_scan.json";
  std::remove(path.c_str());
  auto r = run("scan 5041 5100 --format json --output " + path);
  CHECK(r.exit_code == 0);
  std::ifstream f(path);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  auto rep = robin::scan_report_from_json(robin::json::parse(ss.str()));
  CHECK(rep.violations.empty());
  std::remove(path.c_str());
}

TEST_CASE("scan to unwritable path reports an I/O error") {
  CHECK(run("scan 5041 5050 --output /nonexistent-dir/x.csv").exit_code == 74);
}

TEST_CASE("stationary output") {
  auto r = run("stationary 28 --format json");
  CHECK(r.exit_code == 0);
  auto j = robin::json::parse(r.out);
  auto rep = robin::stationarity_report_from_json(j);
  REQUIRE(rep.entries.size() == 2);
  CHECK(rep.entries[0].coprime_part == robin::ExactRational(8L, 7L));
  CHECK(rep.entries[0].local_part == robin::ExactRational(7L, 4L));

  auto nine = run("stationary 9 --format json");
  auto jrep = robin::stationarity_report_from_json(robin::json::parse(nine.out));
  CHECK(jrep.entries.size() == 1);
  CHECK_FALSE(jrep.kappa_check);

  CHECK(run("stationary 2").exit_code == 64);

  auto text = run("stationary 5040");
  CHECK(text.out.find("kappa_check") != std::string::npos);
  CHECK(text.out.find("alpha*") != std::string::npos);
}

TEST_CASE("theta output") {
  auto r = run("theta 10 --format csv");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("x,theta_lo,theta_hi,prime_count\n10,5.34710753071746", 0) == 0);
  CHECK(r.out.find(",4\n") != std::string::npos);
}

TEST_CASE("candidates output") {
  auto r = run("candidates --limit 20 --format json");
  CHECK(r.exit_code == 0);
  auto rows = robin::candidate_rows_from_json(robin::json::parse(r.out));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].n == "1");
  CHECK(rows[4].n == "12");

  auto eps = run("candidates --epsilon 1/5 --format json");
  auto erows = robin::candidate_rows_from_json(robin::json::parse(eps.out));
  REQUIRE(erows.size() == 1);
  CHECK(erows[0].n == "12");
  REQUIRE(erows[0].epsilon.has_value());
  CHECK(*erows[0].epsilon == robin::ExactRational(1L, 5L));

  auto grid = run("candidates --grid 8 --format json");
  auto grows = robin::candidate_rows_from_json(robin::json::parse(grid.out));
  CHECK(grows.size() >= 3);  // deduplicated by n

  CHECK(run("candidates").exit_code == 64);
  CHECK(run("candidates --limit 10 --epsilon 1/5").exit_code == 64);  // exclusive
}

TEST_CASE("verify-hjk output") {
  auto r = run("verify-hjk 20 --format csv");
  CHECK(r.exit_code == 0);
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  CHECK(line == "p,theta_lo,theta_hi,hjk_sign_at_theta_bound,hjk_sign_at_half_prime");
  std::map<std::string, std::pair<std::string, std::string>> rows;
  while (std::getline(is, line)) {
    auto f = robin::detail::split_csv_line(line);
    REQUIRE(f.size() == 5);
    rows[f[0]] = {f[3], f[4]};
  }
  REQUIRE(rows.size() == 8);  // primes up to 20
  for (const auto& [p, signs] : rows) CHECK(signs.first == "positive");
  for (const std::string p : {"2", "3", "5", "7", "11", "13"})
    CHECK(rows.at(p).second == "negative");
  for (const std::string p : {"17", "19"}) CHECK(rows.at(p).second == "positive");
}
