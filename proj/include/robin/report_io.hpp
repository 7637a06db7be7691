#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "robin/candidates.hpp"
#include "robin/criterion.hpp"
#include "robin/stationarity.hpp"

namespace robin {

using nlohmann::json;

namespace detail {

inline json rational_json(const ExactRational& q) {
  return json{{"num", q.numerator().get_str()}, {"den", q.denominator().get_str()}};
}

inline ExactRational rational_from_json(const json& j) {
  return ExactRational(mpz_class(j.at("num").get<std::string>()),
                       mpz_class(j.at("den").get<std::string>()));
}

inline json interval_json(const std::string& lo, const std::string& hi) {
  return json{{"lo", lo}, {"hi", hi}};
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------- scan ----

inline constexpr const char* kScanCsvHeader = "n,sigma_num,sigma_den,F_lo,F_hi,sign";

inline std::string scan_entry_csv(const ScanEntry& e) {
  std::ostringstream os;
  os << e.n << ',' << e.sigma_ratio.numerator() << ',' << e.sigma_ratio.denominator()
     << ',' << e.f_lo << ',' << e.f_hi << ',' << to_string(e.sign);
  return os.str();
}

// Rows: every violation, then every unresolved point, then the minimum-F row
// last (repeated if it already appeared above).
inline std::string to_csv(const ScanReport& r) {
  std::ostringstream os;
  os << "# robin-scan," << r.lo << ',' << r.hi << '\n' << kScanCsvHeader << '\n';
  for (const auto& e : r.violations) os << scan_entry_csv(e) << '\n';
  for (const auto& e : r.indeterminates) os << scan_entry_csv(e) << '\n';
  os << scan_entry_csv(r.min_f) << '\n';
  return os.str();
}

inline ScanEntry scan_entry_from_fields(const std::vector<std::string>& f) {
  if (f.size() != 6) throw std::invalid_argument("scan CSV: expected 6 columns");
  ScanEntry e;
  e.n = std::stoull(f[0]);
  e.sigma_ratio = ExactRational(mpz_class(f[1]), mpz_class(f[2]));
  e.f_lo = f[3];
  e.f_hi = f[4];
  e.sign = sign_verdict_from_string(f[5]);
  return e;
}

inline ScanReport scan_report_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("# robin-scan,", 0) != 0)
    throw std::invalid_argument("scan CSV: missing range line");
  auto range = detail::split_csv_line(line.substr(2));
  if (range.size() != 3) throw std::invalid_argument("scan CSV: malformed range line");
  ScanReport r;
  r.lo = std::stoull(range[1]);
  r.hi = std::stoull(range[2]);
  if (!std::getline(is, line) || line != kScanCsvHeader)
    throw std::invalid_argument("scan CSV: missing header");
  std::vector<ScanEntry> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    rows.push_back(scan_entry_from_fields(detail::split_csv_line(line)));
  }
  if (rows.empty()) throw std::invalid_argument("scan CSV: missing min_F row");
  r.min_f = rows.back();
  rows.pop_back();
  for (auto& e : rows) {
    if (e.sign == SignVerdict::Negative) r.violations.push_back(std::move(e));
    else if (e.sign == SignVerdict::Indeterminate) r.indeterminates.push_back(std::move(e));
    else throw std::invalid_argument("scan CSV: unexpected positive row");
  }
  return r;
}

inline json to_json(const ScanEntry& e) {
  return json{{"n", std::to_string(e.n)},
              {"sigma", detail::rational_json(e.sigma_ratio)},
              {"F", detail::interval_json(e.f_lo, e.f_hi)},
              {"sign", to_string(e.sign)}};
}

inline ScanEntry scan_entry_from_json(const json& j) {
  ScanEntry e;
  e.n = std::stoull(j.at("n").get<std::string>());
  e.sigma_ratio = detail::rational_from_json(j.at("sigma"));
  e.f_lo = j.at("F").at("lo").get<std::string>();
  e.f_hi = j.at("F").at("hi").get<std::string>();
  e.sign = sign_verdict_from_string(j.at("sign").get<std::string>());
  return e;
}

inline json to_json(const ScanReport& r) {
  json viol = json::array(), indet = json::array();
  for (const auto& e : r.violations) viol.push_back(to_json(e));
  for (const auto& e : r.indeterminates) indet.push_back(to_json(e));
  return json{{"report", "scan"},
              {"range", {{"lo", std::to_string(r.lo)}, {"hi", std::to_string(r.hi)}}},
              {"violations", viol},
              {"indeterminates", indet},
              {"min_F", to_json(r.min_f)}};
}

inline ScanReport scan_report_from_json(const json& j) {
  ScanReport r;
  r.lo = std::stoull(j.at("range").at("lo").get<std::string>());
  r.hi = std::stoull(j.at("range").at("hi").get<std::string>());
  for (const auto& e : j.at("violations")) r.violations.push_back(scan_entry_from_json(e));
  for (const auto& e : j.at("indeterminates"))
    r.indeterminates.push_back(scan_entry_from_json(e));
  r.min_f = scan_entry_from_json(j.at("min_F"));
  return r;
}

// -------------------------------------------------------- stationarity ----

inline constexpr const char* kAlphaStarConvention =
    "for a prime p not dividing n, alpha_star uses A = sigma(n)/n with u = 1";

inline json to_json(const StationarityEntry& e) {
  json j{{"p", e.p.get_str()},
         {"alpha", e.alpha},
         {"n0", e.n0.get_str()},
         {"A", detail::rational_json(e.coprime_part)},
         {"u", detail::rational_json(e.local_part)},
         {"paper_delta_loglog", detail::interval_json(e.paper_delta_loglog.lo,
                                                      e.paper_delta_loglog.hi)},
         {"delta_sigma_ratio", detail::rational_json(e.delta_sigma_ratio)},
         {"delta_F", detail::interval_json(e.delta_f.lo, e.delta_f.hi)},
         {"alpha_star", detail::interval_json(e.alpha_star.lo, e.alpha_star.hi)},
         {"alpha_floor", e.alpha_floor},
         {"residual_at_floor", detail::interval_json(e.residual_at_floor.lo,
                                                     e.residual_at_floor.hi)},
         {"alpha_ceil", e.alpha_ceil},
         {"residual_at_ceil", detail::interval_json(e.residual_at_ceil.lo,
                                                    e.residual_at_ceil.hi)}};
  j["exact_delta_loglog"] =
      e.exact_delta_loglog
          ? detail::interval_json(e.exact_delta_loglog->lo, e.exact_delta_loglog->hi)
          : json(nullptr);
  return j;
}

inline StationarityEntry stationarity_entry_from_json(const json& j) {
  StationarityEntry e;
  e.p = mpz_class(j.at("p").get<std::string>());
  e.alpha = j.at("alpha").get<unsigned>();
  e.n0 = mpz_class(j.at("n0").get<std::string>());
  e.coprime_part = detail::rational_from_json(j.at("A"));
  e.local_part = detail::rational_from_json(j.at("u"));
  auto iv = [](const json& v) {
    return ReportedInterval::parse(v.at("lo").get<std::string>(),
                                   v.at("hi").get<std::string>());
  };
  e.paper_delta_loglog = iv(j.at("paper_delta_loglog"));
  if (!j.at("exact_delta_loglog").is_null())
    e.exact_delta_loglog = iv(j.at("exact_delta_loglog"));
  e.delta_sigma_ratio = detail::rational_from_json(j.at("delta_sigma_ratio"));
  e.delta_f = iv(j.at("delta_F"));
  e.alpha_star = iv(j.at("alpha_star"));
  e.alpha_floor = j.at("alpha_floor").get<long>();
  e.residual_at_floor = iv(j.at("residual_at_floor"));
  e.alpha_ceil = j.at("alpha_ceil").get<long>();
  e.residual_at_ceil = iv(j.at("residual_at_ceil"));
  return e;
}

inline json to_json(const StationarityReport& r) {
  json fac = json::array();
  for (const auto& e : r.factorization.entries())
    fac.push_back(json{{"p", e.prime.get_str()}, {"alpha", e.exponent}});
  json entries = json::array();
  for (const auto& e : r.entries) entries.push_back(to_json(e));
  return json{{"report", "stationarity"},
              {"n", r.n.get_str()},
              {"factorization", fac},
              {"kappa_check", r.kappa_check},
              {"alpha_star_convention", kAlphaStarConvention},
              {"entries", entries}};
}

inline StationarityReport stationarity_report_from_json(const json& j) {
  StationarityReport r;
  r.n = mpz_class(j.at("n").get<std::string>());
  std::vector<PrimePower> fac;
  for (const auto& e : j.at("factorization"))
    fac.push_back({mpz_class(e.at("p").get<std::string>()), e.at("alpha").get<unsigned>()});
  r.factorization = Factorization(std::move(fac));
  r.kappa_check = j.at("kappa_check").get<bool>();
  for (const auto& e : j.at("entries")) r.entries.push_back(stationarity_entry_from_json(e));
  return r;
}

inline constexpr const char* kStationarityCsvHeader =
    "p,alpha,n0,A_num,A_den,u_num,u_den,paper_dll_lo,paper_dll_hi,exact_dll_lo,"
    "exact_dll_hi,dsr_num,dsr_den,delta_F_lo,delta_F_hi,alpha_star_lo,alpha_star_hi,"
    "alpha_floor,res_floor_lo,res_floor_hi,alpha_ceil,res_ceil_lo,res_ceil_hi";

inline std::string to_csv(const StationarityReport& r) {
  std::ostringstream os;
  os << "# robin-stationarity," << r.n << ",kappa_check="
     << (r.kappa_check ? "true" : "false") << '\n'
     << kStationarityCsvHeader << '\n';
  for (const auto& e : r.entries) {
    os << e.p << ',' << e.alpha << ',' << e.n0 << ',' << e.coprime_part.numerator() << ','
       << e.coprime_part.denominator() << ',' << e.local_part.numerator() << ','
       << e.local_part.denominator() << ',' << e.paper_delta_loglog.lo << ','
       << e.paper_delta_loglog.hi << ','
       << (e.exact_delta_loglog ? e.exact_delta_loglog->lo : "") << ','
       << (e.exact_delta_loglog ? e.exact_delta_loglog->hi : "") << ','
       << e.delta_sigma_ratio.numerator() << ',' << e.delta_sigma_ratio.denominator()
       << ',' << e.delta_f.lo << ',' << e.delta_f.hi << ',' << e.alpha_star.lo << ','
       << e.alpha_star.hi << ',' << e.alpha_floor << ',' << e.residual_at_floor.lo << ','
       << e.residual_at_floor.hi << ',' << e.alpha_ceil << ',' << e.residual_at_ceil.lo
       << ',' << e.residual_at_ceil.hi << '\n';
  }
  return os.str();
}

// ----------------------------------------------------------- candidates ----

// Serialization-facing row for a candidate list; shares the scan column set.
struct CandidateRow {
  std::string n;
  ExactRational sigma_ratio;
  std::optional<ExactRational> epsilon;
  std::string f_lo, f_hi;  // empty when n < 3
  std::optional<SignVerdict> sign;
  bool boundary_epsilon = false;
  friend bool operator==(const CandidateRow& a, const CandidateRow& b) {
    return a.n == b.n && a.sigma_ratio == b.sigma_ratio && a.epsilon == b.epsilon &&
           a.f_lo == b.f_lo && a.f_hi == b.f_hi && a.sign == b.sign &&
           a.boundary_epsilon == b.boundary_epsilon;
  }
};

inline CandidateRow candidate_row(const CandidateNumber& c) {
  CandidateRow r;
  r.n = c.n.get_str();
  r.sigma_ratio = sigma_ratio(c.factorization);
  r.epsilon = c.epsilon;
  r.boundary_epsilon = c.boundary_epsilon;
  if (c.f_eval) {
    r.f_lo = decimal_lo(c.f_eval->f);
    r.f_hi = decimal_hi(c.f_eval->f);
    r.sign = c.f_eval->sign;
  }
  return r;
}

inline std::vector<CandidateRow> candidate_rows(const std::vector<CandidateNumber>& cs) {
  std::vector<CandidateRow> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(candidate_row(c));
  return out;
}

inline std::string to_csv(const std::vector<CandidateRow>& rows) {
  std::ostringstream os;
  os << "# robin-candidates\n" << kScanCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.n << ',' << r.sigma_ratio.numerator() << ',' << r.sigma_ratio.denominator()
       << ',' << r.f_lo << ',' << r.f_hi << ','
       << (r.sign ? to_string(*r.sign) : "") << '\n';
  }
  return os.str();
}

inline json to_json(const CandidateRow& r) {
  json j{{"n", r.n},
         {"sigma", detail::rational_json(r.sigma_ratio)},
         {"boundary_epsilon", r.boundary_epsilon}};
  j["epsilon"] = r.epsilon ? detail::rational_json(*r.epsilon) : json(nullptr);
  j["F"] = r.sign ? detail::interval_json(r.f_lo, r.f_hi) : json(nullptr);
  j["sign"] = r.sign ? json(to_string(*r.sign)) : json(nullptr);
  return j;
}

inline json to_json(const std::vector<CandidateRow>& rows) {
  json items = json::array();
  for (const auto& r : rows) items.push_back(to_json(r));
  return json{{"report", "candidates"}, {"items", items}};
}

inline std::vector<CandidateRow> candidate_rows_from_json(const json& j) {
  std::vector<CandidateRow> out;
  for (const auto& e : j.at("items")) {
    CandidateRow r;
    r.n = e.at("n").get<std::string>();
    r.sigma_ratio = detail::rational_from_json(e.at("sigma"));
    r.boundary_epsilon = e.at("boundary_epsilon").get<bool>();
    if (!e.at("epsilon").is_null()) r.epsilon = detail::rational_from_json(e.at("epsilon"));
    if (!e.at("sign").is_null()) {
      r.f_lo = e.at("F").at("lo").get<std::string>();
      r.f_hi = e.at("F").at("hi").get<std::string>();
      r.sign = sign_verdict_from_string(e.at("sign").get<std::string>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace robin
