#pragma once

#include <gmpxx.h>

#include <ostream>
#include <stdexcept>
#include <string>

namespace robin {

// Exact fraction backed by GMP. Always kept canonical (denominator > 0,
// gcd(|num|, den) = 1); arithmetic never rounds.
class ExactRational {
 public:
  ExactRational() : v_(0) {}
  ExactRational(long n) : v_(n) {}  // NOLINT: implicit integer promotion is intended
  ExactRational(const mpz_class& n) : v_(n) {}
  ExactRational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::domain_error("ExactRational: zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  ExactRational(long num, long den)
      : ExactRational(mpz_class(num), mpz_class(den)) {}
  explicit ExactRational(const mpq_class& q) : v_(q) {
    if (v_.get_den() == 0) throw std::domain_error("ExactRational: zero denominator");
    v_.canonicalize();
  }

  // Parses "num/den" or a bare integer.
  static ExactRational from_string(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0)
      throw std::invalid_argument("ExactRational: cannot parse '" + s + "'");
    if (q.get_den() == 0) throw std::domain_error("ExactRational: zero denominator");
    q.canonicalize();
    ExactRational r;
    r.v_ = q;
    return r;
  }

  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }

  // Always renders an explicit fraction, e.g. "2/1", so output is
  // unambiguous and diffable.
  std::string str() const {
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  friend ExactRational operator+(const ExactRational& a, const ExactRational& b) {
    return wrap(a.v_ + b.v_);
  }
  friend ExactRational operator-(const ExactRational& a, const ExactRational& b) {
    return wrap(a.v_ - b.v_);
  }
  friend ExactRational operator*(const ExactRational& a, const ExactRational& b) {
    return wrap(a.v_ * b.v_);
  }
  friend ExactRational operator/(const ExactRational& a, const ExactRational& b) {
    if (b.is_zero()) throw std::domain_error("ExactRational: division by zero");
    return wrap(a.v_ / b.v_);
  }
  friend ExactRational operator-(const ExactRational& a) { return wrap(-a.v_); }

  ExactRational& operator+=(const ExactRational& o) { v_ += o.v_; return *this; }
  ExactRational& operator-=(const ExactRational& o) { v_ -= o.v_; return *this; }
  ExactRational& operator*=(const ExactRational& o) { v_ *= o.v_; return *this; }

  friend bool operator==(const ExactRational& a, const ExactRational& b) {
    return a.v_ == b.v_;
  }
  friend bool operator!=(const ExactRational& a, const ExactRational& b) {
    return a.v_ != b.v_;
  }
  friend bool operator<(const ExactRational& a, const ExactRational& b) {
    return a.v_ < b.v_;
  }
  friend bool operator<=(const ExactRational& a, const ExactRational& b) {
    return a.v_ <= b.v_;
  }
  friend bool operator>(const ExactRational& a, const ExactRational& b) {
    return a.v_ > b.v_;
  }
  friend bool operator>=(const ExactRational& a, const ExactRational& b) {
    return a.v_ >= b.v_;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExactRational& r) {
    return os << r.str();
  }

 private:
  // GMP's rational arithmetic keeps canonical operands canonical.
  static ExactRational wrap(mpq_class q) {
    ExactRational r;
    r.v_ = std::move(q);
    return r;
  }

  mpq_class v_;
};

}  // namespace robin
