#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace qtoda {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact rational scalar. Invariant: lowest terms, denominator > 0.
// mpq arithmetic preserves canonical form, so only construction canonicalizes.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design, mirrors integer literals
  Rational(long n, long d) : v_(n, d) {
    if (d == 0) throw Error("Rational: zero denominator");
    v_.canonicalize();
  }
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  // Accepts "n" or "n/d", optional leading '-'. Anything else is an error.
  static Rational from_string(const std::string& s) {
    if (s.empty()) throw Error("Rational: empty string");
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(mpq_class(mpz_class(s)));
      mpz_class num(s.substr(0, slash)), den(s.substr(slash + 1));
      if (den == 0) throw Error("Rational: zero denominator in \"" + s + "\"");
      mpq_class q;
      mpq_set_num(q.get_mpq_t(), num.get_mpz_t());
      mpq_set_den(q.get_mpq_t(), den.get_mpz_t());
      return Rational(std::move(q));
    } catch (const std::invalid_argument&) {
      throw Error("Rational: cannot parse \"" + s + "\"");
    }
  }

  std::string to_string() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  double to_double() const { return v_.get_d(); }
  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  Rational inv() const {
    if (is_zero()) throw Error("Rational: inverse of zero");
    return Rational(mpq_class(1 / v_));
  }

  Rational pow(long e) const {
    if (e == 0) return Rational(1);
    if (is_zero()) {
      if (e < 0) throw Error("Rational: negative power of zero");
      return Rational(0);
    }
    const Rational base = e < 0 ? inv() : *this;
    unsigned long k = e < 0 ? -static_cast<unsigned long>(e) : e;
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.v_.get_num().get_mpz_t(), k);
    mpz_pow_ui(den.get_mpz_t(), base.v_.get_den().get_mpz_t(), k);
    mpq_class r;
    mpq_set_num(r.get_mpq_t(), num.get_mpz_t());
    mpq_set_den(r.get_mpq_t(), den.get_mpz_t());
    return Rational(std::move(r));  // canonical already; ctor re-canonicalizes harmlessly
  }

  Rational abs() const { return sign() < 0 ? -*this : *this; }

  // Positive exact square root, or nullopt when *this is not a square of a rational.
  std::optional<Rational> sqrt_exact() const {
    if (sign() < 0) return std::nullopt;
    if (is_zero()) return Rational(0);
    const mpz_class num = v_.get_num(), den = v_.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
      return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    mpq_class r;
    mpq_set_num(r.get_mpq_t(), rn.get_mpz_t());
    mpq_set_den(r.get_mpq_t(), rd.get_mpz_t());
    return Rational(std::move(r));
  }

  const mpq_class& raw() const { return v_; }

 private:
  mpq_class v_;
};

}  // namespace qtoda
