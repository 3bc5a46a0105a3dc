#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace cobarlie {

// Exact rational number. Values whose reduced numerator and denominator fit
// in 63 bits live inline; anything larger is promoted to a shared GMP value
// and demoted again as soon as it fits.
class Rational {
 public:
  Rational() = default;
  Rational(long long n) : n_(n) {}  // NOLINT: implicit on purpose
  Rational(long long n, long long d);
  explicit Rational(const mpq_class& q);

  Rational(const Rational& o) : n_(o.n_), d_(o.d_) { retain(); }
  Rational(Rational&& o) noexcept : n_(o.n_), d_(o.d_) {
    o.n_ = 0;
    o.d_ = 1;
  }
  Rational& operator=(const Rational& o) {
    if (this != &o) {
      o.retain();
      release();
      n_ = o.n_;
      d_ = o.d_;
    }
    return *this;
  }
  Rational& operator=(Rational&& o) noexcept {
    if (this != &o) {
      release();
      n_ = o.n_;
      d_ = o.d_;
      o.n_ = 0;
      o.d_ = 1;
    }
    return *this;
  }
  ~Rational() { release(); }

  static Rational parse(std::string_view s);

  bool is_zero() const { return d_ != 0 && n_ == 0; }
  bool is_one() const { return d_ == 1 && n_ == 1; }
  bool is_integer() const;
  int sign() const;
  mpq_class to_mpq() const;
  std::string str() const;  // "p" or "p/q"

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b);

 private:
  struct Big;
  // d_ == 0 marks a promoted value whose Big* is stored in n_.
  int64_t n_ = 0;
  int64_t d_ = 1;

  bool small() const { return d_ != 0; }
  Big* big() const { return reinterpret_cast<Big*>(static_cast<intptr_t>(n_)); }
  void retain() const;
  void release();
  static Rational from_i128(__int128 n, __int128 d);
  static Rational from_mpq(mpq_class&& q);
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace cobarlie
