#include "cobarlie/rational.hpp"

#include <atomic>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace cobarlie {

struct Rational::Big {
  std::atomic<int> refs{1};
  mpq_class q;
};

namespace {

using i128 = __int128;
constexpr int64_t kMax = std::numeric_limits<int64_t>::max();

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

int64_t gcd64(int64_t a, int64_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(i128 v) { return v <= kMax && v >= -kMax; }

mpz_class to_mpz(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<uint64_t>(u >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<uint64_t>(u)));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

}  // namespace

void Rational::retain() const {
  if (!small()) big()->refs.fetch_add(1, std::memory_order_relaxed);
}

void Rational::release() {
  if (!small()) {
    Big* b = big();
    if (b->refs.fetch_sub(1, std::memory_order_acq_rel) == 1) delete b;
    n_ = 0;
    d_ = 1;
  }
}

Rational::Rational(long long n, long long d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  *this = from_i128(n, d);
}

Rational::Rational(const mpq_class& q) {
  mpq_class c(q);
  c.canonicalize();
  *this = from_mpq(std::move(c));
}

Rational Rational::from_i128(i128 n, i128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n == 0) d = 1;
  if (fits(n) && fits(d)) {
    Rational r;
    r.n_ = static_cast<int64_t>(n);
    r.d_ = static_cast<int64_t>(d);
    return r;
  }
  mpq_class q(to_mpz(n), to_mpz(d));
  return from_mpq(std::move(q));
}

Rational Rational::from_mpq(mpq_class&& q) {
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (num.fits_slong_p() && den.fits_slong_p()) {
    long nn = num.get_si();
    long dd = den.get_si();
    if (nn != std::numeric_limits<long>::min()) {
      Rational r;
      r.n_ = nn;
      r.d_ = dd;
      return r;
    }
  }
  Rational r;
  Big* b = new Big;
  b->q = std::move(q);
  r.n_ = static_cast<int64_t>(reinterpret_cast<intptr_t>(b));
  r.d_ = 0;
  return r;
}

Rational Rational::parse(std::string_view s) {
  std::string str(s);
  if (str.empty()) throw std::invalid_argument("empty rational literal");
  mpq_class q;
  if (q.set_str(str, 10) != 0) throw std::invalid_argument("bad rational literal: " + str);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + str);
  q.canonicalize();
  return from_mpq(std::move(q));
}

bool Rational::is_integer() const { return small() ? d_ == 1 : big()->q.get_den() == 1; }

int Rational::sign() const {
  if (small()) return (n_ > 0) - (n_ < 0);
  return sgn(big()->q);
}

mpq_class Rational::to_mpq() const {
  if (!small()) return big()->q;
  return mpq_class(mpz_class(static_cast<long>(n_)), mpz_class(static_cast<long>(d_)));
}

std::string Rational::str() const {
  if (small()) {
    if (d_ == 1) return std::to_string(n_);
    return std::to_string(n_) + "/" + std::to_string(d_);
  }
  return big()->q.get_str();
}

Rational Rational::operator-() const {
  if (small()) {
    Rational r;
    r.n_ = -n_;
    r.d_ = d_;
    return r;
  }
  return from_mpq(mpq_class(-big()->q));
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.small() && b.small()) {
    if (a.d_ == 1 && b.d_ == 1) {
      int64_t s;
      if (!__builtin_add_overflow(a.n_, b.n_, &s) && s != std::numeric_limits<int64_t>::min()) {
        Rational r;
        r.n_ = s;
        return r;
      }
    }
    if (a.n_ == 0) return b;
    if (b.n_ == 0) return a;
    int64_t g = gcd64(a.d_, b.d_);
    i128 n = static_cast<i128>(a.n_) * (b.d_ / g) + static_cast<i128>(b.n_) * (a.d_ / g);
    i128 d = static_cast<i128>(a.d_ / g) * b.d_;
    return Rational::from_i128(n, d);
  }
  return Rational::from_mpq(mpq_class(a.to_mpq() + b.to_mpq()));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  if (a.small() && b.small()) {
    if (a.d_ == 1 && b.d_ == 1) {
      int64_t p;
      if (!__builtin_mul_overflow(a.n_, b.n_, &p) && p != std::numeric_limits<int64_t>::min()) {
        Rational r;
        r.n_ = p;
        return r;
      }
    }
    if (a.n_ == 0 || b.n_ == 0) return Rational();
    int64_t g1 = gcd64(a.n_, b.d_);
    int64_t g2 = gcd64(b.n_, a.d_);
    i128 n = static_cast<i128>(a.n_ / g1) * (b.n_ / g2);
    i128 d = static_cast<i128>(a.d_ / g2) * (b.d_ / g1);
    if (fits(n) && fits(d)) {
      Rational r;
      r.n_ = static_cast<int64_t>(n);
      r.d_ = static_cast<int64_t>(d);
      return r;
    }
    return Rational::from_i128(n, d);
  }
  return Rational::from_mpq(mpq_class(a.to_mpq() * b.to_mpq()));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (b.small()) {
    Rational inv;
    inv.n_ = b.n_ < 0 ? -b.d_ : b.d_;
    inv.d_ = b.n_ < 0 ? -b.n_ : b.n_;
    return a * inv;
  }
  return Rational::from_mpq(mpq_class(a.to_mpq() / b.to_mpq()));
}

bool operator==(const Rational& a, const Rational& b) {
  if (a.small() && b.small()) return a.n_ == b.n_ && a.d_ == b.d_;
  if (a.small() != b.small()) return false;  // canonical: promoted values never fit
  return a.big()->q == b.big()->q;
}

bool operator<(const Rational& a, const Rational& b) {
  if (a.small() && b.small())
    return static_cast<i128>(a.n_) * b.d_ < static_cast<i128>(b.n_) * a.d_;
  return a.to_mpq() < b.to_mpq();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace cobarlie
