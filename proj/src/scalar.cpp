#include "e510/scalar.hpp"

#include <limits>
#include <ostream>
#include <stdexcept>

namespace e510 {
namespace {

using u128 = unsigned __int128;

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u128 abs128(__int128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

mpz_class to_mpz(__int128 v) {
  u128 mag = abs128(v);
  std::uint64_t limbs[2] = {static_cast<std::uint64_t>(mag),
                            static_cast<std::uint64_t>(mag >> 64)};
  mpz_class z;
  mpz_import(z.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, limbs);
  if (v < 0) z = -z;
  return z;
}

constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

bool fits(__int128 v) { return v > kMin && v <= kMax; }

}  // namespace

Scalar::Scalar(long long n) {
  if (n == kMin) {
    *this = from_mpq(mpq_class(mpz_class(std::to_string(n))));
  } else {
    num_ = n;
  }
}

Scalar::Scalar(long long n, long long d) {
  if (d == 0) throw std::domain_error("Scalar: zero denominator");
  *this = from_wide(n, d);
}

Scalar::Scalar(const mpq_class& q) { *this = from_mpq(q); }

Scalar Scalar::from_wide(__int128 n, __int128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  Scalar out;
  if (n == 0) return out;
  u128 g = gcd128(abs128(n), u128(d));
  if (g > 1) {
    n /= static_cast<__int128>(g);
    d /= static_cast<__int128>(g);
  }
  if (fits(n) && fits(d)) {
    out.num_ = static_cast<std::int64_t>(n);
    out.den_ = static_cast<std::int64_t>(d);
    return out;
  }
  mpq_class q(to_mpz(n), to_mpz(d));
  q.canonicalize();
  out.num_ = 0;
  out.den_ = 1;
  out.big_ = std::make_shared<const mpq_class>(std::move(q));
  return out;
}

Scalar Scalar::from_mpq(mpq_class q) {
  q.canonicalize();
  Scalar out;
  const mpz_class& n = q.get_num();
  const mpz_class& d = q.get_den();
  if (n.fits_slong_p() && d.fits_slong_p() && n.get_si() != kMin) {
    out.num_ = n.get_si();
    out.den_ = d.get_si();
    return out;
  }
  out.big_ = std::make_shared<const mpq_class>(std::move(q));
  return out;
}

Scalar Scalar::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("Scalar: empty string");
  mpq_class q;
  std::string s(text);
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("Scalar: cannot parse '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("Scalar: zero denominator in '" + s + "'");
  return from_mpq(q);
}

int Scalar::sign() const {
  if (big_) return sgn(*big_);
  return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0);
}

bool Scalar::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

mpq_class Scalar::to_mpq() const {
  if (big_) return *big_;
  mpq_class q(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
  return q;
}

std::string Scalar::str() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Scalar Scalar::operator-() const {
  if (big_) return from_mpq(-*big_);
  Scalar out = *this;
  out.num_ = -num_;
  return out;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.big_ || b.big_) return Scalar::from_mpq(a.to_mpq() + b.to_mpq());
  if (a.num_ == 0) return b;
  if (b.num_ == 0) return a;
  if (a.den_ == b.den_) {
    return Scalar::from_wide(__int128(a.num_) + b.num_, a.den_);
  }
  return Scalar::from_wide(__int128(a.num_) * b.den_ + __int128(b.num_) * a.den_,
                           __int128(a.den_) * b.den_);
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.big_ || b.big_) return Scalar::from_mpq(a.to_mpq() * b.to_mpq());
  if (a.num_ == 0 || b.num_ == 0) return Scalar();
  if (a.den_ == 1 && b.den_ == 1) {
    __int128 p = __int128(a.num_) * b.num_;
    if (fits(p)) {
      Scalar out;
      out.num_ = static_cast<std::int64_t>(p);
      return out;
    }
    return Scalar::from_wide(p, 1);
  }
  return Scalar::from_wide(__int128(a.num_) * b.num_, __int128(a.den_) * b.den_);
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) throw std::domain_error("Scalar: division by zero");
  if (a.big_ || b.big_) return Scalar::from_mpq(a.to_mpq() / b.to_mpq());
  return Scalar::from_wide(__int128(a.num_) * b.den_, __int128(a.den_) * b.num_);
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical forms: a big value never equals a small one
}

std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
  if (!a.big_ && !b.big_) {
    __int128 l = __int128(a.num_) * b.den_;
    __int128 r = __int128(b.num_) * a.den_;
    return l <=> r;
  }
  int c = cmp(a.to_mpq(), b.to_mpq());
  return c <=> 0;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

}  // namespace e510
