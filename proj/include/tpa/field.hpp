#pragma once
// Exact scalar fields: arbitrary-precision rationals (default) and a prime
// field with a process-global modulus.  Everything downstream is templated
// over the scalar type; both types model the same tiny "field" concept:
//   K(), K(long), zero()/one(), + - * /, unary -, ==, !=, is_zero(),
//   inv(), str(), parse(string).

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tpa {

// ---------------------------------------------------------------------------
// Rat: exact rational numbers over GMP.
// ---------------------------------------------------------------------------
class Rat {
public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}
  Rat(long num, long den) : v_(num, den) {
    if (den == 0) throw std::domain_error("Rat: zero denominator");
    v_.canonicalize();
  }
  explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  static Rat zero() { return Rat(0); }
  static Rat one() { return Rat(1); }

  // Accepts "p", "-p", "p/q".
  static Rat parse(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0)
      throw std::invalid_argument("Rat: cannot parse '" + s + "'");
    q.canonicalize();
    return Rat(q);
  }

  bool is_zero() const { return v_ == 0; }

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat operator+(const Rat& o) const { return Rat(mpq_class(v_ + o.v_)); }
  Rat operator-(const Rat& o) const { return Rat(mpq_class(v_ - o.v_)); }
  Rat operator*(const Rat& o) const { return Rat(mpq_class(v_ * o.v_)); }
  Rat operator/(const Rat& o) const {
    if (o.is_zero()) throw std::domain_error("Rat: division by zero");
    return Rat(mpq_class(v_ / o.v_));
  }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }

  bool operator==(const Rat& o) const { return v_ == o.v_; }
  bool operator!=(const Rat& o) const { return v_ != o.v_; }
  bool operator<(const Rat& o) const { return v_ < o.v_; }

  Rat inv() const {
    if (is_zero()) throw std::domain_error("Rat: inverse of zero");
    return Rat(mpq_class(1 / v_));
  }

  std::string str() const { return v_.get_str(); }

  const mpq_class& raw() const { return v_; }

private:
  mpq_class v_;
};

// ---------------------------------------------------------------------------
// Zp: the prime field GF(p).  The modulus is process-global: a run of the
// toolkit works over exactly one field, so no per-value context is needed.
// ---------------------------------------------------------------------------
class Zp {
public:
  static void set_modulus(std::int64_t p) {
    if (p < 2) throw std::domain_error("Zp: modulus must be >= 2");
    for (std::int64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) throw std::domain_error("Zp: modulus must be prime");
    if (p > (std::int64_t(1) << 30))
      throw std::domain_error("Zp: modulus too large (need p < 2^30)");
    modulus_ = p;
  }
  static std::int64_t modulus() { return modulus_; }

  Zp() : v_(0) {}
  Zp(long n) : v_(norm(n)) {}

  static Zp zero() { return Zp(0); }
  static Zp one() { return Zp(1); }

  static Zp parse(const std::string& s) {
    // Accepts "n" or "a/b" (interpreted in GF(p)).
    auto slash = s.find('/');
    if (slash == std::string::npos) return Zp(std::stol(s));
    Zp a(std::stol(s.substr(0, slash)));
    Zp b(std::stol(s.substr(slash + 1)));
    return a / b;
  }

  bool is_zero() const { return v_ == 0; }

  Zp operator-() const { return from_norm(v_ == 0 ? 0 : modulus_ - v_); }
  Zp operator+(const Zp& o) const {
    std::int64_t s = v_ + o.v_;
    if (s >= modulus_) s -= modulus_;
    return from_norm(s);
  }
  Zp operator-(const Zp& o) const {
    std::int64_t s = v_ - o.v_;
    if (s < 0) s += modulus_;
    return from_norm(s);
  }
  Zp operator*(const Zp& o) const { return from_norm((v_ * o.v_) % modulus_); }
  Zp operator/(const Zp& o) const { return *this * o.inv(); }
  Zp& operator+=(const Zp& o) { *this = *this + o; return *this; }
  Zp& operator-=(const Zp& o) { *this = *this - o; return *this; }
  Zp& operator*=(const Zp& o) { *this = *this * o; return *this; }
  Zp& operator/=(const Zp& o) { *this = *this / o; return *this; }

  bool operator==(const Zp& o) const { return v_ == o.v_; }
  bool operator!=(const Zp& o) const { return v_ != o.v_; }
  bool operator<(const Zp& o) const { return v_ < o.v_; }

  Zp inv() const {
    if (v_ == 0) throw std::domain_error("Zp: inverse of zero");
    // Extended Euclid.
    std::int64_t a = v_, b = modulus_, x0 = 1, x1 = 0;
    while (b != 0) {
      std::int64_t q = a / b;
      std::int64_t t = a - q * b; a = b; b = t;
      t = x0 - q * x1; x0 = x1; x1 = t;
    }
    return Zp(long(x0));
  }

  std::string str() const { return std::to_string(v_); }

  std::int64_t raw() const { return v_; }

private:
  static std::int64_t norm(std::int64_t n) {
    n %= modulus_;
    if (n < 0) n += modulus_;
    return n;
  }
  static Zp from_norm(std::int64_t n) { Zp z; z.v_ = n; return z; }

  static inline std::int64_t modulus_ = 2;  // overwritten by set_modulus
  std::int64_t v_;
};

}  // namespace tpa
