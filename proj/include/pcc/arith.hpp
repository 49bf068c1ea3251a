#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace pcc {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Thrown for violated preconditions on user-visible operations.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// p-adic valuation of a value, with v(0) kept distinct from every integer.
class Valuation {
 public:
  static Valuation infinite() { return Valuation(); }
  static Valuation finite(long v) { return Valuation(v); }

  bool is_infinite() const { return !value_.has_value(); }
  long value() const {
    if (!value_) throw DomainError("valuation of zero is infinite");
    return *value_;
  }

  friend bool operator==(const Valuation&, const Valuation&) = default;
  friend bool operator<(const Valuation& a, const Valuation& b) {
    if (a.is_infinite()) return false;
    if (b.is_infinite()) return true;
    return *a.value_ < *b.value_;
  }
  friend bool operator<=(const Valuation& a, const Valuation& b) { return !(b < a); }

  std::string str() const { return value_ ? std::to_string(*value_) : std::string("inf"); }

 private:
  Valuation() = default;
  explicit Valuation(long v) : value_(v) {}
  std::optional<long> value_;
};

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

/// p^k as a machine integer; throws when the result would not fit comfortably.
std::int64_t ipow(std::int64_t p, int k);
BigInt big_pow(const BigInt& base, unsigned long k);
Rational rat_pow(const Rational& base, long k);

/// Multiplicity of p in a nonzero integer.
long int_valuation(const BigInt& x, long p);
Valuation valuation(const Rational& x, long p);
bool is_p_integral(const Rational& x, long p);

/// Reduces a p-integral rational into [0, modulus) where modulus is a power of p.
std::int64_t reduce_mod(const Rational& x, long p, std::int64_t modulus);

std::int64_t mod_inverse(std::int64_t a, std::int64_t modulus);
inline std::int64_t mod_norm(std::int64_t a, std::int64_t modulus) {
  a %= modulus;
  return a < 0 ? a + modulus : a;
}
inline std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t modulus) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % modulus);
}

/// Valuation of a machine integer (v(0) reported as `cap`).
int small_valuation(std::int64_t x, long p, int cap);

bool is_prime(long p);

}  // namespace pcc
