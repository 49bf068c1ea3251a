#pragma once

#include <map>
#include <string>

#include "pcc/arith.hpp"

namespace pcc {

/// Laurent polynomial in the formal symbol L with integer coefficients.
/// Sparse: exponent -> nonzero coefficient.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  static LaurentPoly monomial(const BigInt& c, long k);
  static LaurentPoly constant(const BigInt& c) { return monomial(c, 0); }

  bool is_zero() const { return terms_.empty(); }
  const std::map<long, BigInt>& terms() const { return terms_; }
  long low() const { return terms_.begin()->first; }
  long high() const { return terms_.rbegin()->first; }

  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly operator*(const BigInt& c) const;
  LaurentPoly shifted(long k) const;
  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

  /// Exact quotient by a monic-up-to-sign divisor with unit extreme coefficients,
  /// or nullopt when the division leaves a remainder.
  std::optional<LaurentPoly> divide_exact(const LaurentPoly& divisor) const;

  BigInt content() const;
  Rational eval(const Rational& x) const;
  /// "c*L^k" terms joined by '+', ascending exponents.
  std::string str() const;
  /// Human form in descending powers, e.g. "L^2-2*L+1".
  std::string pretty() const;

 private:
  void add_term(long k, const BigInt& c);
  std::map<long, BigInt> terms_;
};

/// An element of Z[L, L^-1, (1-L^-a)^-1] tensored with Q, stored as
/// scalar * numerator / prod (1-L^-a)^m.
class LocRingElem {
 public:
  LocRingElem() = default;  // zero
  LocRingElem(long c) : LocRingElem(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  LocRingElem(const Rational& c);                    // NOLINT(google-explicit-constructor)
  LocRingElem(const Rational& scalar, LaurentPoly numerator, std::map<long, long> denominator);

  static LocRingElem L_pow(long k);
  /// 1 / (1 - L^-alpha)
  static LocRingElem geometric(long alpha);

  const Rational& scalar() const { return scalar_; }
  const LaurentPoly& numerator() const { return num_; }
  const std::map<long, long>& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  LocRingElem operator+(const LocRingElem& o) const;
  LocRingElem operator-(const LocRingElem& o) const;
  LocRingElem operator-() const;
  LocRingElem operator*(const LocRingElem& o) const;
  LocRingElem& operator+=(const LocRingElem& o) { return *this = *this + o; }
  LocRingElem& operator-=(const LocRingElem& o) { return *this = *this - o; }
  LocRingElem& operator*=(const LocRingElem& o) { return *this = *this * o; }
  friend LocRingElem operator*(const Rational& c, const LocRingElem& e) { return e * LocRingElem(c); }

  /// Exact equality: the difference has a zero numerator.
  friend bool operator==(const LocRingElem& a, const LocRingElem& b) { return (a - b).is_zero(); }

  /// Substitutes L = q. Requires q >= 2.
  Rational eval_at(long q) const;

  /// Serialized form: "s*(c*L^k+...)/(1-L^-a)^m*..." or "0"; parse() inverts it exactly.
  std::string str() const;
  static LocRingElem parse(const std::string& text);
  /// Rational-function form in L with positive powers, e.g. "1/(L-1)".
  std::string pretty() const;

 private:
  void canonicalize();
  Rational scalar_{0};
  LaurentPoly num_;
  std::map<long, long> den_;
};

/// Class of the Grassmannian G(n,d) as a polynomial in L.
LocRingElem gaussian_binomial(long n, long d);
/// Its multiplicative inverse inside the localized ring.
LocRingElem gaussian_binomial_inverse(long n, long d);

}  // namespace pcc
