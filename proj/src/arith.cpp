#include "pcc/arith.hpp"

#include <limits>

namespace pcc {

Rational parse_rational(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != ' ') t.push_back(c);
  if (t.empty()) throw DomainError("malformed number: empty string");
  auto slash = t.find('/');
  auto check_int = [&](const std::string& s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) throw DomainError("malformed number: '" + text + "'");
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') throw DomainError("malformed number: '" + text + "'");
  };
  std::string num = t.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
  check_int(num);
  check_int(den);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!den.empty() && den[0] == '+') den.erase(0, 1);
  BigInt n(num), d(den);
  if (d == 0) throw DomainError("malformed number: zero denominator in '" + text + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::int64_t ipow(std::int64_t p, int k) {
  if (k < 0) throw DomainError("negative exponent");
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) {
    if (r > std::numeric_limits<std::int64_t>::max() / 4 / p)
      throw DomainError("residue modulus too large");
    r *= p;
  }
  return r;
}

BigInt big_pow(const BigInt& base, unsigned long k) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), k);
  return r;
}

Rational rat_pow(const Rational& base, long k) {
  if (k >= 0) {
    Rational r(big_pow(base.get_num(), k), big_pow(base.get_den(), k));
    r.canonicalize();
    return r;
  }
  if (base == 0) throw DomainError("zero to a negative power");
  Rational r(big_pow(base.get_den(), -k), big_pow(base.get_num(), -k));
  r.canonicalize();
  return r;
}

long int_valuation(const BigInt& x, long p) {
  if (x == 0) throw DomainError("valuation of zero integer");
  BigInt y = x;
  long v = 0;
  while (mpz_divisible_ui_p(y.get_mpz_t(), p)) {
    mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), p);
    ++v;
  }
  return v;
}

Valuation valuation(const Rational& x, long p) {
  if (x == 0) return Valuation::infinite();
  return Valuation::finite(int_valuation(x.get_num(), p) - int_valuation(x.get_den(), p));
}

bool is_p_integral(const Rational& x, long p) {
  return !mpz_divisible_ui_p(x.get_den().get_mpz_t(), p);
}

std::int64_t reduce_mod(const Rational& x, long p, std::int64_t modulus) {
  if (!is_p_integral(x, p)) throw DomainError("value is not p-integral: " + x.get_str());
  BigInt m(static_cast<long>(modulus));
  BigInt num = x.get_num() % m;
  BigInt den = x.get_den() % m;
  if (num < 0) num += m;
  if (den < 0) den += m;
  std::int64_t a = num.get_si(), b = den.get_si();
  return mul_mod(a, mod_inverse(b, modulus), modulus);
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t modulus) {
  std::int64_t g = modulus, x = 0, x1 = 1, a1 = mod_norm(a, modulus);
  while (a1 != 0) {
    std::int64_t q = g / a1;
    std::int64_t t = g - q * a1;
    g = a1;
    a1 = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  if (g != 1) throw DomainError("residue is not invertible");
  return mod_norm(x, modulus);
}

int small_valuation(std::int64_t x, long p, int cap) {
  if (x == 0) return cap;
  int v = 0;
  while (x % p == 0 && v < cap) {
    x /= p;
    ++v;
  }
  return v;
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

}  // namespace pcc
