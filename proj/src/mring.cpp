#include "pcc/mring.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace pcc {

// ---------------------------------------------------------------- LaurentPoly

LaurentPoly LaurentPoly::monomial(const BigInt& c, long k) {
  LaurentPoly p;
  p.add_term(k, c);
  return p;
}

void LaurentPoly::add_term(long k, const BigInt& c) {
  if (c == 0) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  LaurentPoly r = *this;
  for (const auto& [k, c] : o.terms_) r.add_term(k, c);
  return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
  LaurentPoly r = *this;
  for (const auto& [k, c] : o.terms_) r.add_term(k, -c);
  return r;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  LaurentPoly r;
  for (const auto& [i, a] : terms_)
    for (const auto& [j, b] : o.terms_) r.add_term(i + j, a * b);
  return r;
}

LaurentPoly LaurentPoly::operator*(const BigInt& c) const {
  LaurentPoly r;
  if (c == 0) return r;
  for (const auto& [k, a] : terms_) r.terms_.emplace(k, a * c);
  return r;
}

LaurentPoly LaurentPoly::shifted(long k) const {
  LaurentPoly r;
  for (const auto& [e, a] : terms_) r.terms_.emplace(e + k, a);
  return r;
}

std::optional<LaurentPoly> LaurentPoly::divide_exact(const LaurentPoly& divisor) const {
  if (divisor.is_zero()) throw DomainError("division by zero polynomial");
  if (is_zero()) return LaurentPoly{};
  const BigInt& lead = divisor.terms_.rbegin()->second;
  if (lead != 1 && lead != -1) throw DomainError("divide_exact needs a unit leading coefficient");
  long dh = divisor.high(), dl = divisor.low();
  LaurentPoly rem = *this, quot;
  // Standard long division on the top term; remainder must vanish once its
  // span is shorter than the divisor's.
  while (!rem.is_zero() && rem.high() - rem.low() >= dh - dl) {
    long k = rem.high() - dh;
    BigInt c = rem.terms_.rbegin()->second * lead;  // lead^-1 == lead
    quot.add_term(k, c);
    rem = rem - divisor.shifted(k) * c;
  }
  if (!rem.is_zero()) return std::nullopt;
  return quot;
}

BigInt LaurentPoly::content() const {
  BigInt g = 0;
  for (const auto& [k, c] : terms_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

Rational LaurentPoly::eval(const Rational& x) const {
  Rational r = 0;
  for (const auto& [k, c] : terms_) r += Rational(c) * rat_pow(x, k);
  return r;
}

std::string LaurentPoly::str() const {
  if (is_zero()) return "0*L^0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    os << (first ? "" : "+") << c.get_str() << "*L^" << k;
    first = false;
  }
  return os.str();
}

std::string LaurentPoly::pretty() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    long k = it->first;
    BigInt c = it->second;
    bool neg = c < 0;
    BigInt mag = neg ? BigInt(-c) : c;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? "-" : "+");
    first = false;
    if (k == 0) {
      os << mag.get_str();
      continue;
    }
    if (mag != 1) os << mag.get_str() << '*';
    os << 'L';
    if (k != 1) os << '^' << k;
  }
  return os.str();
}

// ---------------------------------------------------------------- LocRingElem

namespace {

// 1 - L^-a as a Laurent polynomial.
LaurentPoly one_minus(long a) { return LaurentPoly::constant(1) - LaurentPoly::monomial(1, -a); }

// L^a - 1
LaurentPoly cyclic(long a) { return LaurentPoly::monomial(1, a) - LaurentPoly::constant(1); }

// (L^a - 1) / (L^b - 1) for b | a.
LaurentPoly cyclic_quotient(long a, long b) {
  LaurentPoly r;
  for (long j = 0; j < a / b; ++j) r = r + LaurentPoly::monomial(1, j * b);
  return r;
}

}  // namespace

LocRingElem::LocRingElem(const Rational& c) : scalar_(c), num_(LaurentPoly::constant(1)) { canonicalize(); }

LocRingElem::LocRingElem(const Rational& scalar, LaurentPoly numerator, std::map<long, long> denominator)
    : scalar_(scalar), num_(std::move(numerator)), den_(std::move(denominator)) {
  for (const auto& [a, m] : den_)
    if (a <= 0 || m < 0) throw DomainError("denominator factors need alpha >= 1 and multiplicity >= 0");
  canonicalize();
}

LocRingElem LocRingElem::L_pow(long k) { return LocRingElem(Rational(1), LaurentPoly::monomial(1, k), {}); }

LocRingElem LocRingElem::geometric(long alpha) {
  return LocRingElem(Rational(1), LaurentPoly::constant(1), {{alpha, 1}});
}

void LocRingElem::canonicalize() {
  scalar_.canonicalize();
  for (auto it = den_.begin(); it != den_.end();) it = it->second == 0 ? den_.erase(it) : std::next(it);
  if (scalar_ == 0 || num_.is_zero()) {
    scalar_ = 0;
    num_ = LaurentPoly{};
    den_.clear();
    return;
  }
  BigInt g = num_.content();
  if (num_.terms().rbegin()->second < 0) g = -g;
  if (g != 1) {
    LaurentPoly reduced;
    for (const auto& [k, c] : num_.terms()) reduced = reduced + LaurentPoly::monomial(c / g, k);
    num_ = reduced;
    scalar_ *= g;
  }
  // Cancel denominator factors against the numerator, largest alpha first;
  // a factor that cannot go away entirely may still shrink to a divisor.
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<long> alphas;
    for (const auto& [a, m] : den_) alphas.push_back(a);
    for (auto it = alphas.rbegin(); it != alphas.rend() && !changed; ++it) {
      long a = *it;
      if (auto q = num_.divide_exact(cyclic(a))) {
        num_ = q->shifted(a);
        if (--den_[a] == 0) den_.erase(a);
        changed = true;
        break;
      }
      for (long b = a / 2; b >= 1; --b) {
        if (a % b != 0) continue;
        if (auto q = num_.divide_exact(cyclic_quotient(a, b))) {
          num_ = q->shifted(a - b);
          if (--den_[a] == 0) den_.erase(a);
          ++den_[b];
          changed = true;
          break;
        }
      }
    }
  }
}

LocRingElem LocRingElem::operator+(const LocRingElem& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  std::map<long, long> common = den_;
  for (const auto& [a, m] : o.den_) common[a] = std::max(common[a], m);
  auto lift = [&](const LocRingElem& e) {
    LaurentPoly n = e.num_;
    for (const auto& [a, m] : common) {
      auto it = e.den_.find(a);
      long have = it == e.den_.end() ? 0 : it->second;
      for (long i = have; i < m; ++i) n = n * one_minus(a);
    }
    return n;
  };
  LaurentPoly na = lift(*this), nb = lift(o);
  BigInt ca = scalar_.get_num() * o.scalar_.get_den();
  BigInt cb = o.scalar_.get_num() * scalar_.get_den();
  Rational s(BigInt(1), scalar_.get_den() * o.scalar_.get_den());
  s.canonicalize();
  return LocRingElem(s, na * ca + nb * cb, common);
}

LocRingElem LocRingElem::operator-() const {
  LocRingElem r = *this;
  r.scalar_ = -r.scalar_;
  return r;
}

LocRingElem LocRingElem::operator-(const LocRingElem& o) const { return *this + (-o); }

LocRingElem LocRingElem::operator*(const LocRingElem& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::map<long, long> den = den_;
  for (const auto& [a, m] : o.den_) den[a] += m;
  return LocRingElem(scalar_ * o.scalar_, num_ * o.num_, den);
}

Rational LocRingElem::eval_at(long q) const {
  if (q < 2) throw DomainError("eval_at requires q >= 2");
  if (is_zero()) return 0;
  Rational x(q);
  Rational r = scalar_ * num_.eval(x);
  for (const auto& [a, m] : den_) r /= rat_pow(1 - rat_pow(x, -a), m);
  return r;
}

std::string LocRingElem::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  os << scalar_.get_str() << "*(" << num_.str() << ")";
  bool first = true;
  for (const auto& [a, m] : den_) {
    os << (first ? "/" : "*") << "(1-L^-" << a << ")^" << m;
    first = false;
  }
  return os.str();
}

namespace {

class Scanner {
 public:
  explicit Scanner(std::string s) : s_(std::move(s)) {}
  bool done() const { return i_ >= s_.size(); }
  bool peek(char c) const { return i_ < s_.size() && s_[i_] == c; }
  bool accept(const std::string& lit) {
    if (s_.compare(i_, lit.size(), lit) != 0) return false;
    i_ += lit.size();
    return true;
  }
  void expect(const std::string& lit) {
    if (!accept(lit)) fail("expected '" + lit + "'");
  }
  std::string integer() {
    std::size_t st = i_;
    if (peek('-') || peek('+')) ++i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ == st || !std::isdigit(static_cast<unsigned char>(s_[i_ - 1]))) fail("expected integer");
    return s_.substr(st, i_ - st);
  }
  std::string rational() {
    std::string n = integer();
    if (accept("/")) n += "/" + integer();
    return n;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw DomainError("cannot parse ring element at offset " + std::to_string(i_) + ": " + why);
  }

 private:
  std::string s_;
  std::size_t i_ = 0;
};

}  // namespace

LocRingElem LocRingElem::parse(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t == "0") return {};
  Scanner sc(t);
  Rational scalar = parse_rational(sc.rational());
  sc.expect("*(");
  LaurentPoly num;
  do {
    BigInt c(sc.integer());
    sc.expect("*L^");
    long k = std::stol(sc.integer());
    num = num + LaurentPoly::monomial(c, k);
  } while (sc.accept("+"));
  sc.expect(")");
  std::map<long, long> den;
  if (sc.accept("/")) {
    do {
      sc.expect("(1-L^-");
      long a = std::stol(sc.integer());
      sc.expect(")^");
      long m = std::stol(sc.integer());
      if (a <= 0 || m <= 0) sc.fail("factor exponents must be positive");
      den[a] += m;
    } while (sc.accept("*"));
  }
  if (!sc.done()) sc.fail("trailing characters");
  return LocRingElem(scalar, num, den);
}

std::string LocRingElem::pretty() const {
  if (is_zero()) return "0";
  // scalar * N * L^{sum a m} / prod (L^a - 1)^m, then clear negative powers.
  long shift = 0;
  LaurentPoly q = LaurentPoly::constant(1);
  for (const auto& [a, m] : den_) {
    shift += a * m;
    for (long i = 0; i < m; ++i) q = q * cyclic(a);
  }
  LaurentPoly p = num_.shifted(shift);
  if (p.low() < 0) {
    q = q.shifted(-p.low());
    p = p.shifted(-p.low());
  } else if (p.low() > 0 && q.low() > 0) {
    long k = std::min(p.low(), q.low());
    p = p.shifted(-k);
    q = q.shifted(-k);
  }
  p = p * scalar_.get_num();
  q = q * scalar_.get_den();
  if (q.terms().rbegin()->second < 0) {
    p = p * BigInt(-1);
    q = q * BigInt(-1);
  }
  std::string ps = p.pretty(), qs = q.pretty();
  bool p_compound = p.terms().size() > 1;
  bool q_compound = q.terms().size() > 1 || (q.terms().begin()->first != 0 && q.terms().begin()->second != 1);
  if (q.terms().size() == 1 && q.low() == 0 && q.terms().begin()->second == 1) return ps;
  return (p_compound ? "(" + ps + ")" : ps) + "/" + (q_compound ? "(" + qs + ")" : qs);
}

// ---------------------------------------------------------------- Grassmannian class

namespace {

// prod_{i<d} (L^{n-i} - 1) / (L^{i+1} - 1), written with (1 - L^-a) factors.
std::pair<LocRingElem, LocRingElem> binomial_parts(long n, long d) {
  if (n < 0 || d < 0 || d > n) throw DomainError("gaussian_binomial requires 0 <= d <= n");
  LaurentPoly top = LaurentPoly::constant(1), bottom = LaurentPoly::constant(1);
  std::map<long, long> top_den, bottom_den;
  long shift = 0;
  for (long i = 0; i < d; ++i) {
    // L^{n-i} - 1 = L^{n-i} (1 - L^{-(n-i)})
    top = top * one_minus(n - i);
    bottom = bottom * one_minus(i + 1);
    shift += (n - i) - (i + 1);
    ++bottom_den[i + 1];
    ++top_den[n - i];
  }
  LocRingElem forward(Rational(1), top.shifted(shift), bottom_den);
  LocRingElem backward(Rational(1), bottom.shifted(-shift), top_den);
  return {forward, backward};
}

}  // namespace

LocRingElem gaussian_binomial(long n, long d) { return binomial_parts(n, d).first; }

LocRingElem gaussian_binomial_inverse(long n, long d) { return binomial_parts(n, d).second; }

}  // namespace pcc
