#include "pcc/grass.hpp"

#include <algorithm>
#include <sstream>

namespace pcc {

namespace {

bool is_pivot_row(const std::vector<int>& pivots, int row) {
  return std::find(pivots.begin(), pivots.end(), row) != pivots.end();
}

struct Slot {
  int row;
  int col;
  bool forced;  // must be divisible by p
};

std::vector<Slot> free_slots(int n, const std::vector<int>& pivots) {
  std::vector<Slot> out;
  int k = static_cast<int>(pivots.size());
  for (int r = 0; r < n; ++r) {
    if (is_pivot_row(pivots, r)) continue;
    for (int j = 0; j < k; ++j) out.push_back({r, j, r < pivots[j]});
  }
  return out;
}

std::vector<std::vector<int>> pivot_sets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  if (k > n) return out;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

}  // namespace

GrassPoint::GrassPoint(long p, int m, int n, std::vector<int> pivots, std::vector<std::int64_t> entries)
    : p_(p), m_(m), n_(n), pivots_(std::move(pivots)), entries_(std::move(entries)) {
  if (!is_prime(p_)) throw DomainError("p must be prime, got " + std::to_string(p_));
  if (m_ < 1) throw DomainError("Grassmannian level must be at least 1");
  const int kk = k();
  if (kk > n_ || n_ < 0) throw DomainError("Grassmannian needs 0 <= k <= n");
  if (static_cast<int>(entries_.size()) != n_ * kk) throw DomainError("Grassmannian point has wrong number of entries");
  if (!std::is_sorted(pivots_.begin(), pivots_.end()) ||
      std::adjacent_find(pivots_.begin(), pivots_.end()) != pivots_.end())
    throw DomainError("pivots must be strictly increasing");
  for (int pv : pivots_)
    if (pv < 0 || pv >= n_) throw DomainError("pivot out of range");
  const std::int64_t mod = ipow(p_, m_);
  for (int r = 0; r < n_; ++r) {
    for (int j = 0; j < kk; ++j) {
      std::int64_t x = at(r, j);
      if (x < 0 || x >= mod) throw DomainError("Grassmannian entry out of range [0, p^m)");
      if (is_pivot_row(pivots_, r)) {
        if (x != (r == pivots_[j] ? 1 : 0)) throw DomainError("pivot rows must hold the identity block");
      } else if (r < pivots_[j] && x % p_ != 0) {
        throw DomainError("entry above a pivot must be divisible by p");
      }
    }
  }
}

RatMatrix GrassPoint::basis() const {
  RatMatrix b(n_, k());
  for (int r = 0; r < n_; ++r)
    for (int j = 0; j < k(); ++j) b(r, j) = Rational(static_cast<long>(at(r, j)));
  return b;
}

std::vector<GrassPoint> GrassPoint::children() const {
  std::vector<Slot> slots = free_slots(n_, pivots_);
  const std::int64_t step = ipow(p_, m_);
  std::int64_t total = ipow(p_, static_cast<int>(slots.size()));
  std::vector<GrassPoint> out;
  out.reserve(total);
  for (std::int64_t t = 0; t < total; ++t) {
    std::vector<std::int64_t> e = entries_;
    std::int64_t rest = t;
    for (auto it = slots.rbegin(); it != slots.rend(); ++it) {
      e[it->row * k() + it->col] += step * (rest % p_);
      rest /= p_;
    }
    out.emplace_back(p_, m_ + 1, n_, pivots_, std::move(e));
  }
  return out;
}

GrassPoint GrassPoint::reduce(int level) const {
  if (level < 1 || level > m_) throw DomainError("cannot reduce to that level");
  const std::int64_t mod = ipow(p_, level);
  std::vector<std::int64_t> e = entries_;
  for (auto& x : e) x %= mod;
  return GrassPoint(p_, level, n_, pivots_, std::move(e));
}

std::string GrassPoint::str() const {
  std::ostringstream os;
  os << "p=" << p_ << " m=" << m_ << " n=" << n_ << " k=" << k() << " pivots=[";
  for (std::size_t i = 0; i < pivots_.size(); ++i) os << (i ? "," : "") << pivots_[i];
  os << "] :";
  for (auto x : entries_) os << ' ' << x;
  return os.str();
}

namespace {

long field(std::istringstream& is, const std::string& key) {
  std::string tok;
  if (!(is >> tok) || tok.rfind(key + "=", 0) != 0) throw DomainError("Grassmannian text: expected " + key + "=");
  try {
    std::size_t used = 0;
    long v = std::stol(tok.substr(key.size() + 1), &used);
    if (used + key.size() + 1 != tok.size()) throw DomainError("Grassmannian text: bad " + key);
    return v;
  } catch (const std::logic_error&) {
    throw DomainError("Grassmannian text: bad " + key);
  }
}

}  // namespace

GrassPoint GrassPoint::parse(const std::string& text) {
  std::istringstream is(text);
  long p = field(is, "p"), m = field(is, "m"), n = field(is, "n"), k = field(is, "k");
  std::string tok;
  if (!(is >> tok) || tok.rfind("pivots=[", 0) != 0 || tok.back() != ']')
    throw DomainError("Grassmannian text: expected pivots=[...]");
  std::vector<int> pivots;
  std::istringstream ps(tok.substr(8, tok.size() - 9));
  std::string part;
  try {
    while (std::getline(ps, part, ',')) pivots.push_back(std::stoi(part));
  } catch (const std::logic_error&) {
    throw DomainError("Grassmannian text: bad pivot list");
  }
  if (static_cast<long>(pivots.size()) != k) throw DomainError("Grassmannian text: pivot count differs from k");
  if (!(is >> tok) || tok != ":") throw DomainError("Grassmannian text: expected ':'");
  std::vector<std::int64_t> entries;
  while (is >> tok) {
    try {
      std::size_t used = 0;
      entries.push_back(std::stoll(tok, &used));
      if (used != tok.size()) throw DomainError("Grassmannian text: bad entry " + tok);
    } catch (const std::logic_error&) {
      throw DomainError("Grassmannian text: bad entry " + tok);
    }
  }
  return GrassPoint(p, static_cast<int>(m), static_cast<int>(n), std::move(pivots), std::move(entries));
}

std::vector<GrassPoint> enumerate_grassmannian(int n, int k, long q) { return enumerate_grassmannian_lifts(n, k, q, 1); }

std::vector<GrassPoint> enumerate_grassmannian_lifts(int n, int k, long p, int m) {
  if (k < 0 || k > n) throw DomainError("Grassmannian needs 0 <= k <= n");
  if (m < 1) throw DomainError("Grassmannian level must be at least 1");
  if (!is_prime(p)) throw DomainError("p must be prime, got " + std::to_string(p));
  const std::int64_t mod = ipow(p, m);
  std::vector<GrassPoint> out;
  for (const auto& pivots : pivot_sets(n, k)) {
    std::vector<Slot> slots = free_slots(n, pivots);
    std::vector<std::int64_t> base(n * k, 0);
    for (int j = 0; j < k; ++j) base[pivots[j] * k + j] = 1;
    // odometer over slot values; forced slots step by p
    std::vector<std::int64_t> digit(slots.size(), 0);
    auto advance = [&] {
      for (std::size_t i = slots.size(); i-- > 0;) {
        digit[i] += slots[i].forced ? p : 1;
        if (digit[i] < mod) return true;
        digit[i] = 0;
      }
      return false;
    };
    do {
      std::vector<std::int64_t> e = base;
      for (std::size_t i = 0; i < slots.size(); ++i) e[slots[i].row * k + slots[i].col] = digit[i];
      out.emplace_back(p, m, n, pivots, std::move(e));
    } while (advance());
  }
  std::sort(out.begin(), out.end());
  return out;
}

BigInt grassmannian_lift_count(int n, int k, long p, int m) {
  if (k < 0 || k > n) throw DomainError("Grassmannian needs 0 <= k <= n");
  BigInt total = 0;
  for (const auto& pivots : pivot_sets(n, k)) {
    unsigned long free = 0, forced = 0;
    for (const auto& s : free_slots(n, pivots)) (s.forced ? forced : free) += 1;
    total += big_pow(BigInt(p), free * m + forced * (m - 1));
  }
  return total;
}

Rational uniform_weight(int n, int k, long p, int m) {
  Rational w(BigInt(1), grassmannian_lift_count(n, k, p, m));
  w.canonicalize();
  return w;
}

RatMatrix complement_frame(const GrassPoint& v, FrameRule rule) {
  const int n = v.n(), k = v.k();
  RatMatrix g(n, n);
  RatMatrix b = v.basis();
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < k; ++j) g(r, j) = b(r, j);
  int col = k;
  std::size_t rank = static_cast<std::size_t>(k);
  for (int t = 0; t < n && col < n; ++t) {
    int i = rule == FrameRule::kForward ? t : n - 1 - t;
    RatMatrix trial = g.select_cols(0, col);
    RatMatrix e(n, 1);
    e(i, 0) = 1;
    trial = trial.hconcat(e);
    if (trial.rank_mod_p(v.prime()) > rank) {
      for (int r = 0; r < n; ++r) g(r, col) = e(r, 0);
      ++col;
      ++rank;
    }
  }
  return g;
}

RatMatrix projection_matrix(const GrassPoint& v, FrameRule rule) {
  RatMatrix inv = complement_frame(v, rule).inverse();
  const int n = v.n(), d = n - v.k();
  RatMatrix p(d, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < n; ++j) p(i, j) = inv(v.k() + i, j);
  return p;
}

}  // namespace pcc
