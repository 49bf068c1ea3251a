#include "pcc/oracle.hpp"

#include <cmath>
#include <numeric>
#include <unordered_set>

namespace pcc {

int oracle_min_level(const ConeSet& x) {
  int s = 1, r = 1, e = 1;
  for (const auto& pc : x.pieces()) {
    s = std::max(s, pc.base.depth());
    r = std::max(r, pc.r);
    e = std::lcm(e, pc.e);
  }
  return s + r + e;
}

double oracle_cost(const ConeSet& x, int m) {
  double total = 0;
  for (const auto& pc : x.pieces())
    total += std::pow(double(x.prime()), m - pc.r) * double(pc.base.size()) *
             std::pow(double(x.prime()), double(m - pc.base.depth()) * x.d());
  return total;
}

OracleCount oracle_slice(const ConeSet& x, long i, int m) {
  const int need = oracle_min_level(x);
  if (m < need) throw DomainError("oracle level " + std::to_string(m) + " below threshold; need at least " + std::to_string(need));
  if (i < 0) throw DomainError("oracle slice index must be nonnegative");
  const long p = x.prime();
  const int n = x.n(), d = x.d();
  const std::int64_t mod = ipow(p, m);
  // Pieces on the same subspace share their classes; different subspaces
  // meet in measure zero, so each subspace is counted on its own.
  std::vector<std::size_t> owner(x.pieces().size());
  for (std::size_t k = 0; k < x.pieces().size(); ++k) {
    owner[k] = k;
    for (std::size_t j = 0; j < k; ++j)
      if (owner[j] == j && x.pieces()[j].A.hconcat(x.pieces()[k].A).rank() == static_cast<std::size_t>(d)) {
        owner[k] = j;
        break;
      }
  }
  std::vector<std::unordered_set<std::uint64_t>> seen_by(x.pieces().size());
  Residues y(d), v(n);
  for (std::size_t k_piece = 0; k_piece < x.pieces().size(); ++k_piece) {
    const auto& pc = x.pieces()[k_piece];
    auto& seen = seen_by[owner[k_piece]];
    if (((i - pc.phase) % pc.e + pc.e) % pc.e != 0) continue;
    std::vector<std::vector<std::int64_t>> a(n, std::vector<std::int64_t>(d));
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < d; ++c) a[r][c] = reduce_mod(pc.A(r, c), p, mod);
    const std::int64_t step = ipow(p, pc.base.depth());
    const std::int64_t lifts_per_coord = ipow(p, m - pc.base.depth());
    std::int64_t lifts = 1;
    for (int c = 0; c < d; ++c) lifts *= lifts_per_coord;
    const std::int64_t pr = ipow(p, pc.r);
    for (std::size_t k = 0; k < pc.base.size(); ++k) {
      Residues cls = pc.base.class_at(k);
      for (std::int64_t t = 0; t < lifts; ++t) {
        std::int64_t rest = t;
        for (int c = 0; c < d; ++c) {
          y[c] = cls[c] + step * (rest % lifts_per_coord);
          rest /= lifts_per_coord;
        }
        for (int r = 0; r < n; ++r) {
          v[r] = 0;
          for (int c = 0; c < d; ++c) v[r] = (v[r] + mul_mod(a[r][c], y[c], mod)) % mod;
        }
        for (std::int64_t u = 1; u < mod; u += pr) {
          std::uint64_t code = 0;
          for (int r = n - 1; r >= 0; --r)
            code = code * static_cast<std::uint64_t>(mod) + static_cast<std::uint64_t>(mul_mod(u, v[r], mod));
          seen.insert(code);
        }
      }
    }
  }
  long count = 0;
  for (const auto& seen : seen_by) count += static_cast<long>(seen.size());
  Rational measure = Rational(count) * rat_pow(Rational(p), -(static_cast<long>(m) + i) * d);
  return {count, measure};
}

}  // namespace pcc
