#pragma once
// Brute-force reference computations used only by the test suites. Nothing
// here calls into the library's own enumeration or measure code.

#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

using Vec = std::vector<int>;

/// Number of d-dimensional subspaces of F_q^n, counted by collecting the
/// spans of all d-tuples of vectors as explicit point sets.
inline long count_subspaces(int n, int d, int q) {
  long total = 1;
  for (int i = 0; i < n; ++i) total *= q;
  auto vec_of = [&](long code) {
    Vec v(n);
    for (int i = 0; i < n; ++i) {
      v[i] = static_cast<int>(code % q);
      code /= q;
    }
    return v;
  };
  auto code_of = [&](const Vec& v) {
    long c = 0;
    for (int i = n - 1; i >= 0; --i) c = c * q + v[i];
    return c;
  };
  std::set<std::vector<long>> spans;
  std::vector<long> tuple(d, 0);
  long combos = 1;
  for (int i = 0; i < d; ++i) combos *= total;
  long coeff_count = 1;
  for (int i = 0; i < d; ++i) coeff_count *= q;
  for (long t = 0; t < combos; ++t) {
    long rest = t;
    std::vector<Vec> gens;
    for (int i = 0; i < d; ++i) {
      gens.push_back(vec_of(rest % total));
      rest /= total;
    }
    std::set<long> pts;
    for (long c = 0; c < coeff_count; ++c) {
      long cr = c;
      Vec v(n, 0);
      for (int i = 0; i < d; ++i) {
        int a = static_cast<int>(cr % q);
        cr /= q;
        for (int j = 0; j < n; ++j) v[j] = (v[j] + a * gens[i][j]) % q;
      }
      pts.insert(code_of(v));
    }
    if (static_cast<long>(pts.size()) == coeff_count) spans.insert(std::vector<long>(pts.begin(), pts.end()));
  }
  return static_cast<long>(spans.size());
}

/// Free rank-k direct summands of (Z/p^m)^n, as explicit point sets.
inline long count_summands(int n, int k, int p, int m) {
  int mod = 1;
  for (int i = 0; i < m; ++i) mod *= p;
  long total = 1;
  for (int i = 0; i < n; ++i) total *= mod;
  auto vec_of = [&](long code) {
    Vec v(n);
    for (int i = 0; i < n; ++i) {
      v[i] = static_cast<int>(code % mod);
      code /= mod;
    }
    return v;
  };
  long combos = 1;
  for (int i = 0; i < k; ++i) combos *= total;
  long coeff_count = 1;
  for (int i = 0; i < k; ++i) coeff_count *= mod;
  std::set<std::vector<long>> spans;
  for (long t = 0; t < combos; ++t) {
    long rest = t;
    std::vector<Vec> gens;
    for (int i = 0; i < k; ++i) {
      gens.push_back(vec_of(rest % total));
      rest /= total;
    }
    std::set<long> pts;
    for (long c = 0; c < coeff_count; ++c) {
      long cr = c;
      Vec v(n, 0);
      for (int i = 0; i < k; ++i) {
        int a = static_cast<int>(cr % mod);
        cr /= mod;
        for (int j = 0; j < n; ++j) v[j] = (v[j] + a * gens[i][j]) % mod;
      }
      long code = 0;
      for (int j = n - 1; j >= 0; --j) code = code * mod + v[j];
      pts.insert(code);
    }
    // A free summand of rank k has exactly mod^k elements and its generators
    // stay independent mod p.
    if (static_cast<long>(pts.size()) != coeff_count) continue;
    std::set<long> red;
    for (long c : pts) {
      Vec v = vec_of(c);
      long r = 0;
      for (int j = n - 1; j >= 0; --j) r = r * p + v[j] % p;
      red.insert(r);
    }
    long expect = 1;
    for (int i = 0; i < k; ++i) expect *= p;
    if (static_cast<long>(red.size()) == expect) spans.insert(std::vector<long>(pts.begin(), pts.end()));
  }
  return static_cast<long>(spans.size());
}

}  // namespace oracle
