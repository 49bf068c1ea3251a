#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcc/arith.hpp"
#include "pcc/matrix.hpp"

namespace pcc {

/// A free rank-k direct summand of (Z/p^m)^n (an F_p-subspace when m = 1),
/// stored as its unique basis in pivot normal form.
///
/// Column j has a 1 in row pivots[j] and 0 in the other pivot rows. Non-pivot
/// entries above the pivot are divisible by p; the rest are free mod p^m.
class GrassPoint {
 public:
  GrassPoint(long p, int m, int n, std::vector<int> pivots, std::vector<std::int64_t> entries);

  long prime() const { return p_; }
  int level() const { return m_; }
  int n() const { return n_; }
  int k() const { return static_cast<int>(pivots_.size()); }
  const std::vector<int>& pivots() const { return pivots_; }
  /// Basis entry at (row, column), row-major storage.
  std::int64_t at(int row, int col) const { return entries_[row * k() + col]; }
  const std::vector<std::int64_t>& entries() const { return entries_; }

  RatMatrix basis() const;
  /// The p^{k(n-k)} points of level m+1 reducing to this one.
  std::vector<GrassPoint> children() const;
  GrassPoint reduce(int level) const;

  std::string str() const;
  static GrassPoint parse(const std::string& text);

  friend bool operator==(const GrassPoint&, const GrassPoint&) = default;
  friend auto operator<=>(const GrassPoint&, const GrassPoint&) = default;

 private:
  long p_;
  int m_;
  int n_;
  std::vector<int> pivots_;
  std::vector<std::int64_t> entries_;
};

std::vector<GrassPoint> enumerate_grassmannian(int n, int k, long q);
std::vector<GrassPoint> enumerate_grassmannian_lifts(int n, int k, long p, int m);
/// |G(n,k)(Z/p^m)| computed from the normal-form count.
BigInt grassmannian_lift_count(int n, int k, long p, int m);
Rational uniform_weight(int n, int k, long p, int m);

enum class FrameRule {
  kForward,   // e_1, ..., e_n
  kBackward,  // e_n, ..., e_1
};

/// n x n integer frame whose first k columns are V's basis; det is a p-adic unit.
RatMatrix complement_frame(const GrassPoint& v, FrameRule rule = FrameRule::kForward);
/// Last n-k rows of g^{-1}: the quotient map K^n -> K^n/V = K^{n-k}.
RatMatrix projection_matrix(const GrassPoint& v, FrameRule rule = FrameRule::kForward);

}  // namespace pcc
