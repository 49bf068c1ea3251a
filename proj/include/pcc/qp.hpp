#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pcc/arith.hpp"
#include "pcc/matrix.hpp"
#include "pcc/mring.hpp"

namespace pcc {

/// An exact rational viewed as an element of Q_p.
class PAdicScalar {
 public:
  PAdicScalar(Rational value, long prime);

  const Rational& value() const { return value_; }
  long prime() const { return prime_; }

  Valuation valuation() const { return pcc::valuation(value_, prime_); }
  /// x * p^{-v(x)}; throws for zero.
  Rational unit_part() const;
  /// First r p-adic digits of the unit part, as a residue in [0, p^r).
  std::int64_t angular_component(int r) const;

 private:
  Rational value_;
  long prime_;
};

enum class CellOp { kUnion, kIntersect, kSubtract };

/// Finite union of residue classes c + p^s Z_p^d inside Z_p^d.
///
/// Classes are stored as sorted mixed-radix codes; the public surface works
/// with residue vectors.
class CellSet {
 public:
  CellSet() : CellSet(2, 0, 0, false) {}
  CellSet(long p, int dim, int depth, bool sphere);
  CellSet(long p, int dim, int depth, const std::vector<Residues>& classes, bool sphere);

  static CellSet unit_sphere(long p, int dim, int depth);
  static CellSet whole(long p, int dim, int depth);

  long prime() const { return p_; }
  int dim() const { return dim_; }
  int depth() const { return depth_; }
  bool sphere() const { return sphere_; }
  std::size_t size() const { return codes_.size(); }
  bool empty() const { return codes_.empty(); }
  std::int64_t modulus() const { return modulus_; }

  std::vector<Residues> classes() const;
  Residues class_at(std::size_t i) const { return decode(codes_[i]); }
  bool contains_class(const Residues& c) const;
  /// Membership of a p-integral point.
  bool contains_point(const RatVector& x) const;

  /// Same denotation at a finer depth.
  CellSet refine(int depth) const;
  /// Haar measure, |classes| * L^{-s d} at L = p; see qp.cpp for the reading
  /// of class counts as polynomials in L.
  LocRingElem measure() const;

  /// The union of u * U over u = 1 mod p^r, which is the base of a cone
  /// stable under the ac_r = 1 scalars.
  CellSet saturate(int r) const;

  std::string str() const;
  static CellSet parse(const std::string& text);

  friend bool operator==(const CellSet& a, const CellSet& b) {
    return a.p_ == b.p_ && a.dim_ == b.dim_ && a.depth_ == b.depth_ && a.codes_ == b.codes_;
  }

  // Low-level access for tight enumeration loops.
  std::uint64_t encode(const Residues& c) const;
  Residues decode(std::uint64_t code) const;
  const std::vector<std::uint64_t>& codes() const { return codes_; }
  static CellSet from_codes(long p, int dim, int depth, std::vector<std::uint64_t> codes, bool sphere);

 private:
  long p_;
  int dim_;
  int depth_;
  std::int64_t modulus_;
  bool sphere_;
  std::vector<std::uint64_t> codes_;
};

/// Measure of a disjoint union of classes c + p^σ Z_p^dim given with their own
/// depths σ; equals the measure of the union refined to a common depth.
LocRingElem measure_classes(long p, int dim, const std::vector<std::pair<Residues, int>>& classes);
CellSet cell_boolean(const CellSet& a, const CellSet& b, CellOp op);

/// Result of mapping a cell set through a nonsingular rational matrix M = p^shift M'.
struct LinearImage {
  long shift;
  CellSet image;  // M'(a) at the requested depth
};

/// Smallest output depth for which cell_linear_image is exact.
int linear_image_min_depth(const RatMatrix& m, const CellSet& a);
LinearImage cell_linear_image(const RatMatrix& m, const CellSet& a, int out_depth);

/// Whether a residue vector has a coordinate prime to p.
bool has_unit_coordinate(const Residues& c, long p);

}  // namespace pcc
