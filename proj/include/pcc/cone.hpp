#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "pcc/arith.hpp"
#include "pcc/matrix.hpp"
#include "pcc/mring.hpp"
#include "pcc/qp.hpp"

namespace pcc {

/// {λ p^phase A y : λ ∈ Λ_{e,r}, y ∈ base}, with Λ_{e,r} the scalars of
/// valuation divisible by e and ac_r = 1.
struct ConePiece {
  int e = 1;
  int r = 1;
  int phase = 0;
  RatMatrix A;  // n x d, p-integral, some d x d minor a unit
  CellSet base;
};

/// The pieces of one linear subspace, rewritten over a common embedding A.
/// bases[φ] collects every piece of phase φ, so the subspace part of X is
/// ⊔_φ p^φ Λ A bases[φ].
struct SubspaceGroup {
  RatMatrix A;
  std::vector<std::size_t> minor;  // unit minor rows of A
  std::vector<CellSet> bases;      // indexed by phase, saturated
};

class ConeSet {
 public:
  ConeSet(long p, int n, int d, std::vector<ConePiece> pieces);

  long prime() const { return p_; }
  int n() const { return n_; }
  int d() const { return d_; }
  const std::vector<ConePiece>& pieces() const { return pieces_; }
  bool normalized() const { return normalized_; }
  bool origin() const { return origin_; }
  /// Common (e, r, s); only meaningful once normalized.
  int e() const { return e_; }
  int r() const { return r_; }
  int depth() const { return s_; }
  /// Subspace groups of a normalized set; computed once by normalize.
  const std::vector<SubspaceGroup>& groups() const;

  friend ConeSet normalize(const ConeSet& x);
  friend ConeSet tangent_cone(const ConeSet& x);

 private:
  long p_;
  int n_;
  int d_;
  std::vector<ConePiece> pieces_;
  bool normalized_ = false;
  bool origin_ = false;
  int e_ = 1;
  int r_ = 1;
  int s_ = 0;
  std::vector<SubspaceGroup> groups_;
};

ConeSet normalize(const ConeSet& x);
bool member(const ConeSet& x, const RatVector& point);
LocRingElem sphere_slice_measure(const ConeSet& x, long i);
LocRingElem ball_measure(const ConeSet& x, long n0);
LocRingElem theta_sequence(const ConeSet& x, long n0);
LocRingElem local_density(const ConeSet& x);
/// X together with the origin; in-scope cones are their own tangent cones.
ConeSet tangent_cone(const ConeSet& x);

/// Constructible function on Q_p^d: integer weights on classes z + p^s Z_p^d
/// of the unit sphere, one layer per phase, each layer a Λ_{e,r}-cone.
class WeightedConeFn {
 public:
  WeightedConeFn(long p, int d, int e, int r, int depth);

  long prime() const { return p_; }
  int d() const { return d_; }
  int e() const { return e_; }
  int r() const { return r_; }
  int depth() const { return depth_; }

  using Key = std::pair<int, std::uint64_t>;  // (phase, class code)
  const std::map<Key, long>& weights() const { return weights_; }
  void add(int phase, const Residues& cls, long weight);
  void add_code(int phase, std::uint64_t code, long weight);
  /// Weight 1 on each key; keys may repeat.
  void add_support(std::vector<Key> keys);
  /// Same function at a finer depth.
  WeightedConeFn refine(int depth) const;
  /// Classes of one phase carrying exactly weight w.
  CellSet level_set(int phase, long w) const;
  Residues decode(std::uint64_t code) const { return probe_.decode(code); }

  friend bool operator==(const WeightedConeFn& a, const WeightedConeFn& b);

 private:
  long p_;
  int d_;
  int e_;
  int r_;
  int depth_;
  CellSet probe_;
  std::map<Key, long> weights_;
};

WeightedConeFn operator+(const WeightedConeFn& a, const WeightedConeFn& b);
WeightedConeFn scale_weights(const WeightedConeFn& f, long factor);
LocRingElem local_density_fn(const WeightedConeFn& f);
/// The same density at q = p, from class counts.
Rational local_density_fn_at_p(const WeightedConeFn& f);

/// det(P A) != 0 on every subspace group and no unit direction of V, read mod
/// p^s, lies in the direction set of X.
bool genericity_test(const ConeSet& x, const RatMatrix& v_basis, const RatMatrix& proj);

/// Depth at which project is exact.
int projection_min_depth(const ConeSet& x, const RatMatrix& proj);
/// Multiplicity-weighted image of X under y -> proj y. Requires det(proj A) != 0
/// on every group; depth defaults to projection_min_depth.
WeightedConeFn project(const ConeSet& x, const RatMatrix& proj, std::optional<int> depth = std::nullopt);
/// Image of one subspace group, weight 1 on its support.
WeightedConeFn project_group(const ConeSet& x, std::size_t group, const RatMatrix& proj, int depth);
/// Valuation of det(proj A) on a group.
Valuation group_det_valuation(const ConeSet& x, std::size_t group, const RatMatrix& proj);
/// Density of the single group as a cone on its own (used for the Grassmannian tail).
LocRingElem group_density(const ConeSet& x, std::size_t group);

}  // namespace pcc
