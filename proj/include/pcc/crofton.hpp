#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pcc/cone.hpp"
#include "pcc/grass.hpp"

namespace pcc {

struct CroftonOptions {
  FrameRule frame = FrameRule::kForward;
  int budget = 1;  // extra Grassmannian levels before unresolved mass is closed
  int jobs = 1;
  bool breakdown = false;
  /// Largest image (in classes) that is enumerated explicitly; beyond it the
  /// change-of-variables value stands in for the projected density.
  long projection_cap = 1L << 16;
  /// Applied to every projected function before its density is taken; a test
  /// hook for the negative control.
  std::function<void(WeightedConeFn&)> perturb;
};

struct VBreakdown {
  std::string v;        // GrassPoint text of the top-level class
  Rational weight;
  Rational value;       // weighted contribution at q = p
  int refined_levels;   // 0 when resolved at the top level
};

struct RhsResult {
  Rational value;          // at q = p, from projected densities
  LocRingElem symbolic;    // same sum with Jacobian-form densities
  long generic_count = 0;  // top-level classes resolved for every subspace
  long refined_count = 0;  // top-level classes that needed refinement
  Rational tail_mass;      // Grassmannian mass closed by the invariance argument
  long mismatches = 0;     // classes where projection and Jacobian forms differ at q = p
  long projected = 0;      // group evaluations done by explicit projection
  long unprojected = 0;    // group evaluations above projection_cap
  std::vector<VBreakdown> breakdown;
};

struct CroftonReport {
  LocRingElem lhs;
  Rational lhs_at_p;
  LocRingElem rhs;  // symbolic
  Rational rhs_at_p;
  int level = 0;
  long generic_count = 0;
  long refined_count = 0;
  Rational tail_mass;
  long mismatches = 0;
  bool stabilized = false;         // levels m and m+1 agree at q = p
  bool symbolic_stabilized = false;  // and also as LocRingElem
  bool equal = false;           // exact equality at q = p
  bool symbolic_equal = false;  // canonical LocRingElem equality
  std::vector<VBreakdown> breakdown;
};

RhsResult rhs_integral(const ConeSet& x, int m, const CroftonOptions& opts = {});
CroftonReport verify_crofton(const ConeSet& x, int m_max, const CroftonOptions& opts = {});

/// p^{v(x) - v(Px)} P x
RatVector phi_map(const RatVector& x, const RatMatrix& proj, long p);

/// v(det M) - d v(M y) for M = proj A on the given group and y a class representative.
long jacobian_valuation(const ConeSet& x, std::size_t group, const Residues& cls, const RatMatrix& proj);

/// Density of a group's projection written through the change of variables:
/// (1/(e(1-L^-d))) Σ_φ Σ_j L^{-j} μ(base classes with Jacobian valuation j).
LocRingElem jacobian_density(const ConeSet& x, std::size_t group, const RatMatrix& proj);

/// Σ_V w_V L^{-v(Jac)} at one base class, refining unresolved V and closing the
/// remaining mass with weight 1.
struct CalibrationResult {
  LocRingElem symbolic;
  Rational value;
  Rational tail_mass;
};
CalibrationResult c_constant_check(const ConeSet& x, std::size_t group, const Residues& cls, int m,
                                   const CroftonOptions& opts = {});

struct DecompositionResult {
  Rational lhs;  // Σ_j L^{dj} μ(p_V X ∩ S(0,j)) at q = p
  Rational rhs;  // Σ_i L^{di} μ(D_i) at q = p
  bool sum_identity = false;
  bool scaling_identity = false;  // every (i, j), symbolically and at q = p
  int pairs = 0;                  // number of nonempty B_i^j
};
/// Requires a single-piece cone and det(proj A) != 0.
DecompositionResult d_decomposition_check(const ConeSet& x, const RatMatrix& proj);

}  // namespace pcc
