#pragma once

#include "pcc/arith.hpp"
#include "pcc/cone.hpp"

namespace pcc {

/// Smallest level the class-counting oracle accepts: max depth + max r + lcm e.
int oracle_min_level(const ConeSet& x);

struct OracleCount {
  long classes;     // distinct classes of X ∩ S(0,i) mod p^{m+i}, per subspace
  Rational measure; // classes * p^{-(m+i) d}
};

/// Brute force: enumerate u = 1 mod p^r and base points mod p^m for each raw
/// piece, collect the distinct vectors u A y mod p^m per subspace and add up.
OracleCount oracle_slice(const ConeSet& x, long i, int m);

/// Number of (u, y) pairs oracle_slice would visit.
double oracle_cost(const ConeSet& x, int m);

}  // namespace pcc
