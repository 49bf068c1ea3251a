#pragma once

#include <random>
#include <string>
#include <vector>

#include "pcc/cone.hpp"

namespace pcc {

/// Random in-scope cone: n <= 3, d <= 2, p in {2,3,5}, piece periods dividing
/// some E <= 3, r <= 2, base depth <= 2, one or two subspaces. Rejects draws
/// whose brute-force oracle would visit more than max_cost pairs.
ConeSet random_cone(std::mt19937_64& rng, double max_cost = 3e5);

struct CuratedCase {
  std::string name;
  ConeSet cone;
};

/// Hand-picked Crofton cases: rays, collisions, graph cones, phases, (e,r) up to (3,2).
std::vector<CuratedCase> curated_suite();

/// Helpers for building pieces from small integer data.
RatMatrix int_matrix(const std::vector<std::vector<long>>& rows);
ConePiece make_piece(long p, int e, int r, int phase, const std::vector<std::vector<long>>& a, int depth,
                     const std::vector<Residues>& classes);

}  // namespace pcc
