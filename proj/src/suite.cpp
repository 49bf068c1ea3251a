#include "pcc/suite.hpp"

#include "pcc/oracle.hpp"

namespace pcc {

RatMatrix int_matrix(const std::vector<std::vector<long>>& rows) {
  std::vector<std::vector<Rational>> r;
  for (const auto& row : rows) {
    std::vector<Rational> out;
    for (long v : row) out.emplace_back(v);
    r.push_back(std::move(out));
  }
  return RatMatrix::from_rows(r);
}

ConePiece make_piece(long p, int e, int r, int phase, const std::vector<std::vector<long>>& a, int depth,
                     const std::vector<Residues>& classes) {
  RatMatrix m = int_matrix(a);
  return {e, r, phase, m, CellSet(p, static_cast<int>(m.cols()), depth, classes, true)};
}

namespace {

Rational random_entry(std::mt19937_64& rng, long p) {
  // small p-integral rationals, occasionally with a denominator prime to p
  long num = static_cast<long>(rng() % 13) - 6;
  long den = 1;
  if (rng() % 4 == 0) {
    den = 2 + static_cast<long>(rng() % 3);
    if (den % p == 0) den += 1;
    if (den % p == 0) den += 1;
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

RatMatrix random_embedding(std::mt19937_64& rng, long p, int n, int d) {
  while (true) {
    RatMatrix a(n, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = random_entry(rng, p);
    if (a.unit_minor(p)) return a;
  }
}

RatMatrix random_unimodular(std::mt19937_64& rng, long p, int d) {
  while (true) {
    RatMatrix g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = random_entry(rng, p);
    if (g.p_integral(p) && valuation(g.determinant(), p) == Valuation::finite(0)) return g;
  }
}

CellSet random_base(std::mt19937_64& rng, long p, int d, int s) {
  CellSet sphere = CellSet::unit_sphere(p, d, s);
  std::vector<std::uint64_t> keep;
  const unsigned density = 2 + static_cast<unsigned>(rng() % 4);
  for (auto c : sphere.codes())
    if (rng() % density == 0) keep.push_back(c);
  if (keep.empty()) keep.push_back(sphere.codes()[rng() % sphere.size()]);
  return CellSet::from_codes(p, d, s, std::move(keep), true);
}

}  // namespace

ConeSet random_cone(std::mt19937_64& rng, double max_cost) {
  static const long primes[] = {2, 3, 5};
  while (true) {
    const long p = primes[rng() % 3];
    const int d = 1 + static_cast<int>(rng() % 2);
    const int n = d + static_cast<int>(rng() % (4 - d));
    const int big_e = 1 + static_cast<int>(rng() % 3);
    const int count = 1 + static_cast<int>(rng() % 3);
    const bool two_subspaces = n > d && rng() % 2 == 0;
    RatMatrix first = random_embedding(rng, p, n, d);
    RatMatrix second = first;
    if (two_subspaces) {
      do second = random_embedding(rng, p, n, d);
      while (first.hconcat(second).rank() == static_cast<std::size_t>(d));
    }
    std::vector<ConePiece> pieces;
    for (int k = 0; k < count; ++k) {
      ConePiece pc;
      pc.e = rng() % 2 ? big_e : 1;
      pc.r = 1 + static_cast<int>(rng() % 2);
      pc.phase = static_cast<int>(rng() % pc.e);
      const RatMatrix& home = (two_subspaces && k % 2 == 1) ? second : first;
      pc.A = home * random_unimodular(rng, p, d);
      pc.base = random_base(rng, p, d, 1 + static_cast<int>(rng() % 2));
      pieces.push_back(std::move(pc));
    }
    ConeSet x(p, n, d, std::move(pieces));
    if (oracle_cost(x, oracle_min_level(x)) <= max_cost) return x;
  }
}

std::vector<CuratedCase> curated_suite() {
  std::vector<CuratedCase> out;
  auto add = [&](std::string name, long p, int n, int d, std::vector<ConePiece> pieces) {
    out.push_back({std::move(name), ConeSet(p, n, d, std::move(pieces))});
  };
  add("single ray in Q_3^2", 3, 2, 1, {make_piece(3, 1, 1, 0, {{1}, {0}}, 1, {{1}})});
  add("two colliding rays in Q_3^2", 3, 2, 1,
      {make_piece(3, 1, 1, 0, {{1}, {0}}, 1, {{1}}), make_piece(3, 1, 1, 0, {{0}, {1}}, 1, {{1}})});
  add("ray with e=2 r=2 phase 1 in Q_2^2", 2, 2, 1, {make_piece(2, 2, 2, 1, {{1}, {2}}, 2, {{1}})});
  add("line cone in Q_5^3", 5, 3, 1, {make_piece(5, 1, 1, 0, {{1}, {2}, {3}}, 1, {{1}, {2}})});
  add("two rays in Q_3^3", 3, 3, 1,
      {make_piece(3, 1, 1, 0, {{1}, {1}, {0}}, 1, {{1}}), make_piece(3, 2, 1, 1, {{0}, {1}, {2}}, 1, {{2}})});
  add("ray with (e,r)=(3,2) in Q_2^3", 2, 3, 1, {make_piece(2, 3, 2, 2, {{1}, {0}, {1}}, 2, {{1}, {3}})});
  add("graph cone in Q_3^3", 3, 3, 2,
      {make_piece(3, 1, 1, 0, {{1, 0}, {0, 1}, {1, 2}}, 1, {{1, 0}, {1, 1}, {0, 2}})});
  add("graph cone e=2 phase 1 in Q_2^3", 2, 3, 2,
      {make_piece(2, 2, 1, 1, {{1, 0}, {0, 1}, {1, 1}}, 2, {{1, 0}, {1, 2}, {3, 1}})});
  add("graph cone (e,r)=(3,2) in Q_3^3", 3, 3, 2,
      {make_piece(3, 3, 2, 1, {{1, 0}, {0, 1}, {2, 1}}, 1, {{1, 0}, {2, 1}})});
  add("plane in Q_5^3", 5, 3, 2, {{1, 1, 0, int_matrix({{1, 0}, {0, 1}, {3, 4}}), CellSet::unit_sphere(5, 2, 1)}});
  add("full space Q_3^2", 3, 2, 2, {make_piece(3, 2, 1, 0, {{1, 0}, {0, 1}}, 1, {{1, 0}, {1, 1}, {2, 1}})});
  add("three rays in Q_5^2", 5, 2, 1,
      {make_piece(5, 1, 1, 0, {{1}, {0}}, 1, {{1}}), make_piece(5, 1, 1, 0, {{1}, {1}}, 1, {{3}}),
       make_piece(5, 1, 1, 0, {{0}, {1}}, 1, {{1}, {4}})});
  add("two planes in Q_3^3", 3, 3, 2,
      {make_piece(3, 1, 1, 0, {{1, 0}, {0, 1}, {0, 0}}, 1, {{1, 0}, {0, 1}}),
       make_piece(3, 1, 1, 0, {{1, 0}, {0, 0}, {0, 1}}, 1, {{1, 1}, {2, 1}})});
  return out;
}

}  // namespace pcc
