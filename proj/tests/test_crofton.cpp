#include <doctest.h>

#include <random>

#include "pcc/crofton.hpp"
#include "pcc/suite.hpp"

using namespace pcc;

namespace {

LocRingElem L(long k) { return LocRingElem::L_pow(k); }

Rational q(long a, long b = 1) {
  Rational x(a, b);
  x.canonicalize();
  return x;
}

ConeSet ray(long p, std::vector<long> u, int e = 1, int r = 1, int phase = 0) {
  std::vector<std::vector<long>> a;
  for (long x : u) a.push_back({x});
  return ConeSet(p, static_cast<int>(u.size()), 1, {make_piece(p, e, r, phase, a, 1, {{1}})});
}

ConeSet subspace(long p, int n, int d) {
  RatMatrix a(n, d);
  for (int i = 0; i < d; ++i) a(i, i) = 1;
  return ConeSet(p, n, d, {{1, 1, 0, a, CellSet::unit_sphere(p, d, 1)}});
}

RatVector vec(std::vector<long> v) {
  RatVector out;
  for (long x : v) out.emplace_back(x);
  return out;
}

}  // namespace

TEST_CASE("phi keeps the valuation of the point") {
  RatMatrix proj = int_matrix({{1, 1}});
  RatVector img = phi_map(vec({1, 3}), proj, 3);
  REQUIRE(img.size() == 1);
  CHECK(img[0] == 4);
  CHECK_THROWS_WITH(phi_map(vec({1, -1}), proj, 3), "point lies in the kernel direction of the projection");

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> coef(-40, 40);
  RatMatrix gen = int_matrix({{2, 1, 3}, {1, 5, 1}});
  for (int it = 0; it < 200; ++it) {
    RatVector x = vec({coef(rng), coef(rng), coef(rng)});
    if (vector_valuation(x, 3).is_infinite() || vector_valuation(gen * x, 3).is_infinite()) continue;
    x[0] /= 9;
    CHECK(vector_valuation(phi_map(x, gen, 3), 3) == vector_valuation(x, 3));
  }
}

TEST_CASE("Jacobian valuation of a linear map on a class") {
  ConeSet plane = normalize(subspace(3, 2, 2));
  CHECK(jacobian_valuation(plane, 0, {1, 0}, int_matrix({{1, 0}, {0, 3}})) == 1);
  CHECK(jacobian_valuation(plane, 0, {0, 1}, int_matrix({{1, 0}, {0, 3}})) == -1);
  CHECK(jacobian_valuation(plane, 0, {1, 2}, int_matrix({{2, 1}, {1, 1}})) == 0);
  CHECK_THROWS_WITH(jacobian_valuation(plane, 0, {1, 0}, int_matrix({{1, 1}, {1, 1}})),
                    "projection is singular on the piece: V is not generic");

  // Permuting coordinates of the ambient space and of V together.
  ConeSet x = normalize(ray(3, {1, 3, 2}));
  ConeSet xs = normalize(ray(3, {2, 1, 3}));
  for (const auto& v : enumerate_grassmannian_lifts(3, 2, 3, 1)) {
    RatMatrix proj = projection_matrix(v);
    if ((proj * x.groups()[0].A).determinant() == 0) continue;
    RatMatrix perm(3, 3);
    perm(0, 2) = 1;
    perm(1, 0) = 1;
    perm(2, 1) = 1;  // (a,b,c) -> (c,a,b)
    RatMatrix proj_s = proj * perm.inverse();
    CHECK(jacobian_valuation(x, 0, {1}, proj) == jacobian_valuation(xs, 0, {1}, proj_s));
  }
}

TEST_CASE("Grassmannian side on small cones") {
  RhsResult sub = rhs_integral(normalize(subspace(3, 3, 2)), 1);
  CHECK(sub.value == 1);
  CHECK(sub.symbolic == LocRingElem(1));

  ConeSet r = normalize(ray(3, {1, 0}));
  RhsResult one = rhs_integral(r, 1);
  CHECK(one.value == q(1, 2));
  CHECK(one.symbolic == L(-1) * LocRingElem::geometric(1));
  CHECK(one.generic_count == 3);
  CHECK(one.refined_count == 1);
  CHECK(one.mismatches == 0);

  CroftonReport two = verify_crofton(curated_suite()[1].cone, 4);
  CHECK(two.equal);
  CHECK(two.lhs == LocRingElem(2) * L(-1) * LocRingElem::geometric(1));

  CHECK_THROWS_WITH(rhs_integral(r, 0), "Grassmannian level must be at least 1");
  CroftonOptions bad;
  bad.budget = -1;
  CHECK_THROWS_WITH(rhs_integral(r, 1, bad), "refinement budget must be nonnegative");
}

TEST_CASE("budget and thread count do not change the value") {
  for (std::size_t i : {1u, 4u, 6u}) {
    ConeSet x = normalize(curated_suite()[i].cone);
    Rational ref = rhs_integral(x, 1).value;
    for (int b = 0; b <= 2; ++b) {
      CroftonOptions o;
      o.budget = b;
      o.jobs = 3;
      CHECK(rhs_integral(x, 1, o).value == ref);
    }
    CroftonOptions uncapped, capped;
    capped.projection_cap = 0;
    RhsResult a = rhs_integral(x, 1, uncapped), b = rhs_integral(x, 1, capped);
    CHECK(a.unprojected == 0);
    CHECK(b.projected == 0);
    CHECK(b.value == a.value);
  }
}

TEST_CASE("calibration constant is one") {
  CalibrationResult sub = c_constant_check(subspace(3, 3, 2), 0, {1, 0}, 1);
  CHECK(sub.value == 1);

  CalibrationResult r = c_constant_check(ray(3, {1, 0}), 0, {1}, 1);
  CHECK(r.value == 1);
  CHECK(r.tail_mass > 0);

  ConeSet graph = normalize(curated_suite()[6].cone);
  for (const auto& cls : CellSet::unit_sphere(3, 2, 1).classes()) CHECK(c_constant_check(graph, 0, cls, 1).value == 1);
  CHECK_THROWS_WITH(c_constant_check(graph, 5, {1, 0}, 1), "no such subspace group");
  CHECK_THROWS_WITH(c_constant_check(graph, 0, {3, 0}, 1), "sample class must be a unit vector of the parameter space");
}

TEST_CASE("decomposition identity on single-piece cones") {
  std::mt19937_64 rng(2024);
  int passed = 0, attempts = 0;
  while (passed < 25 && attempts < 400) {
    ++attempts;
    ConeSet raw = random_cone(rng, 2e4);
    if (raw.pieces().size() != 1) continue;
    const auto vs = enumerate_grassmannian_lifts(raw.n(), raw.n() - raw.d(), raw.prime(), 1);
    const auto& v = vs[rng() % vs.size()];
    RatMatrix proj = projection_matrix(v);
    if ((proj * normalize(raw).groups()[0].A).determinant() == 0) continue;
    DecompositionResult res = d_decomposition_check(raw, proj);
    CHECK(res.sum_identity);
    CHECK(res.scaling_identity);
    CHECK(res.pairs >= 1);
    ++passed;
  }
  CHECK(passed >= 20);
  CHECK_THROWS_WITH(d_decomposition_check(curated_suite()[1].cone, int_matrix({{1, 1}})),
                    "decomposition check needs a single-piece cone");
}

TEST_CASE("complement rule does not matter") {
  for (std::size_t i : {0u, 2u, 4u, 7u}) {
    ConeSet x = normalize(curated_suite()[i].cone);
    CroftonOptions fwd, bwd;
    bwd.frame = FrameRule::kBackward;
    for (int m = 1; m <= 2; ++m) CHECK(rhs_integral(x, m, fwd).value == rhs_integral(x, m, bwd).value);
  }
}

TEST_CASE("corrupted weight is detected") {
  ConeSet x = curated_suite()[0].cone;
  CroftonOptions o;
  o.perturb = [](WeightedConeFn& f) {
    if (!f.weights().empty()) {
      auto [phase, code] = f.weights().begin()->first;
      f.add_code(phase, code, 1);
    }
  };
  CroftonReport rep = verify_crofton(x, 3, o);
  CHECK_FALSE(rep.equal);
  CHECK(rep.mismatches > 0);
  CHECK(verify_crofton(x, 3).equal);
}

TEST_CASE("stabilization persists one level further") {
  for (std::size_t i : {0u, 3u, 5u, 11u}) {
    ConeSet x = normalize(curated_suite()[i].cone);
    CroftonReport rep = verify_crofton(x, 4);
    REQUIRE(rep.stabilized);
    CHECK(rhs_integral(x, rep.level + 2).value == rep.rhs_at_p);
  }
}
