#include <doctest.h>

#include <random>

#include "pcc/qp.hpp"

using namespace pcc;

namespace {

Rational q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("valuation and angular component") {
  CHECK(PAdicScalar(q(9, 2), 3).valuation() == Valuation::finite(2));
  CHECK(PAdicScalar(q(10, 3), 5).valuation() == Valuation::finite(1));
  CHECK(PAdicScalar(q(1, 12), 2).valuation() == Valuation::finite(-2));
  CHECK(PAdicScalar(q(0), 7).valuation().is_infinite());
  CHECK(PAdicScalar(q(6), 3).angular_component(1) == 2);
  CHECK(PAdicScalar(q(1, 2), 3).angular_component(2) == 5);
  CHECK(PAdicScalar(q(-1), 5).angular_component(2) == 24);
  CHECK_THROWS_AS(PAdicScalar(q(0), 3).angular_component(1), DomainError);
  CHECK_THROWS_AS(PAdicScalar(q(1), 4), DomainError);
}

TEST_CASE("ac is multiplicative and valuation additive") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> dist(-60, 60);
  for (long p : {2L, 3L, 5L}) {
    for (int t = 0; t < 200; ++t) {
      long a = dist(rng), b = dist(rng), c = dist(rng), e = dist(rng);
      if (a == 0 || b == 0 || c == 0 || e == 0) continue;
      PAdicScalar x(q(a, b), p), y(q(c, e), p);
      PAdicScalar xy(x.value() * y.value(), p);
      CHECK(xy.valuation().value() == x.valuation().value() + y.valuation().value());
      std::int64_t m = ipow(p, 3);
      CHECK(xy.angular_component(3) == mul_mod(x.angular_component(3), y.angular_component(3), m));
    }
  }
}

TEST_CASE("cell measure and boolean algebra") {
  CellSet a(3, 2, 1, {{1, 0}, {1, 1}, {2, 2}}, true);
  CHECK(a.measure().eval_at(3) == (LocRingElem(3) * LocRingElem::L_pow(-2)).eval_at(3));
  // x_1 = 1 mod 3 on the unit sphere: one full digit
  CHECK(CellSet(3, 2, 1, {{1, 0}, {1, 1}, {1, 2}}, true).measure() == LocRingElem::L_pow(-1));
  CHECK(a.measure().eval_at(3) == q(1, 3));
  CHECK(CellSet::unit_sphere(3, 2, 1).size() == 8);
  CHECK(CellSet::whole(2, 3, 2).size() == 64);

  CellSet b(3, 2, 2, {{1, 0}, {4, 0}, {1, 2}, {0, 1}}, false);
  CellSet u = cell_boolean(a, b, CellOp::kUnion);
  CellSet i = cell_boolean(a, b, CellOp::kIntersect);
  CellSet d = cell_boolean(a, b, CellOp::kSubtract);
  CHECK((u.measure() + i.measure()).eval_at(3) == (a.measure() + b.measure()).eval_at(3));
  CHECK((d.measure() + i.measure()).eval_at(3) == a.measure().eval_at(3));
  CHECK(u.depth() == 2);
  CHECK(i.size() == 2);

  CellSet r = a.refine(3);
  CHECK(r.size() == a.size() * 81);
  CHECK(r.measure() == a.measure());
  CHECK_THROWS_AS(r.refine(1), DomainError);
}

TEST_CASE("symbolic reading of class counts") {
  for (long p : {2L, 3L, 5L})
    for (int d = 1; d <= 2; ++d)
      for (int s = 1; s <= 2; ++s) {
        CellSet sph = CellSet::unit_sphere(p, d, s);
        CHECK(sph.measure() == LocRingElem(1) - LocRingElem::L_pow(-d));
        CHECK(CellSet::whole(p, d, s).measure() == LocRingElem(1));
        CHECK(sph.refine(s + 1).measure() == sph.measure());
      }
  std::mt19937_64 rng(3);
  for (long p : {2L, 3L, 5L}) {
    for (int t = 0; t < 30; ++t) {
      std::vector<Residues> cls;
      std::int64_t mod = p * p;
      for (int k = 0; k < 5; ++k) cls.push_back({static_cast<std::int64_t>(rng() % mod), static_cast<std::int64_t>(rng() % mod)});
      CellSet a(p, 2, 2, cls, false);
      CHECK(a.measure().eval_at(p) == Rational(static_cast<long>(a.size())) / Rational(mod * mod));
      CHECK(a.refine(3).measure() == a.measure());
    }
  }
}

TEST_CASE("cell set validation and text round trip") {
  CHECK_THROWS_AS(CellSet(3, 2, 1, {{0, 0}}, true), DomainError);
  CHECK_THROWS_AS(CellSet(3, 2, 1, {{3, 0}}, false), DomainError);
  CHECK_THROWS_AS(CellSet(3, 2, 1, {{1}}, false), DomainError);
  CellSet a(5, 2, 2, {{7, 3}, {1, 0}}, true);
  CHECK(CellSet::parse(a.str()) == a);
  CHECK(a.str() == "p=5 d=2 s=2 sphere=1 : (1,0) (7,3)");
  CHECK_THROWS_AS(CellSet::parse("p=5 d=2 s=2 sphere=1 : (1,x)"), DomainError);
  CHECK_THROWS_AS(CellSet::parse("p=5 d=2 : (1,0)"), DomainError);
  CHECK(a.contains_point({q(26), q(5, 7)}) == false);
  CHECK(a.contains_point({q(1), q(25)}));
  CHECK(a.contains_point({q(1, 3), q(0)}) == false);
  CHECK(a.contains_point({q(7, 26), q(3)}));
}

TEST_CASE("saturation is the orbit under 1 + p^r Z_p") {
  CellSet a(3, 1, 2, {{1}}, true);
  CHECK(a.saturate(1).size() == 3);
  CHECK(a.saturate(0).size() == 6);
  CHECK(a.saturate(2) == a);
  CellSet b(2, 2, 3, {{1, 2}}, true);
  CellSet sb = b.saturate(1);
  for (const auto& c : sb.classes()) CHECK((c[0] % 2 == 1 && c[1] % 2 == 0));
  CHECK(sb.size() == 4);
}

TEST_CASE("linear image") {
  RatMatrix m = RatMatrix::from_rows({{q(1), q(0)}, {q(0), q(2)}});
  CellSet a(3, 2, 1, {{1, 1}}, true);
  LinearImage img = cell_linear_image(m, a, 1);
  CHECK(img.shift == 0);
  CHECK(img.image == CellSet(3, 2, 1, {{1, 2}}, true));

  RatMatrix sing = RatMatrix::from_rows({{q(1), q(1)}, {q(1), q(1)}});
  CHECK_THROWS_AS(cell_linear_image(sing, a, 1), DomainError);

  RatMatrix m3 = RatMatrix::from_rows({{q(3), q(0)}, {q(0), q(9)}});
  CHECK(linear_image_min_depth(m3, a) == 2);
  CHECK_THROWS_WITH_AS(cell_linear_image(m3, a, 1), doctest::Contains("need at least 2"), DomainError);
  LinearImage i3 = cell_linear_image(m3, a, 2);
  CHECK(i3.shift == 1);
  // M' = diag(1, 3): image of (1,1) + 3Z^2 is (1 + 3Z) x (3 + 9Z)
  CHECK(i3.image.size() == 3);
  CHECK(i3.image.measure().eval_at(3) == q(3, 81));
}

TEST_CASE("linear image agrees with inverse membership") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> ent(-6, 6);
  for (long p : {2L, 3L}) {
    for (int t = 0; t < 40; ++t) {
      RatMatrix m = RatMatrix::from_rows({{q(ent(rng)), q(ent(rng))}, {q(ent(rng)), q(ent(rng), 1 + (t % 2))}});
      if (m.determinant() == 0) continue;
      CellSet a = CellSet(p, 2, 1, {{1, 0}, {0, 1}}, true);
      int need = linear_image_min_depth(m, a);
      if (need > 4) continue;
      LinearImage img = cell_linear_image(m, a, need);
      Rational unscale = rat_pow(Rational(p), img.shift);
      RatMatrix inv = m.inverse();
      CellSet all = CellSet::whole(p, 2, need);
      for (const auto& y : all.classes()) {
        RatVector yv{Rational(y[0]) * unscale, Rational(y[1]) * unscale};
        RatVector x = inv * yv;
        bool in = a.contains_point(x);
        CHECK(img.image.contains_class(y) == in);
      }
      long vdet = valuation(m.determinant(), p).value() - 2 * img.shift;
      CHECK(img.image.measure().eval_at(p) == (a.measure() * LocRingElem::L_pow(-vdet)).eval_at(p));
    }
  }
}
