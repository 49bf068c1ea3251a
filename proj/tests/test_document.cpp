#include <doctest.h>

#include <random>

#include "pcc/document.hpp"
#include "pcc/suite.hpp"

using namespace pcc;

namespace {

const char* kRay = R"({"p": 3, "n": 2, "d": 1, "pieces": [
  {"e": 1, "r": 1, "phase": 0, "A": [["1"], ["0"]], "base": {"depth": 1, "classes": [[1]]}}]})";

std::string ray_with(const std::string& from, const std::string& to) {
  std::string s = kRay;
  auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

std::string error_of(const std::string& text) {
  try {
    parse_document(text);
  } catch (const DomainError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal document") {
  ConeSet x = parse_document(kRay);
  CHECK(x.prime() == 3);
  CHECK(x.n() == 2);
  CHECK(x.d() == 1);
  REQUIRE(x.pieces().size() == 1);
  CHECK(local_density(normalize(x)).eval_at(3) == Rational(1, 2));
}

TEST_CASE("document diagnostics name the field") {
  CHECK(error_of(ray_with("[\"1\"], [\"0\"]", "[\"1/3\"], [\"0\"]")) == "pieces[0].A[0][0]: entry not p-integral");
  CHECK(error_of(ray_with("[\"1\"], [\"0\"]", "[\"1/x\"], [\"0\"]")) == "pieces[0].A[0][0]: malformed number: '1/x'");
  CHECK(error_of(ray_with("[\"1\"], [\"0\"]", "[\"1/0\"], [\"0\"]")) ==
        "pieces[0].A[0][0]: malformed number: zero denominator in '1/0'");
  CHECK(error_of(ray_with("[[1]]", "[[4]]")) == "pieces[0].base.classes[0]: class out of range [0, 3)");
  CHECK(error_of(ray_with("[[1]]", "[[0]]")) == "pieces[0].base.classes[0]: class has no unit coordinate");
  CHECK(error_of(ray_with("\"p\": 3", "\"p\": 4")) == "p: must be prime, got 4");
  CHECK(error_of(ray_with("\"e\": 1, ", "")) == "pieces[0].e: missing field");
  CHECK(error_of(ray_with("[\"1\"], [\"0\"]", "[\"3\"], [\"0\"]")) ==
        "pieces[0]: embedding has no unit d x d minor (rank mod p < d)");
  CHECK(error_of(ray_with("\"phase\": 0", "\"phase\": 2")) == "pieces[0]: piece phase must lie in [0, e)");
  CHECK(error_of(ray_with("[\"1\"], [\"0\"]", "[\"1\"]")) == "pieces[0].A: expected 2 rows");
  CHECK(error_of("{\"p\": 3,") .rfind("malformed JSON", 0) == 0);
  CHECK(error_of("[1, 2]") == "document: expected a JSON object");
}

TEST_CASE("documents round trip") {
  std::mt19937_64 rng(99);
  std::vector<ConeSet> corpus;
  for (const auto& c : curated_suite()) corpus.push_back(c.cone);
  for (int i = 0; i < 20; ++i) corpus.push_back(random_cone(rng));
  for (const auto& x : corpus) {
    const std::string text = serialize_document(x);
    const ConeSet y = parse_document(text);
    CHECK(serialize_document(y) == text);
    CHECK(local_density(normalize(y)) == local_density(normalize(x)));
  }
}

TEST_CASE("expressions") {
  const LocRingElem ray = LocRingElem::L_pow(-1) * LocRingElem::geometric(1);
  CHECK(expression_matches(parse_expression("1/(L-1)"), ray, 3));
  CHECK(expression_matches(parse_expression("L^-1/(1-L^-1)"), ray, 3));
  CHECK(expression_matches(parse_expression("1/2"), ray, 3));
  CHECK_FALSE(expression_matches(parse_expression("1/2"), ray, 5));
  CHECK_FALSE(expression_matches(parse_expression("2/(L-1)"), ray, 3));
  CHECK_FALSE(expression_matches(parse_expression("1/(L+1)"), ray, 3));
  CHECK(expression_matches(parse_expression("3/(2*L-2)"), LocRingElem(Rational(3, 2)) * ray, 2));
  CHECK(expression_matches(parse_expression("-(1 - L)^2 + L^2 - 2*L"), LocRingElem(-1), 7));
  CHECK_THROWS_WITH(parse_expression("1/(L-L)"), "expression: division by zero at position 7");
  CHECK_THROWS_WITH(parse_expression("2*x"), "expression: unexpected 'x' at position 2");
  CHECK_THROWS_WITH(parse_expression("(1"), "expression: expected ')' at position 2");
}
