#include "pcc/document.hpp"

#include <cctype>
#include <json.hpp>

namespace pcc {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) { throw DomainError(field + ": " + what); }

const json& member(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where.empty() ? key : where + "." + key, "missing field");
  return *it;
}

long integer_field(const json& obj, const std::string& key, const std::string& where) {
  const json& v = member(obj, key, where);
  if (!v.is_number_integer()) fail(where.empty() ? key : where + "." + key, "expected an integer");
  return v.get<long>();
}

const json& array_field(const json& v, const std::string& field) {
  if (!v.is_array()) fail(field, "expected an array");
  return v;
}

Rational entry(const json& v, const std::string& field) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (!v.is_string()) fail(field, "expected a rational string");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const DomainError& e) {
    fail(field, e.what());
  }
}

std::string idx(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

ConePiece parse_piece(const json& pj, long p, int n, int d, const std::string& where) {
  if (!pj.is_object()) fail(where, "expected an object");
  ConePiece pc;
  pc.e = static_cast<int>(integer_field(pj, "e", where));
  pc.r = static_cast<int>(integer_field(pj, "r", where));
  pc.phase = static_cast<int>(integer_field(pj, "phase", where));
  const json& a = array_field(member(pj, "A", where), where + ".A");
  if (static_cast<int>(a.size()) != n) fail(where + ".A", "expected " + std::to_string(n) + " rows");
  pc.A = RatMatrix(n, d);
  for (int i = 0; i < n; ++i) {
    const std::string row = idx(where + ".A", i);
    const json& rj = array_field(a[i], row);
    if (static_cast<int>(rj.size()) != d) fail(row, "expected " + std::to_string(d) + " entries");
    for (int j = 0; j < d; ++j) {
      const std::string f = idx(row, j);
      Rational q = entry(rj[j], f);
      if (q != 0 && valuation(q, p).value() < 0) fail(f, "entry not p-integral");
      pc.A(i, j) = q;
    }
  }
  const std::string bw = where + ".base";
  const json& base = member(pj, "base", where);
  if (!base.is_object()) fail(bw, "expected an object");
  const long depth = integer_field(base, "depth", bw);
  if (depth < 1) fail(bw + ".depth", "must be at least 1");
  const CellSet probe(p, d, static_cast<int>(depth), false);
  const json& cj = array_field(member(base, "classes", bw), bw + ".classes");
  std::vector<Residues> classes;
  for (std::size_t k = 0; k < cj.size(); ++k) {
    const std::string f = idx(bw + ".classes", k);
    const json& c = array_field(cj[k], f);
    if (static_cast<int>(c.size()) != d) fail(f, "expected " + std::to_string(d) + " coordinates");
    Residues cls;
    for (const auto& v : c) {
      if (!v.is_number_integer()) fail(f, "expected integer coordinates");
      const long x = v.get<long>();
      if (x < 0 || x >= probe.modulus())
        fail(f, "class out of range [0, " + std::to_string(probe.modulus()) + ")");
      cls.push_back(x);
    }
    if (!has_unit_coordinate(cls, p)) fail(f, "class has no unit coordinate");
    classes.push_back(std::move(cls));
  }
  pc.base = CellSet(p, d, static_cast<int>(depth), classes, true);
  try {
    ConeSet check(p, n, d, {pc});
  } catch (const DomainError& e) {
    fail(where, e.what());
  }
  return pc;
}

std::string entry_text(const Rational& q) { return to_string(q); }

}  // namespace

ConeSet parse_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DomainError("document: expected a JSON object");
  const long p = integer_field(doc, "p", "");
  if (!is_prime(p)) fail("p", "must be prime, got " + std::to_string(p));
  const long n = integer_field(doc, "n", "");
  const long d = integer_field(doc, "d", "");
  if (d < 1 || n < d) fail("d", "need 1 <= d <= n");
  const json& pj = array_field(member(doc, "pieces", ""), "pieces");
  std::vector<ConePiece> pieces;
  for (std::size_t i = 0; i < pj.size(); ++i)
    pieces.push_back(parse_piece(pj[i], p, static_cast<int>(n), static_cast<int>(d), idx("pieces", i)));
  return ConeSet(p, static_cast<int>(n), static_cast<int>(d), std::move(pieces));
}

std::string serialize_document(const ConeSet& x) {
  json doc;
  doc["p"] = x.prime();
  doc["n"] = x.n();
  doc["d"] = x.d();
  doc["pieces"] = json::array();
  for (const auto& pc : x.pieces()) {
    json pj;
    pj["e"] = pc.e;
    pj["r"] = pc.r;
    pj["phase"] = pc.phase;
    json a = json::array();
    for (std::size_t i = 0; i < pc.A.rows(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < pc.A.cols(); ++j) row.push_back(entry_text(pc.A(i, j)));
      a.push_back(row);
    }
    pj["A"] = a;
    json classes = json::array();
    for (const auto& c : pc.base.classes()) classes.push_back(c);
    pj["base"] = {{"depth", pc.base.depth()}, {"classes", classes}};
    doc["pieces"].push_back(pj);
  }
  return doc.dump(2);
}

std::string report_json(const CroftonReport& rep, long p) {
  json out;
  out["p"] = p;
  out["lhs"] = rep.lhs.pretty();
  out["rhs"] = rep.rhs.pretty();
  out["lhs_at_p"] = to_string(rep.lhs_at_p);
  out["rhs_at_p"] = to_string(rep.rhs_at_p);
  out["level"] = rep.level;
  out["generic_count"] = rep.generic_count;
  out["refined_count"] = rep.refined_count;
  out["tail_mass"] = to_string(rep.tail_mass);
  out["mismatches"] = rep.mismatches;
  out["stabilized"] = rep.stabilized;
  out["symbolic_stabilized"] = rep.symbolic_stabilized;
  out["equal"] = rep.equal;
  out["symbolic_equal"] = rep.symbolic_equal;
  if (!rep.breakdown.empty()) {
    json b = json::array();
    for (const auto& v : rep.breakdown)
      b.push_back({{"v", v.v},
                   {"weight", to_string(v.weight)},
                   {"value", to_string(v.value)},
                   {"refined_levels", v.refined_levels}});
    out["breakdown"] = b;
  }
  return out.dump(2);
}

namespace {

// Recursive descent over + - * / ^ with integers, L and parentheses.
class ExprParser {
 public:
  explicit ExprParser(const std::string& text) : text_(text) {}

  Expression run() {
    Expression e = sum();
    skip();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    if (e.den.is_zero()) error("division by zero");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& what) {
    throw DomainError("expression: " + what + " at position " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static Expression add(const Expression& a, const Expression& b, bool minus) {
    LocRingElem rhs = b.num * a.den;
    return {a.num * b.den + (minus ? -rhs : rhs), a.den * b.den, a.has_L || b.has_L};
  }

  Expression sum() {
    Expression e = product();
    while (true) {
      if (eat('+'))
        e = add(e, product(), false);
      else if (eat('-'))
        e = add(e, product(), true);
      else
        return e;
    }
  }

  Expression product() {
    Expression e = unary();
    while (true) {
      if (eat('*')) {
        Expression f = unary();
        e = {e.num * f.num, e.den * f.den, e.has_L || f.has_L};
      } else if (eat('/')) {
        Expression f = unary();
        if (f.num.is_zero()) error("division by zero");
        e = {e.num * f.den, e.den * f.num, e.has_L || f.has_L};
      } else {
        return e;
      }
    }
  }

  Expression unary() {
    if (eat('-')) {
      Expression e = unary();
      return {-e.num, e.den, e.has_L};
    }
    return power();
  }

  Expression power() {
    Expression base = atom();
    if (!eat('^')) return base;
    skip();
    bool neg = false;
    if (eat('-')) neg = true;
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) error("expected an integer exponent");
    const long k = std::stol(text_.substr(start, pos_ - start));
    Expression out{LocRingElem(1), LocRingElem(1), base.has_L};
    for (long i = 0; i < k; ++i) out = {out.num * base.num, out.den * base.den, out.has_L};
    if (neg) {
      if (out.num.is_zero()) error("division by zero");
      std::swap(out.num, out.den);
    }
    return out;
  }

  Expression atom() {
    skip();
    if (eat('(')) {
      Expression e = sum();
      if (!eat(')')) error("expected ')'");
      return e;
    }
    if (eat('L')) return {LocRingElem::L_pow(1), LocRingElem(1), true};
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) error(pos_ < text_.size() ? "unexpected '" + std::string(1, text_[pos_]) + "'" : "unexpected end");
    return {LocRingElem(Rational(BigInt(text_.substr(start, pos_ - start)))), LocRingElem(1), false};
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse_expression(const std::string& text) { return ExprParser(text).run(); }

bool expression_matches(const Expression& e, const LocRingElem& value, long p) {
  if (value * e.den == e.num) return true;
  if (e.has_L) return false;
  return value.eval_at(p) * e.den.eval_at(p) == e.num.eval_at(p);
}

}  // namespace pcc
