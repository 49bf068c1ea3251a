#include "pcc/qp.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

namespace pcc {

PAdicScalar::PAdicScalar(Rational value, long prime) : value_(std::move(value)), prime_(prime) {
  value_.canonicalize();
  if (!is_prime(prime_)) throw DomainError("p must be prime, got " + std::to_string(prime_));
}

Rational PAdicScalar::unit_part() const {
  if (value_ == 0) throw DomainError("zero has no unit part");
  return value_ * rat_pow(Rational(prime_), -valuation().value());
}

std::int64_t PAdicScalar::angular_component(int r) const {
  if (r < 0) throw DomainError("angular component depth must be nonnegative");
  return reduce_mod(unit_part(), prime_, ipow(prime_, r));
}

bool has_unit_coordinate(const Residues& c, long p) {
  return std::any_of(c.begin(), c.end(), [p](std::int64_t x) { return x % p != 0; });
}

namespace {

std::int64_t checked_modulus(long p, int dim, int depth) {
  if (!is_prime(p)) throw DomainError("p must be prime, got " + std::to_string(p));
  if (dim < 0 || depth < 0) throw DomainError("cell set dimension and depth must be nonnegative");
  std::int64_t m = ipow(p, depth);
  // codes are base-m numbers with dim digits
  long double cap = 1;
  for (int i = 0; i < dim; ++i) cap *= static_cast<long double>(m);
  if (cap > static_cast<long double>(std::numeric_limits<std::int64_t>::max()))
    throw DomainError("cell set too fine to encode: p^(depth*dim) overflows");
  return m;
}

}  // namespace

CellSet::CellSet(long p, int dim, int depth, bool sphere)
    : p_(p), dim_(dim), depth_(depth), modulus_(checked_modulus(p, dim, depth)), sphere_(sphere) {}

CellSet::CellSet(long p, int dim, int depth, const std::vector<Residues>& classes, bool sphere)
    : CellSet(p, dim, depth, sphere) {
  codes_.reserve(classes.size());
  for (const auto& c : classes) {
    if (static_cast<int>(c.size()) != dim_) throw DomainError("class has wrong dimension");
    for (auto x : c)
      if (x < 0 || x >= modulus_) throw DomainError("class entry out of range [0, p^s)");
    if (sphere_ && !has_unit_coordinate(c, p_)) throw DomainError("class outside the unit sphere");
    codes_.push_back(encode(c));
  }
  std::sort(codes_.begin(), codes_.end());
  codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
}

CellSet CellSet::from_codes(long p, int dim, int depth, std::vector<std::uint64_t> codes, bool sphere) {
  CellSet out(p, dim, depth, sphere);
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  out.codes_ = std::move(codes);
  return out;
}

CellSet CellSet::unit_sphere(long p, int dim, int depth) {
  CellSet w = whole(p, dim, depth);
  std::vector<std::uint64_t> keep;
  for (auto code : w.codes_)
    if (has_unit_coordinate(w.decode(code), p)) keep.push_back(code);
  return from_codes(p, dim, depth, std::move(keep), true);
}

CellSet CellSet::whole(long p, int dim, int depth) {
  CellSet out(p, dim, depth, false);
  std::uint64_t total = 1;
  for (int i = 0; i < dim; ++i) total *= static_cast<std::uint64_t>(out.modulus_);
  out.codes_.resize(total);
  for (std::uint64_t c = 0; c < total; ++c) out.codes_[c] = c;
  return out;
}

std::uint64_t CellSet::encode(const Residues& c) const {
  std::uint64_t code = 0;
  for (int i = dim_ - 1; i >= 0; --i) code = code * static_cast<std::uint64_t>(modulus_) + static_cast<std::uint64_t>(c[i]);
  return code;
}

Residues CellSet::decode(std::uint64_t code) const {
  Residues c(dim_);
  for (int i = 0; i < dim_; ++i) {
    c[i] = static_cast<std::int64_t>(code % static_cast<std::uint64_t>(modulus_));
    code /= static_cast<std::uint64_t>(modulus_);
  }
  return c;
}

std::vector<Residues> CellSet::classes() const {
  std::vector<Residues> out;
  out.reserve(codes_.size());
  for (auto code : codes_) out.push_back(decode(code));
  return out;
}

bool CellSet::contains_class(const Residues& c) const {
  return std::binary_search(codes_.begin(), codes_.end(), encode(c));
}

bool CellSet::contains_point(const RatVector& x) const {
  if (static_cast<int>(x.size()) != dim_) throw DomainError("point has wrong dimension");
  for (const auto& xi : x)
    if (!is_p_integral(xi, p_)) return false;
  return contains_class(reduce_vector(x, p_, modulus_));
}

CellSet CellSet::refine(int depth) const {
  if (depth < depth_) throw DomainError("refine cannot coarsen a cell set");
  if (depth == depth_) return *this;
  CellSet out(p_, dim_, depth, sphere_);
  const std::int64_t step = ipow(p_, depth - depth_);
  std::uint64_t per = 1;
  for (int i = 0; i < dim_; ++i) per *= static_cast<std::uint64_t>(step);
  out.codes_.reserve(codes_.size() * per);
  Residues lift(dim_);
  for (auto code : codes_) {
    Residues c = decode(code);
    for (std::uint64_t t = 0; t < per; ++t) {
      std::uint64_t rest = t;
      for (int i = 0; i < dim_; ++i) {
        lift[i] = c[i] + modulus_ * static_cast<std::int64_t>(rest % static_cast<std::uint64_t>(step));
        rest /= static_cast<std::uint64_t>(step);
      }
      out.codes_.push_back(out.encode(lift));
    }
  }
  std::sort(out.codes_.begin(), out.codes_.end());
  return out;
}

namespace {

// Classes are read as digit strings (all coordinates' p^0 digits, then p^1,
// ...). Sibling subtrees that are identical are grouped; a group of p siblings
// reads as L and the group of nonzero digits as L-1. Appending full digit levels
// multiplies by L * L^-1, so the reading does not depend on depth, and it
// specializes to the class count at L = p.
class DigitTree {
 public:
  // Paths are packed base p, first digit most significant and zero padded to
  // the full length, so integer order is path order. A path shorter than the
  // full length stands for the whole subtree below it.
  struct Path {
    std::uint64_t digits;
    std::size_t len;
    bool operator<(const Path& o) const { return digits < o.digits || (digits == o.digits && len < o.len); }
  };

  DigitTree(long p, std::size_t len) : p_(p), len_(len), place_(len + 1, 1) {
    for (std::size_t i = len; i-- > 0;) place_[i] = place_[i + 1] * static_cast<std::uint64_t>(p);
  }

  LocRingElem measure(std::vector<Path> paths) {
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) return LocRingElem();
    return LocRingElem(Rational(1), value(build(paths, 0, paths.size(), 0)), {});
  }

 private:
  int digit(std::uint64_t path, std::size_t pos) const {
    return static_cast<int>((path / place_[pos + 1]) % static_cast<std::uint64_t>(p_));
  }

  int full(std::size_t pos) {
    if (auto it = full_.find(pos); it != full_.end()) return it->second;
    std::vector<int> key;
    if (pos < len_) {
      const int below = full(pos + 1);
      for (int dg = 0; dg < p_; ++dg) {
        key.push_back(dg);
        key.push_back(below);
      }
    }
    const int id = intern(key);
    full_.emplace(pos, id);
    return id;
  }

  int build(const std::vector<Path>& paths, std::size_t lo, std::size_t hi, std::size_t pos) {
    if (paths[lo].len == pos) return full(pos);
    if (hi - lo == place_[pos] && paths[lo].len == len_ && paths[hi - 1].len == len_) return full(pos);
    std::vector<int> key;
    std::size_t i = lo;
    while (i < hi) {
      const int dg = digit(paths[i].digits, pos);
      std::size_t j = i;
      while (j < hi && digit(paths[j].digits, pos) == dg) ++j;
      key.push_back(dg);
      key.push_back(build(paths, i, j, pos + 1));
      i = j;
    }
    return intern(key);
  }

  int intern(const std::vector<int>& key) {
    auto [it, fresh] = ids_.try_emplace(key, static_cast<int>(nodes_.size()));
    if (fresh) nodes_.push_back(key);
    return it->second;
  }

  LaurentPoly value(int id) {
    if (auto it = memo_.find(id); it != memo_.end()) return it->second;
    const auto& key = nodes_[id];
    LaurentPoly out = LaurentPoly::constant(1);
    if (!key.empty()) {
      std::map<int, std::vector<int>> groups;  // child -> digits leading to it
      for (std::size_t i = 1; i < key.size(); i += 2) groups[key[i]].push_back(key[i - 1]);
      LaurentPoly sum;
      for (const auto& [child, digits] : groups) {
        const long count = static_cast<long>(digits.size());
        const bool nonzero = count == p_ - 1 && digits.front() != 0;
        LaurentPoly c = count == p_  ? LaurentPoly::monomial(1, 1)
                        : nonzero    ? LaurentPoly::monomial(1, 1) - LaurentPoly::constant(1)
                                     : LaurentPoly::constant(count);
        sum = sum + c * value(child);
      }
      out = sum.shifted(-1);
    }
    memo_.emplace(id, out);
    return out;
  }

  long p_;
  std::size_t len_;
  std::vector<std::uint64_t> place_;
  std::map<std::size_t, int> full_;
  std::map<std::vector<int>, int> ids_;
  std::vector<std::vector<int>> nodes_;
  std::map<int, LaurentPoly> memo_;
};

}  // namespace

LocRingElem CellSet::measure() const {
  const std::size_t len = static_cast<std::size_t>(depth_) * dim_;
  std::vector<DigitTree::Path> paths;
  paths.reserve(codes_.size());
  for (auto code : codes_) {
    Residues c = decode(code);
    std::uint64_t path = 0;
    for (int level = 0; level < depth_; ++level)
      for (int i = 0; i < dim_; ++i) {
        path = path * static_cast<std::uint64_t>(p_) + static_cast<std::uint64_t>(c[i] % p_);
        c[i] /= p_;
      }
    paths.push_back({path, len});
  }
  return DigitTree(p_, len).measure(std::move(paths));
}

LocRingElem measure_classes(long p, int dim, const std::vector<std::pair<Residues, int>>& classes) {
  int depth = 0;
  for (const auto& [c, sigma] : classes) depth = std::max(depth, sigma);
  const std::size_t len = static_cast<std::size_t>(depth) * dim;
  std::vector<DigitTree::Path> paths;
  paths.reserve(classes.size());
  for (const auto& [cls, sigma] : classes) {
    Residues c = cls;
    std::uint64_t path = 0;
    for (int level = 0; level < depth; ++level)
      for (int i = 0; i < dim; ++i) {
        const auto dg = level < sigma ? static_cast<std::uint64_t>(c[i] % p) : 0;
        path = path * static_cast<std::uint64_t>(p) + dg;
        c[i] /= p;
      }
    paths.push_back({path, static_cast<std::size_t>(sigma) * dim});
  }
  return DigitTree(p, len).measure(std::move(paths));
}

CellSet CellSet::saturate(int r) const {
  if (r >= depth_) return *this;
  std::vector<std::uint64_t> out;
  const std::int64_t pr = ipow(p_, r);
  const std::int64_t count = ipow(p_, depth_ - r);
  std::vector<std::int64_t> units;
  for (std::int64_t t = 0; t < count; ++t) {
    std::int64_t u = mod_norm(1 + pr * t, modulus_);
    if (u % p_ != 0) units.push_back(u);
  }
  Residues y(dim_);
  for (auto code : codes_) {
    Residues c = decode(code);
    for (std::int64_t u : units) {
      for (int i = 0; i < dim_; ++i) y[i] = mul_mod(u, c[i], modulus_);
      out.push_back(encode(y));
    }
  }
  return from_codes(p_, dim_, depth_, std::move(out), sphere_);
}

std::string CellSet::str() const {
  std::ostringstream os;
  os << "p=" << p_ << " d=" << dim_ << " s=" << depth_ << " sphere=" << (sphere_ ? 1 : 0) << " :";
  for (auto code : codes_) {
    Residues c = decode(code);
    os << " (";
    for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << c[i];
    os << ")";
  }
  return os.str();
}

namespace {

long header_field(std::istringstream& is, const std::string& key) {
  std::string tok;
  if (!(is >> tok) || tok.rfind(key + "=", 0) != 0) throw DomainError("cell set text: expected " + key + "=");
  try {
    std::size_t used = 0;
    long v = std::stol(tok.substr(key.size() + 1), &used);
    if (used != tok.size() - key.size() - 1) throw DomainError("cell set text: bad " + key);
    return v;
  } catch (const std::logic_error&) {
    throw DomainError("cell set text: bad " + key);
  }
}

}  // namespace

CellSet CellSet::parse(const std::string& text) {
  std::istringstream is(text);
  long p = header_field(is, "p");
  long d = header_field(is, "d");
  long s = header_field(is, "s");
  long sphere = header_field(is, "sphere");
  std::string colon;
  if (!(is >> colon) || colon != ":") throw DomainError("cell set text: expected ':'");
  std::vector<Residues> classes;
  std::string tok;
  while (is >> tok) {
    if (tok.size() < 2 || tok.front() != '(' || tok.back() != ')') throw DomainError("cell set text: bad class " + tok);
    Residues c;
    std::istringstream cs(tok.substr(1, tok.size() - 2));
    std::string part;
    while (std::getline(cs, part, ',')) {
      try {
        std::size_t used = 0;
        c.push_back(std::stoll(part, &used));
        if (used != part.size()) throw DomainError("cell set text: bad class " + tok);
      } catch (const std::logic_error&) {
        throw DomainError("cell set text: bad class " + tok);
      }
    }
    classes.push_back(std::move(c));
  }
  return CellSet(p, static_cast<int>(d), static_cast<int>(s), classes, sphere != 0);
}

CellSet cell_boolean(const CellSet& a, const CellSet& b, CellOp op) {
  if (a.prime() != b.prime() || a.dim() != b.dim()) throw DomainError("cell sets live in different spaces");
  int depth = std::max(a.depth(), b.depth());
  CellSet ra = a.refine(depth), rb = b.refine(depth);
  std::vector<std::uint64_t> out;
  const auto& x = ra.codes();
  const auto& y = rb.codes();
  bool sphere = false;
  switch (op) {
    case CellOp::kUnion:
      std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
      sphere = a.sphere() && b.sphere();
      break;
    case CellOp::kIntersect:
      std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
      sphere = a.sphere() || b.sphere();
      break;
    case CellOp::kSubtract:
      std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
      sphere = a.sphere();
      break;
  }
  return CellSet::from_codes(a.prime(), a.dim(), depth, std::move(out), sphere);
}

namespace {

struct Scaled {
  long shift;
  RatMatrix unit_scaled;
  long det_valuation;
};

Scaled split_matrix(const RatMatrix& m, const CellSet& a) {
  if (m.rows() != m.cols() || static_cast<int>(m.rows()) != a.dim())
    throw DomainError("linear image needs a square matrix matching the cell dimension");
  Valuation vd = valuation(m.determinant(), a.prime());
  if (vd.is_infinite()) throw DomainError("linear image of a singular matrix");
  long shift = m.min_valuation(a.prime()).value();
  Rational f = rat_pow(Rational(a.prime()), -shift);
  RatMatrix mp = m;
  for (std::size_t i = 0; i < mp.rows(); ++i)
    for (std::size_t j = 0; j < mp.cols(); ++j) mp(i, j) *= f;
  long dv = valuation(mp.determinant(), a.prime()).value();
  return {shift, mp, dv};
}

}  // namespace

int linear_image_min_depth(const RatMatrix& m, const CellSet& a) {
  return a.depth() + static_cast<int>(split_matrix(m, a).det_valuation);
}

LinearImage cell_linear_image(const RatMatrix& m, const CellSet& a, int out_depth) {
  Scaled sc = split_matrix(m, a);
  int need = a.depth() + static_cast<int>(sc.det_valuation);
  if (out_depth < need)
    throw DomainError("output depth " + std::to_string(out_depth) + " too coarse; need at least " + std::to_string(need));
  CellSet src = a.refine(out_depth);
  const long p = a.prime();
  const int d = a.dim();
  CellSet probe(p, d, out_depth, false);
  const std::int64_t mod = probe.modulus();
  std::vector<std::vector<std::int64_t>> mm(d, std::vector<std::int64_t>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) mm[i][j] = reduce_mod(sc.unit_scaled(i, j), p, mod);
  std::vector<std::uint64_t> out;
  out.reserve(src.size());
  bool all_unit = true;
  Residues y(d);
  for (auto code : src.codes()) {
    Residues c = src.decode(code);
    for (int i = 0; i < d; ++i) {
      std::int64_t acc = 0;
      for (int j = 0; j < d; ++j) acc = (acc + mul_mod(mm[i][j], c[j], mod)) % mod;
      y[i] = acc;
    }
    all_unit = all_unit && has_unit_coordinate(y, p);
    out.push_back(probe.encode(y));
  }
  return {sc.shift, CellSet::from_codes(p, d, out_depth, std::move(out), all_unit)};
}

}  // namespace pcc
