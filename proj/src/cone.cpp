#include "pcc/cone.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace pcc {

namespace {

long floor_mod(long a, long m) { return ((a % m) + m) % m; }

void check_piece(const ConePiece& pc, long p, int n, int d) {
  if (pc.e < 1) throw DomainError("piece period e must be at least 1");
  if (pc.r < 1) throw DomainError("piece ac depth r must be at least 1");
  if (pc.phase < 0 || pc.phase >= pc.e) throw DomainError("piece phase must lie in [0, e)");
  if (static_cast<int>(pc.A.rows()) != n || static_cast<int>(pc.A.cols()) != d)
    throw DomainError("piece embedding must be n x d");
  if (!pc.A.p_integral(p)) throw DomainError("embedding entry not p-integral");
  if (!pc.A.unit_minor(p)) throw DomainError("embedding has no unit d x d minor (rank mod p < d)");
  if (pc.base.prime() != p || pc.base.dim() != d) throw DomainError("piece base lives in the wrong space");
  if (pc.base.depth() < 1) throw DomainError("piece base depth must be at least 1");
  for (std::size_t i = 0; i < pc.base.size(); ++i)
    if (!has_unit_coordinate(pc.base.class_at(i), p)) throw DomainError("base class has no unit coordinate");
}

RatMatrix minor_rows(const RatMatrix& a, const std::vector<std::size_t>& rows) { return a.select_rows(rows); }

}  // namespace

ConeSet::ConeSet(long p, int n, int d, std::vector<ConePiece> pieces) : p_(p), n_(n), d_(d), pieces_(std::move(pieces)) {
  if (!is_prime(p_)) throw DomainError("p must be prime, got " + std::to_string(p_));
  if (d_ < 1 || n_ < d_) throw DomainError("cone dimensions need 1 <= d <= n");
  for (const auto& pc : pieces_) check_piece(pc, p_, n_, d_);
}

const std::vector<SubspaceGroup>& ConeSet::groups() const {
  if (!normalized_) throw DomainError("cone set is not normalized");
  return groups_;
}

ConeSet normalize(const ConeSet& x) {
  int e = 1, r = 1, s = 1;
  for (const auto& pc : x.pieces_) {
    e = std::lcm(e, pc.e);
    r = std::max(r, pc.r);
    s = std::max(s, pc.base.depth());
  }
  std::vector<ConePiece> out;
  for (const auto& pc : x.pieces_) {
    CellSet base = pc.base.refine(s).saturate(pc.r);
    if (base.empty()) continue;
    for (int k = 0; k < e / pc.e; ++k) out.push_back({e, r, pc.phase + k * pc.e, pc.A, base});
  }
  ConeSet y(x.p_, x.n_, x.d_, std::move(out));
  y.normalized_ = true;
  y.origin_ = x.origin_;
  y.e_ = e;
  y.r_ = r;
  y.s_ = s;
  for (const auto& pc : y.pieces_) {
    SubspaceGroup* home = nullptr;
    for (auto& g : y.groups_)
      if (g.A.hconcat(pc.A).rank() == static_cast<std::size_t>(x.d_)) home = &g;
    if (!home) {
      SubspaceGroup g{pc.A, *pc.A.unit_minor(x.p_), {}};
      for (int i = 0; i < e; ++i) g.bases.emplace_back(x.p_, x.d_, s, true);
      y.groups_.push_back(std::move(g));
      home = &y.groups_.back();
    }
    // A_k = A_ref G with G unimodular, so G maps depth-s classes to classes.
    RatMatrix g = minor_rows(home->A, home->minor).inverse() * minor_rows(pc.A, home->minor);
    CellSet moved = cell_linear_image(g, pc.base, s).image;
    home->bases[pc.phase] = cell_boolean(home->bases[pc.phase], moved, CellOp::kUnion);
  }
  return y;
}

ConeSet tangent_cone(const ConeSet& x) {
  ConeSet y = x;
  y.origin_ = true;
  return y;
}

bool member(const ConeSet& x, const RatVector& point) {
  if (static_cast<int>(point.size()) != x.n()) throw DomainError("point has wrong dimension");
  const long p = x.prime();
  if (vector_valuation(point, p).is_infinite()) return x.origin();
  for (const auto& pc : x.pieces()) {
    auto rows = *pc.A.unit_minor(p);
    RatVector sub;
    for (auto i : rows) sub.push_back(point[i]);
    RatVector y = minor_rows(pc.A, rows).inverse() * sub;
    if (pc.A * y != point) continue;
    long w = vector_valuation(y, p).value();
    if (floor_mod(w - pc.phase, pc.e) != 0) continue;
    RatVector z = scale(y, rat_pow(Rational(p), -w));
    if (pc.base.saturate(pc.r).contains_point(z)) return true;
  }
  return false;
}

namespace {

LocRingElem slice_of_groups(const ConeSet& x, const std::vector<std::size_t>& which, long i) {
  LocRingElem total;
  const auto& gs = x.groups();
  for (auto g : which) total += gs[g].bases[floor_mod(i, x.e())].measure();
  return total * LocRingElem::L_pow(-i * x.d());
}

LocRingElem density_of_groups(const ConeSet& x, const std::vector<std::size_t>& which) {
  LocRingElem sum;
  for (long i = 0; i < x.e(); ++i) sum += LocRingElem::L_pow(i * x.d()) * slice_of_groups(x, which, i);
  Rational inv_e(1, x.e());
  return inv_e * sum * LocRingElem::geometric(x.d());
}

std::vector<std::size_t> all_groups(const ConeSet& x) {
  std::vector<std::size_t> g(x.groups().size());
  std::iota(g.begin(), g.end(), 0);
  return g;
}

}  // namespace

LocRingElem sphere_slice_measure(const ConeSet& x, long i) { return slice_of_groups(x, all_groups(x), i); }

LocRingElem ball_measure(const ConeSet& x, long n0) {
  LocRingElem sum;
  for (long i = n0; i < n0 + x.e(); ++i) sum += sphere_slice_measure(x, i);
  return sum * LocRingElem::geometric(static_cast<long>(x.e()) * x.d());
}

LocRingElem theta_sequence(const ConeSet& x, long n0) { return ball_measure(x, n0) * LocRingElem::L_pow(n0 * x.d()); }

LocRingElem local_density(const ConeSet& x) { return density_of_groups(x, all_groups(x)); }

LocRingElem group_density(const ConeSet& x, std::size_t group) {
  if (group >= x.groups().size()) throw DomainError("no such subspace group");
  return density_of_groups(x, {group});
}

WeightedConeFn::WeightedConeFn(long p, int d, int e, int r, int depth)
    : p_(p), d_(d), e_(e), r_(r), depth_(depth), probe_(p, d, depth, true) {
  if (e_ < 1 || r_ < 1) throw DomainError("weighted cone function needs e, r >= 1");
}

void WeightedConeFn::add_code(int phase, std::uint64_t code, long weight) {
  if (phase < 0 || phase >= e_) throw DomainError("phase out of range");
  long& w = weights_[{phase, code}];
  w += weight;
  if (w == 0) weights_.erase({phase, code});
}

void WeightedConeFn::add_support(std::vector<Key> keys) {
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  if (!keys.empty() && (keys.front().first < 0 || keys.back().first >= e_)) throw DomainError("phase out of range");
  if (weights_.empty()) {
    for (const auto& k : keys) weights_.emplace_hint(weights_.end(), k, 1);
    return;
  }
  for (const auto& k : keys) add_code(k.first, k.second, 1);
}

void WeightedConeFn::add(int phase, const Residues& cls, long weight) {
  if (!has_unit_coordinate(cls, p_)) throw DomainError("weighted class outside the unit sphere");
  add_code(phase, probe_.encode(cls), weight);
}

WeightedConeFn WeightedConeFn::refine(int depth) const {
  if (depth == depth_) return *this;
  WeightedConeFn out(p_, d_, e_, r_, depth);
  for (const auto& [key, w] : weights_) {
    CellSet one = CellSet::from_codes(p_, d_, depth_, {key.second}, true).refine(depth);
    for (auto c : one.codes()) out.weights_[{key.first, c}] += w;
  }
  return out;
}

CellSet WeightedConeFn::level_set(int phase, long w) const {
  std::vector<std::uint64_t> codes;
  for (const auto& [key, wt] : weights_)
    if (key.first == phase && wt == w) codes.push_back(key.second);
  return CellSet::from_codes(p_, d_, depth_, std::move(codes), true);
}

namespace {

void check_compatible(const WeightedConeFn& a, const WeightedConeFn& b) {
  if (a.prime() != b.prime() || a.d() != b.d() || a.e() != b.e() || a.r() != b.r())
    throw DomainError("weighted cone functions live in different spaces");
}

}  // namespace

bool operator==(const WeightedConeFn& a, const WeightedConeFn& b) {
  if (a.p_ != b.p_ || a.d_ != b.d_ || a.e_ != b.e_ || a.r_ != b.r_) return false;
  int depth = std::max(a.depth_, b.depth_);
  return a.refine(depth).weights_ == b.refine(depth).weights_;
}

WeightedConeFn operator+(const WeightedConeFn& a, const WeightedConeFn& b) {
  check_compatible(a, b);
  int depth = std::max(a.depth(), b.depth());
  WeightedConeFn out = a.refine(depth);
  const WeightedConeFn rb = b.refine(depth);
  for (const auto& [key, w] : rb.weights()) out.add_code(key.first, key.second, w);
  return out;
}

WeightedConeFn scale_weights(const WeightedConeFn& f, long factor) {
  WeightedConeFn out(f.prime(), f.d(), f.e(), f.r(), f.depth());
  if (factor == 0) return out;
  for (const auto& [key, w] : f.weights()) out.add_code(key.first, key.second, w * factor);
  return out;
}

LocRingElem local_density_fn(const WeightedConeFn& f) {
  std::set<std::pair<int, long>> levels;
  for (const auto& [key, w] : f.weights()) levels.insert({key.first, w});
  LocRingElem sum;
  for (const auto& [phase, w] : levels) sum += LocRingElem(w) * f.level_set(phase, w).measure();
  return Rational(1, f.e()) * sum * LocRingElem::geometric(f.d());
}

Rational local_density_fn_at_p(const WeightedConeFn& f) {
  BigInt total = 0;
  for (const auto& [key, w] : f.weights()) total += w;
  const long p = f.prime();
  const Rational cell = Rational(1) / Rational(ipow(p, static_cast<long>(f.depth()) * f.d()));
  const Rational geo = Rational(1) / (Rational(1) - Rational(1) / Rational(ipow(p, f.d())));
  return Rational(total) * cell * Rational(1, f.e()) * geo;
}

namespace {

struct GroupMap {
  RatMatrix unit_scaled;  // M' = p^{-shift} proj A
  long shift;
  long det_val;
};

GroupMap group_map(const ConeSet& x, std::size_t group, const RatMatrix& proj) {
  const auto& g = x.groups().at(group);
  if (static_cast<int>(proj.rows()) != x.d() || static_cast<int>(proj.cols()) != x.n())
    throw DomainError("projection must be d x n");
  RatMatrix m = proj * g.A;
  if (m.determinant() == 0) throw DomainError("projection is singular on a piece: V is not generic");
  long shift = m.min_valuation(x.prime()).value();
  RatMatrix mp = m;
  Rational f = rat_pow(Rational(x.prime()), -shift);
  for (std::size_t i = 0; i < mp.rows(); ++i)
    for (std::size_t j = 0; j < mp.cols(); ++j) mp(i, j) *= f;
  return {mp, shift, valuation(mp.determinant(), x.prime()).value()};
}

}  // namespace

Valuation group_det_valuation(const ConeSet& x, std::size_t group, const RatMatrix& proj) {
  return valuation((proj * x.groups().at(group).A).determinant(), x.prime());
}

bool genericity_test(const ConeSet& x, const RatMatrix& v_basis, const RatMatrix& proj) {
  for (std::size_t g = 0; g < x.groups().size(); ++g)
    if (group_det_valuation(x, g, proj).is_infinite()) return false;
  const long p = x.prime();
  const int n = x.n(), s = x.depth();
  CellSet probe(p, n, s, false);
  const std::int64_t mod = probe.modulus();
  std::vector<std::int64_t> units;
  for (std::int64_t u = 1; u < mod; ++u)
    if (u % p != 0) units.push_back(u);
  std::set<std::uint64_t> directions;
  Residues v(n);
  for (const auto& g : x.groups()) {
    std::vector<std::vector<std::int64_t>> a(n, std::vector<std::int64_t>(x.d()));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < x.d(); ++j) a[i][j] = reduce_mod(g.A(i, j), p, mod);
    for (const auto& base : g.bases)
      for (const auto& y : base.classes()) {
        for (int i = 0; i < n; ++i) {
          v[i] = 0;
          for (int j = 0; j < x.d(); ++j) v[i] = (v[i] + mul_mod(a[i][j], y[j], mod)) % mod;
        }
        for (auto u : units) {
          Residues w(n);
          for (int i = 0; i < n; ++i) w[i] = mul_mod(u, v[i], mod);
          directions.insert(probe.encode(w));
        }
      }
  }
  const int k = static_cast<int>(v_basis.cols());
  CellSet coeffs = CellSet::unit_sphere(p, k, s);
  for (const auto& c : coeffs.classes()) {
    for (int i = 0; i < n; ++i) {
      v[i] = 0;
      for (int j = 0; j < k; ++j) v[i] = (v[i] + mul_mod(reduce_mod(v_basis(i, j), p, mod), c[j], mod)) % mod;
    }
    if (directions.count(probe.encode(v))) return false;
  }
  return true;
}

int projection_min_depth(const ConeSet& x, const RatMatrix& proj) {
  int need = x.depth();
  for (std::size_t g = 0; g < x.groups().size(); ++g)
    need = std::max(need, x.depth() + static_cast<int>(group_map(x, g, proj).det_val));
  return need;
}

WeightedConeFn project_group(const ConeSet& x, std::size_t group, const RatMatrix& proj, int depth) {
  const GroupMap gm = group_map(x, group, proj);
  const long p = x.prime();
  const int d = x.d(), s = x.depth(), e = x.e();
  if (depth < s + gm.det_val)
    throw DomainError("projection depth " + std::to_string(depth) + " too coarse; need at least " +
                      std::to_string(s + gm.det_val));
  const int sigma_max = std::max<int>(s, static_cast<int>(gm.det_val) + 1);
  const std::int64_t big = ipow(p, sigma_max + depth);
  const std::int64_t out_mod = ipow(p, depth);
  std::vector<std::vector<std::int64_t>> m(d, std::vector<std::int64_t>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m[i][j] = reduce_mod(gm.unit_scaled(i, j), p, big);

  // The image of c + p^σ Z^d is p^t (w0 + p^{σ-t} M' Z^d); lattice cosets
  // p^k M' Z^d mod p^depth are cached by k.
  std::map<int, std::vector<Residues>> lattices;
  auto lattice = [&](int k) -> const std::vector<Residues>& {
    auto it = lattices.find(k);
    if (it != lattices.end()) return it->second;
    CellSet probe(p, d, depth, false);
    std::set<std::uint64_t> seen{probe.encode(Residues(d, 0))};
    std::vector<Residues> elems{Residues(d, 0)};
    const std::int64_t pk = ipow(p, std::min(k, depth));
    for (int j = 0; j < d; ++j) {
      Residues gen(d);
      for (int i = 0; i < d; ++i) gen[i] = mul_mod(pk % out_mod, m[i][j] % out_mod, out_mod);
      int v = depth;
      for (int i = 0; i < d; ++i) v = std::min(v, small_valuation(gen[i], p, depth));
      const std::int64_t order = ipow(p, depth - v);
      std::vector<Residues> next;
      for (const auto& x0 : elems) {
        Residues y = x0;
        for (std::int64_t t = 0; t < order; ++t) {
          if (seen.insert(probe.encode(y)).second || t == 0) next.push_back(y);
          for (int i = 0; i < d; ++i) y[i] = (y[i] + gen[i]) % out_mod;
        }
      }
      elems = std::move(next);
    }
    return lattices.emplace(k, std::move(elems)).first->second;
  };

  WeightedConeFn out(p, d, e, x.r(), depth);
  std::vector<WeightedConeFn::Key> image;
  CellSet probe(p, d, depth, true);
  const auto& g = x.groups()[group];
  for (int phase = 0; phase < e; ++phase) {
    std::vector<std::pair<Residues, int>> stack;
    for (const auto& c : g.bases[phase].classes()) stack.push_back({c, s});
    while (!stack.empty()) {
      auto [c, sigma] = std::move(stack.back());
      stack.pop_back();
      Residues w(d);
      for (int i = 0; i < d; ++i) {
        std::int64_t acc = 0;
        for (int j = 0; j < d; ++j) acc = (acc + mul_mod(m[i][j], c[j], big)) % big;
        w[i] = acc;
      }
      const std::int64_t ps = ipow(p, sigma);
      int t = sigma;
      for (int i = 0; i < d; ++i) t = std::min(t, small_valuation(w[i] % ps, p, sigma));
      if (t >= sigma) {
        for (std::int64_t a = 0; a < ipow(p, d); ++a) {
          Residues child = c;
          std::int64_t rest = a;
          for (int i = 0; i < d; ++i) {
            child[i] += ps * (rest % p);
            rest /= p;
          }
          stack.push_back({child, sigma + 1});
        }
        continue;
      }
      const std::int64_t pt = ipow(p, t);
      Residues w0(d);
      for (int i = 0; i < d; ++i) w0[i] = (w[i] / pt) % out_mod;
      const int out_phase = static_cast<int>(floor_mod(phase + gm.shift + t, e));
      Residues z(d);
      for (const auto& h : lattice(sigma - t)) {
        for (int i = 0; i < d; ++i) z[i] = (w0[i] + h[i]) % out_mod;
        image.push_back({out_phase, probe.encode(z)});
      }
    }
  }
  out.add_support(std::move(image));
  return out;
}

WeightedConeFn project(const ConeSet& x, const RatMatrix& proj, std::optional<int> depth) {
  const int need = projection_min_depth(x, proj);
  if (depth && *depth < need)
    throw DomainError("projection depth " + std::to_string(*depth) + " too coarse; need at least " + std::to_string(need));
  const int s_out = depth.value_or(need);
  WeightedConeFn out(x.prime(), x.d(), x.e(), x.r(), s_out);
  for (std::size_t g = 0; g < x.groups().size(); ++g) out = out + project_group(x, g, proj, s_out);
  return out;
}

}  // namespace pcc
