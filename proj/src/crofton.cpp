#include "pcc/crofton.hpp"

#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace pcc {

namespace {

long floor_mod(long a, long m) { return ((a % m) + m) % m; }

RatMatrix unit_scaled(const RatMatrix& m, long p, long& shift) {
  shift = m.min_valuation(p).value();
  RatMatrix out = m;
  Rational f = rat_pow(Rational(p), -shift);
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= f;
  return out;
}

struct Descended {
  int phase;
  Residues cls;
  int sigma;
  int t;  // v(M' y) on the class
};

// Refine base classes until v(M' y) is constant on each class.
std::vector<Descended> descend(const ConeSet& x, std::size_t group, const RatMatrix& mp, long det_val) {
  const long p = x.prime();
  const int d = x.d(), s = x.depth();
  const int sigma_max = std::max<int>(s, static_cast<int>(det_val) + 1);
  const std::int64_t big = ipow(p, sigma_max);
  std::vector<std::vector<std::int64_t>> m(d, std::vector<std::int64_t>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m[i][j] = reduce_mod(mp(i, j), p, big);
  std::vector<Descended> out;
  const auto& g = x.groups().at(group);
  for (int phase = 0; phase < x.e(); ++phase) {
    std::vector<std::pair<Residues, int>> stack;
    for (const auto& c : g.bases[phase].classes()) stack.push_back({c, s});
    while (!stack.empty()) {
      auto [c, sigma] = std::move(stack.back());
      stack.pop_back();
      const std::int64_t ps = ipow(p, sigma);
      int t = sigma;
      for (int i = 0; i < d; ++i) {
        std::int64_t acc = 0;
        for (int j = 0; j < d; ++j) acc = (acc + mul_mod(m[i][j], c[j], big)) % big;
        t = std::min(t, small_valuation(acc % ps, p, sigma));
      }
      if (t < sigma) {
        out.push_back({phase, c, sigma, t});
        continue;
      }
      for (std::int64_t a = 0; a < ipow(p, d); ++a) {
        Residues child = c;
        std::int64_t rest = a;
        for (int i = 0; i < d; ++i) {
          child[i] += ps * (rest % p);
          rest /= p;
        }
        stack.push_back({child, sigma + 1});
      }
    }
  }
  return out;
}

}  // namespace

RatVector phi_map(const RatVector& x, const RatMatrix& proj, long p) {
  RatVector px = proj * x;
  Valuation vp = vector_valuation(px, p);
  if (vp.is_infinite()) throw DomainError("point lies in the kernel direction of the projection");
  long vx = vector_valuation(x, p).value();
  return scale(px, rat_pow(Rational(p), vx - vp.value()));
}

long jacobian_valuation(const ConeSet& x, std::size_t group, const Residues& cls, const RatMatrix& proj) {
  RatMatrix m = proj * x.groups().at(group).A;
  Rational det = m.determinant();
  if (det == 0) throw DomainError("projection is singular on the piece: V is not generic");
  RatVector y;
  for (auto c : cls) y.emplace_back(static_cast<long>(c));
  Valuation vy = vector_valuation(m * y, x.prime());
  return valuation(det, x.prime()).value() - static_cast<long>(x.d()) * vy.value();
}

LocRingElem jacobian_density(const ConeSet& x, std::size_t group, const RatMatrix& proj) {
  RatMatrix m = proj * x.groups().at(group).A;
  if (m.determinant() == 0) throw DomainError("projection is singular on the piece: V is not generic");
  long shift = 0;
  RatMatrix mp = unit_scaled(m, x.prime(), shift);
  const long det_val = valuation(mp.determinant(), x.prime()).value();
  auto parts = descend(x, group, mp, det_val);
  std::map<std::pair<int, int>, std::vector<std::pair<Residues, int>>> by_key;  // (phase, t) -> classes
  for (const auto& dsc : parts) by_key[{dsc.phase, dsc.t}].push_back({dsc.cls, dsc.sigma});
  LocRingElem sum;
  for (const auto& [key, classes] : by_key)
    sum += LocRingElem::L_pow(-(det_val - static_cast<long>(x.d()) * key.second)) *
           measure_classes(x.prime(), x.d(), classes);
  return Rational(1, x.e()) * sum * LocRingElem::geometric(x.d());
}

namespace {

struct Accumulator {
  Rational value;
  std::map<std::string, std::pair<LocRingElem, Rational>> symbolic;  // canonical text -> (element, mass)
  Rational tail;
  long mismatches = 0;
  long projected = 0;
  long unprojected = 0;
  bool top_open = false;

  void add_symbolic(const LocRingElem& v, const Rational& w) {
    auto [it, fresh] = symbolic.try_emplace(v.str(), v, Rational(0));
    it->second.second += w;
  }
  void merge(const Accumulator& o) {
    value += o.value;
    tail += o.tail;
    mismatches += o.mismatches;
    projected += o.projected;
    unprojected += o.unprojected;
    for (const auto& [k, v] : o.symbolic) {
      auto [it, fresh] = symbolic.try_emplace(k, v.first, Rational(0));
      it->second.second += v.second;
    }
  }
  LocRingElem total() const {
    LocRingElem out;
    for (const auto& [k, v] : symbolic) out += v.second * v.first;
    return out;
  }
};

struct GroupValue {
  Rational numeric;
  bool projected;
  LocRingElem symbolic;
  Rational jacobian_at_p;
};

// Projected density of one group, keyed by the data it depends on: the group,
// the scaling of P A_g and its unit-scaled entries to the precision the
// projection reads.
class GroupCache {
 public:
  const GroupValue& get(const ConeSet& x, std::size_t g, const RatMatrix& proj, long cap) {
    const long p = x.prime();
    RatMatrix m = proj * x.groups().at(g).A;
    long shift = 0;
    RatMatrix mp = unit_scaled(m, p, shift);
    const long det_val = valuation(mp.determinant(), p).value();
    const int s = x.depth();
    const int prec = s + static_cast<int>(det_val) + std::max<int>(s, static_cast<int>(det_val) + 1);
    const std::int64_t mod = ipow(p, prec);
    std::vector<std::int64_t> key{static_cast<std::int64_t>(g), shift, det_val};
    for (std::size_t i = 0; i < mp.rows(); ++i)
      for (std::size_t j = 0; j < mp.cols(); ++j) key.push_back(reduce_mod(mp(i, j), p, mod));
    {
      std::lock_guard lock(mutex_);
      auto it = values_.find(key);
      if (it != values_.end()) return it->second;
    }
    GroupValue gv;
    // Symbolic value from the projected image when it is enumerated, else
    // from the change of variables; both are compared at q = p.
    const LocRingElem jac = jacobian_density(x, g, proj);
    gv.jacobian_at_p = jac.eval_at(p);
    const int out_depth = s + static_cast<int>(det_val);
    gv.projected = out_depth * x.d() < 63 && ipow(p, out_depth * x.d()) <= cap;
    if (gv.projected) {
      const WeightedConeFn image = project_group(x, g, proj, out_depth);
      gv.numeric = local_density_fn_at_p(image);
      gv.symbolic = local_density_fn(image);
    } else {
      gv.numeric = gv.jacobian_at_p;
      gv.symbolic = jac;
    }
    std::lock_guard lock(mutex_);
    return values_.try_emplace(key, std::move(gv)).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::vector<std::int64_t>, GroupValue> values_;
};

struct RhsContext {
  const ConeSet& x;
  const CroftonOptions& opts;
  int max_level;
  std::vector<LocRingElem> group_theta;
  std::vector<Rational> group_theta_at_p;
  Rational child_split;  // 1 / p^{k(n-k)}
  mutable GroupCache cache;
};

// Returns the deepest level reached below v.
int evaluate(const RhsContext& ctx, const GrassPoint& v, const Rational& w, const std::vector<std::size_t>& pending,
             Accumulator& acc) {
  const ConeSet& x = ctx.x;
  const long p = x.prime();
  const int level = v.level();
  RatMatrix proj = projection_matrix(v, ctx.opts.frame);
  std::vector<std::size_t> resolved, open;
  long max_det = 0;
  for (auto g : pending) {
    // On a class where v(det) < level the Jacobian valuations, and with them
    // the projected density, are the same for every V in the class.
    Valuation dv = group_det_valuation(x, g, proj);
    if (!dv.is_infinite() && dv.value() <= level - 1) {
      resolved.push_back(g);
      max_det = std::max(max_det, dv.value());
    } else {
      open.push_back(g);
    }
  }
  if (!resolved.empty()) {
    if (ctx.opts.perturb) {
      const int depth = x.depth() + static_cast<int>(max_det);
      WeightedConeFn fn(p, x.d(), x.e(), x.r(), depth);
      LocRingElem sym;
      for (auto g : resolved) {
        fn = fn + project_group(x, g, proj, depth);
        sym += jacobian_density(x, g, proj);
      }
      ctx.opts.perturb(fn);
      Rational j = local_density_fn(fn).eval_at(p);
      if (j != sym.eval_at(p)) ++acc.mismatches;
      acc.value += w * j;
      acc.add_symbolic(sym, w);
    } else {
      // Densities add over groups; each group only sees P A_g to finite precision.
      for (auto g : resolved) {
        const GroupValue& gv = ctx.cache.get(x, g, proj, ctx.opts.projection_cap);
        ++(gv.projected ? acc.projected : acc.unprojected);
        if (gv.numeric != gv.jacobian_at_p) ++acc.mismatches;
        acc.value += w * gv.numeric;
        acc.add_symbolic(gv.symbolic, w);
      }
    }
  }
  int deepest = level;
  if (open.empty()) return deepest;
  if (level == ctx.max_level - ctx.opts.budget) acc.top_open = true;
  if (level < ctx.max_level) {
    Rational cw = w * ctx.child_split;
    for (const auto& child : v.children()) deepest = std::max(deepest, evaluate(ctx, child, cw, open, acc));
    return deepest;
  }
  // Unresolved mass: invariant under the stabilizer of the subspace, where the
  // average of the projected density is the density itself.
  for (auto g : open) {
    acc.tail += w;
    acc.value += w * ctx.group_theta_at_p[g];
    acc.add_symbolic(ctx.group_theta[g], w);
  }
  return deepest;
}

}  // namespace

RhsResult rhs_integral(const ConeSet& raw, int m, const CroftonOptions& opts) {
  if (m < 1) throw DomainError("Grassmannian level must be at least 1");
  if (opts.budget < 0) throw DomainError("refinement budget must be nonnegative");
  const ConeSet x = raw.normalized() ? raw : normalize(raw);
  const long p = x.prime();
  const int k = x.n() - x.d();
  RhsContext ctx{x, opts, m + opts.budget, {}, {}, Rational(1) / Rational(ipow(p, k * x.d())), {}};
  std::vector<std::size_t> all;
  for (std::size_t g = 0; g < x.groups().size(); ++g) {
    all.push_back(g);
    ctx.group_theta.push_back(group_density(x, g));
    ctx.group_theta_at_p.push_back(ctx.group_theta.back().eval_at(p));
  }
  const auto vs = enumerate_grassmannian_lifts(x.n(), k, p, m);
  const Rational w = uniform_weight(x.n(), k, p, m);

  const int jobs = std::max(1, opts.jobs);
  std::vector<Accumulator> per_v(vs.size());
  std::vector<int> depth_v(vs.size(), m);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < vs.size(); i = next++) depth_v[i] = evaluate(ctx, vs[i], w, all, per_v[i]);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = vs.size();
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  RhsResult out;
  Accumulator total;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    total.merge(per_v[i]);
    const bool refined = per_v[i].top_open;
    (refined ? out.refined_count : out.generic_count) += 1;
    if (opts.breakdown) out.breakdown.push_back({vs[i].str(), w, per_v[i].value, depth_v[i] - m});
  }
  out.value = total.value;
  out.symbolic = total.total();
  out.tail_mass = total.tail;
  out.mismatches = total.mismatches;
  out.projected = total.projected;
  out.unprojected = total.unprojected;
  return out;
}

CroftonReport verify_crofton(const ConeSet& raw, int m_max, const CroftonOptions& opts) {
  if (m_max < 1) throw DomainError("max level must be at least 1");
  const ConeSet x = raw.normalized() ? raw : normalize(raw);
  const long p = x.prime();
  CroftonReport rep;
  rep.lhs = local_density(x);
  rep.lhs_at_p = rep.lhs.eval_at(p);
  RhsResult cur = rhs_integral(x, 1, opts);
  int level = 1;
  while (true) {
    RhsResult nxt = rhs_integral(x, level + 1, opts);
    rep.stabilized = cur.value == nxt.value;
    rep.symbolic_stabilized = rep.stabilized && cur.symbolic == nxt.symbolic;
    if (rep.stabilized || level >= m_max) break;
    cur = std::move(nxt);
    ++level;
  }
  rep.level = level;
  rep.rhs = cur.symbolic;
  rep.rhs_at_p = cur.value;
  rep.generic_count = cur.generic_count;
  rep.refined_count = cur.refined_count;
  rep.tail_mass = cur.tail_mass;
  rep.mismatches = cur.mismatches;
  rep.breakdown = std::move(cur.breakdown);
  rep.equal = rep.stabilized && rep.lhs_at_p == rep.rhs_at_p;
  rep.symbolic_equal = rep.stabilized && rep.lhs == rep.rhs;
  return rep;
}

namespace {

struct CalibrationAcc {
  std::map<long, Rational> by_jacobian;
  Rational tail;
};

void calibrate(const ConeSet& x, std::size_t group, const Residues& cls, const GrassPoint& v, const Rational& w,
               int max_level, const Rational& split, const CroftonOptions& opts, CalibrationAcc& acc) {
  RatMatrix proj = projection_matrix(v, opts.frame);
  Valuation dv = group_det_valuation(x, group, proj);
  if (!dv.is_infinite() && dv.value() <= v.level() - 1) {
    acc.by_jacobian[jacobian_valuation(x, group, cls, proj)] += w;
  } else if (v.level() < max_level) {
    for (const auto& child : v.children()) calibrate(x, group, cls, child, w * split, max_level, split, opts, acc);
  } else {
    acc.tail += w;
  }
}

}  // namespace

CalibrationResult c_constant_check(const ConeSet& raw, std::size_t group, const Residues& cls, int m,
                                   const CroftonOptions& opts) {
  const ConeSet x = raw.normalized() ? raw : normalize(raw);
  if (group >= x.groups().size()) throw DomainError("no such subspace group");
  if (static_cast<int>(cls.size()) != x.d() || !has_unit_coordinate(cls, x.prime()))
    throw DomainError("sample class must be a unit vector of the parameter space");
  const long p = x.prime();
  const int k = x.n() - x.d();
  const Rational split = Rational(1) / Rational(ipow(p, k * x.d()));
  const Rational w = uniform_weight(x.n(), k, p, m);
  CalibrationAcc acc;
  for (const auto& v : enumerate_grassmannian_lifts(x.n(), k, p, m))
    calibrate(x, group, cls, v, w, m + opts.budget, split, opts, acc);
  CalibrationResult out;
  out.symbolic = LocRingElem(acc.tail);
  for (const auto& [j, mass] : acc.by_jacobian) out.symbolic += mass * LocRingElem::L_pow(-j);
  out.value = out.symbolic.eval_at(p);
  out.tail_mass = acc.tail;
  return out;
}

namespace {

// Classes {p^j z} for z in a normalized class set, as a cell set at depth j + s.
CellSet scaled_points(const CellSet& z, long j) {
  const long p = z.prime();
  const std::int64_t pj = ipow(p, static_cast<int>(j));
  std::vector<Residues> pts;
  for (auto c : z.classes()) {
    for (auto& v : c) v *= pj;
    pts.push_back(std::move(c));
  }
  return CellSet(p, z.dim(), z.depth() + static_cast<int>(j), pts, false);
}

}  // namespace

DecompositionResult d_decomposition_check(const ConeSet& raw, const RatMatrix& proj) {
  if (raw.pieces().size() != 1) throw DomainError("decomposition check needs a single-piece cone");
  const ConeSet x = normalize(raw);
  if (x.groups().size() != 1) throw DomainError("decomposition check needs a single-piece cone");
  const long p = x.prime();
  const int d = x.d(), e = x.e(), s = x.depth();
  RatMatrix m = proj * x.groups()[0].A;
  if (m.determinant() == 0) throw DomainError("projection is singular on the piece: V is not generic");
  long shift = 0;
  RatMatrix mp = unit_scaled(m, p, shift);
  const long det_val = valuation(mp.determinant(), p).value();
  const int s_img = s + static_cast<int>(det_val);

  DecompositionResult out;
  WeightedConeFn fn = project(x, proj);
  for (const auto& [key, w] : fn.weights())
    if (w != 1) throw DomainError("projection is not injective on the piece");
  LocRingElem lhs;
  for (int j = 0; j < e; ++j) {
    // L^{dj} μ(p_V X ∩ S(0,j)) with the slice written as the points p^j z
    lhs += LocRingElem::L_pow(static_cast<long>(d) * j) * scaled_points(fn.level_set(j, 1), j).measure();
  }

  LocRingElem rhs;
  bool scaling = true;
  for (int i = 0; i < e; ++i) {
    // p_V(X ∩ S(0,i)) = p^{i+shift} M'(B_i); split M'(B_i) by valuation t.
    CellSet image = cell_linear_image(mp, x.groups()[0].bases[i], s_img).image;
    std::vector<std::vector<Residues>> by_phase(e);
    for (auto w : image.classes()) {
      int t = s_img;
      for (auto c : w) t = std::min(t, small_valuation(c, p, s_img));
      if (t >= s_img) throw DomainError("image class meets the origin");
      const std::int64_t pt = ipow(p, t);
      Residues z(d);
      for (int k = 0; k < d; ++k) z[k] = w[k] / pt;
      CellSet zc = CellSet(p, d, s_img - t, {z}, true).refine(s_img);
      auto& dst = by_phase[floor_mod(i + shift + t, e)];
      for (auto c : zc.classes()) dst.push_back(c);
    }
    LocRingElem d_i;
    for (int j = 0; j < e; ++j) {
      if (by_phase[j].empty()) continue;
      ++out.pairs;
      CellSet z(p, d, s_img, by_phase[j], true);
      LocRingElem b = scaled_points(z, j).measure();           // μ(B_i^j)
      LocRingElem moved = scaled_points(z, i).measure();       // μ(p^{i-j} B_i^j)
      LocRingElem left = LocRingElem::L_pow(static_cast<long>(d) * j) * b;
      LocRingElem right = LocRingElem::L_pow(static_cast<long>(d) * i) * moved;
      scaling = scaling && left == right && left.eval_at(p) == right.eval_at(p);
      d_i += moved;
    }
    rhs += LocRingElem::L_pow(static_cast<long>(d) * i) * d_i;
  }
  out.lhs = lhs.eval_at(p);
  out.rhs = rhs.eval_at(p);
  out.sum_identity = out.lhs == out.rhs;
  out.scaling_identity = scaling;
  return out;
}

}  // namespace pcc
