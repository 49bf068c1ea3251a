#include "pcc/commands.hpp"

#include <json.hpp>
#include <random>

#include "pcc/crofton.hpp"
#include "pcc/document.hpp"
#include "pcc/grass.hpp"
#include "pcc/oracle.hpp"
#include "pcc/suite.hpp"

namespace pcc {

namespace {

ConeSet normalized(const ConeSet& x) { return x.normalized() ? x : normalize(x); }

// Average of the e constant subsequences of θ.
LocRingElem ball_limit(const ConeSet& x) {
  LocRingElem sum;
  for (long i = 0; i < x.e(); ++i) sum += theta_sequence(x, i);
  return Rational(1, x.e()) * sum;
}

}  // namespace

int cmd_density(const ConeSet& raw, const DensityFlags& flags, std::ostream& out) {
  const ConeSet x = normalized(raw);
  const long p = x.prime();
  const LocRingElem theta = local_density(x);
  bool ok = true;
  nlohmann::json j;
  j["density"] = theta.pretty();
  j["density_at_p"] = to_string(theta.eval_at(p));
  if (!flags.json) out << "density: " << theta.pretty() << "\nat q=" << p << ": " << to_string(theta.eval_at(p)) << "\n";
  if (flags.limit) {
    nlohmann::json seq = nlohmann::json::array();
    for (long n = 0; n <= *flags.limit; ++n) {
      const LocRingElem t = theta_sequence(x, n);
      const bool periodic = t == theta_sequence(x, n + x.e());
      ok = ok && periodic;
      seq.push_back({{"n", n}, {"theta", t.pretty()}, {"periodic", periodic}});
      if (!flags.json) out << "theta(" << n << ") = " << t.pretty() << (periodic ? "" : "  [not e-periodic]") << "\n";
    }
    j["theta"] = seq;
  }
  if (flags.expect) {
    const bool match = expression_matches(parse_expression(*flags.expect), theta, p);
    ok = ok && match;
    j["expect_matches"] = match;
    if (!flags.json) out << "expected " << *flags.expect << ": " << (match ? "match" : "MISMATCH") << "\n";
  }
  if (flags.json) out << j.dump(2) << "\n";
  return ok ? kExitOk : kExitFailed;
}

int cmd_verify(const ConeSet& raw, const VerifyFlags& flags, std::ostream& out) {
  const ConeSet x = normalized(raw);
  CroftonOptions opts;
  opts.jobs = flags.jobs;
  opts.budget = flags.budget;
  opts.breakdown = flags.breakdown;
  const CroftonReport rep = verify_crofton(x, flags.max_level, opts);
  bool ok = rep.equal;
  bool expect_ok = true;
  if (flags.expect) {
    const Expression e = parse_expression(*flags.expect);
    expect_ok = expression_matches(e, rep.lhs, x.prime()) &&
                (expression_matches(e, rep.rhs, x.prime()) || (!e.has_L && rep.equal));
    ok = ok && expect_ok;
  }
  if (flags.json) {
    out << report_json(rep, x.prime()) << "\n";
  } else {
    out << "lhs: " << rep.lhs.pretty() << "  (" << to_string(rep.lhs_at_p) << " at q=" << x.prime() << ")\n";
    out << "rhs: " << rep.rhs.pretty() << "  (" << to_string(rep.rhs_at_p) << " at q=" << x.prime() << ")\n";
    out << "level: " << rep.level << (rep.stabilized ? " (stabilized)" : " (not stabilized)") << "\n";
    out << "generic: " << rep.generic_count << "  refined: " << rep.refined_count
        << "  tail mass: " << to_string(rep.tail_mass) << "  mismatches: " << rep.mismatches << "\n";
    for (const auto& v : rep.breakdown)
      out << "  " << v.v << "  w=" << to_string(v.weight) << "  value=" << to_string(v.value)
          << "  refined=" << v.refined_levels << "\n";
    out << "equal at q=p: " << (rep.equal ? "yes" : "no") << "  symbolic: " << (rep.symbolic_equal ? "yes" : "no")
        << "\n";
    if (flags.expect) out << "expected " << *flags.expect << ": " << (expect_ok ? "match" : "MISMATCH") << "\n";
  }
  return ok ? kExitOk : kExitFailed;
}

int cmd_oracle(const ConeSet& raw, const OracleFlags& flags, std::ostream& out) {
  const ConeSet x = normalized(raw);
  const int m = flags.level.value_or(oracle_min_level(x));
  std::vector<long> slices;
  if (flags.slice)
    slices.push_back(*flags.slice);
  else
    for (long i = 0; i < 2L * x.e(); ++i) slices.push_back(i);
  bool ok = true;
  for (long i : slices) {
    const OracleCount oc = oracle_slice(x, i, m);
    const Rational formula = sphere_slice_measure(x, i).eval_at(x.prime());
    const bool match = oc.measure == formula;
    ok = ok && match;
    out << "slice " << i << " level " << m << ": classes " << oc.classes << "  oracle " << to_string(oc.measure)
        << "  formula " << to_string(formula) << (match ? "  ok" : "  MISMATCH") << "\n";
  }
  return ok ? kExitOk : kExitFailed;
}

int cmd_grass(int n, int k, long p, int m, std::ostream& out) {
  if (n < 0 || k < 0 || k > n) throw DomainError("need 0 <= k <= n");
  if (m < 1) throw DomainError("level must be at least 1");
  if (!is_prime(p)) throw DomainError("p must be prime, got " + std::to_string(p));
  const auto points = enumerate_grassmannian_lifts(n, k, p, m);
  const BigInt formula = grassmannian_lift_count(n, k, p, m);
  const Rational gauss = gaussian_binomial(n, k).eval_at(p);
  const bool ok = BigInt(points.size()) == formula && (m > 1 || Rational(formula) == gauss);
  out << "G(" << n << "," << k << ") over Z/" << p << "^" << m << ": enumerated " << points.size() << ", formula "
      << formula.get_str();
  if (m == 1) out << ", gaussian binomial " << to_string(gauss);
  out << (ok ? "  ok" : "  MISMATCH") << "\n";
  return ok ? kExitOk : kExitFailed;
}

int cmd_selftest(std::uint64_t seed, int count, std::ostream& out) {
  std::mt19937_64 rng(seed);
  int failures = 0;
  for (int c = 0; c < count; ++c) {
    const ConeSet x = normalize(random_cone(rng));
    const long p = x.prime();
    const bool density_ok = local_density(x) == ball_limit(x);
    bool oracle_ok = true;
    const int m = oracle_min_level(x);
    for (long i = 0; i < 2L * x.e(); ++i)
      oracle_ok = oracle_ok && oracle_slice(x, i, m).measure == sphere_slice_measure(x, i).eval_at(p);
    if (!density_ok || !oracle_ok) ++failures;
    out << "cone " << c << ": p=" << p << " n=" << x.n() << " d=" << x.d() << " e=" << x.e() << " r=" << x.r()
        << " pieces=" << x.pieces().size() << "  density " << (density_ok ? "ok" : "FAIL") << "  oracle "
        << (oracle_ok ? "ok" : "FAIL") << "\n";
  }
  out << (failures == 0 ? "selftest passed" : "selftest FAILED") << " (" << count << " cones, seed " << seed << ")\n";
  return failures == 0 ? kExitOk : kExitFailed;
}

}  // namespace pcc
