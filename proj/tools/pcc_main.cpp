#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pcc/commands.hpp"
#include "pcc/document.hpp"

using namespace pcc;

namespace {

ConeSet load(const std::string& path) {
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read " + path);
    buf << in.rdbuf();
  }
  return parse_document(buf.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local densities of cone sets over Q_p and the local Cauchy-Crofton formula, in exact arithmetic"};
  app.require_subcommand(1);

  std::string input;
  DensityFlags dflags;
  VerifyFlags vflags;
  OracleFlags oflags;

  auto* density = app.add_subcommand("density", "local density, symbolic and at q=p");
  density->add_option("--input", input, "cone document (JSON, '-' for stdin)")->required();
  density->add_option("--limit", dflags.limit, "also print theta_n for n <= LIMIT and check e-periodicity");
  density->add_option("--expect", dflags.expect, "expected density, e.g. 1/(L-1)");
  density->add_flag("--json", dflags.json, "JSON output");

  auto* verify = app.add_subcommand("verify", "compare the density with the Grassmannian average");
  verify->add_option("--input", input, "cone document (JSON, '-' for stdin)")->required();
  verify->add_option("--max-level", vflags.max_level, "largest Grassmannian level")->capture_default_str();
  verify->add_option("--jobs", vflags.jobs, "worker threads")->capture_default_str();
  verify->add_option("--budget", vflags.budget, "extra levels for unresolved classes")->capture_default_str();
  verify->add_flag("--breakdown", vflags.breakdown, "per-class contributions");
  verify->add_option("--expect", vflags.expect, "expected value of both sides");
  verify->add_flag("--json", vflags.json, "JSON report");

  auto* oracle = app.add_subcommand("oracle", "brute-force class counting against the slice formula");
  oracle->add_option("--input", input, "cone document (JSON, '-' for stdin)")->required();
  oracle->add_option("--level", oflags.level, "counting level (default: smallest accepted)");
  oracle->add_option("--slice", oflags.slice, "single slice index (default: every i < 2e)");

  int n = 0, k = 0, level = 1;
  long p = 2;
  auto* grass = app.add_subcommand("grass", "count G(n,k) over Z/p^m");
  grass->add_option("n", n)->required();
  grass->add_option("k", k)->required();
  grass->add_option("p", p)->required();
  grass->add_option("--level", level, "m")->capture_default_str();

  std::uint64_t seed = 1;
  int count = 20;
  auto* selftest = app.add_subcommand("selftest", "density and oracle checks on random cones");
  selftest->add_option("--seed", seed)->capture_default_str();
  selftest->add_option("--count", count)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*density) return cmd_density(load(input), dflags, std::cout);
    if (*verify) return cmd_verify(load(input), vflags, std::cout);
    if (*oracle) return cmd_oracle(load(input), oflags, std::cout);
    if (*grass) return cmd_grass(n, k, p, level, std::cout);
    if (*selftest) return cmd_selftest(seed, count, std::cout);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
