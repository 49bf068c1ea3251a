#include <doctest.h>

#include <array>
#include <cstdio>
#include <json.hpp>
#include <memory>
#include <sstream>
#include <sys/wait.h>

#include "pcc/commands.hpp"
#include "pcc/document.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(PCC_CLI) + " " + args + " 2>/dev/null";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  REQUIRE(pipe);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe.release());
  return {WEXITSTATUS(status), out};
}

std::string data(const std::string& name) { return std::string(PCC_DATA) + "/" + name; }

}  // namespace

TEST_CASE("density command") {
  Run r = run("density --input " + data("ray.json"));
  CHECK(r.code == 0);
  CHECK(r.out == "density: 1/(L-1)\nat q=3: 1/2\n");
  CHECK(run("density --input " + data("plane.json") + " --expect 1").code == 0);
  Run lim = run("density --input " + data("ray.json") + " --limit 2 --json");
  auto j = nlohmann::json::parse(lim.out);
  CHECK(j["density"] == "1/(L-1)");
  CHECK(j["theta"].size() == 3);
  CHECK(j["theta"][2]["periodic"] == true);
}

TEST_CASE("verify command and exit codes") {
  Run ok = run("verify --input " + data("two_rays.json") + " --json");
  CHECK(ok.code == 0);
  auto j = nlohmann::json::parse(ok.out);
  for (const char* key : {"lhs", "rhs", "level", "generic_count", "refined_count", "equal"}) CHECK(j.contains(key));
  CHECK(j["lhs"] == "2/(L-1)");
  CHECK(j["rhs"] == "2/(L-1)");
  CHECK(j["equal"] == true);
  CHECK(run("verify --input " + data("two_rays.json") + " --expect '2/(L-1)'").code == 0);
  CHECK(run("verify --input " + data("two_rays.json") + " --expect '3/(L-1)'").code == 1);
  CHECK(run("verify --input " + data("plane.json")).code == 0);
  CHECK(run("verify --input " + data("missing.json")).code == 2);
  CHECK(run("verify").code == 2);
  CHECK(run("frobnicate").code == 2);
}

TEST_CASE("thread count does not change the report") {
  const std::string base = "verify --input " + data("plane.json") + " --json --breakdown";
  Run one = run(base + " --jobs 1");
  Run three = run(base + " --jobs 3");
  CHECK(one.code == 0);
  CHECK(one.out == three.out);
}

TEST_CASE("oracle, grass and selftest commands") {
  Run o = run("oracle --input " + data("ray.json") + " --slice 0");
  CHECK(o.code == 0);
  CHECK(o.out == "slice 0 level 3: classes 9  oracle 1/3  formula 1/3  ok\n");
  CHECK(run("oracle --input " + data("ray.json") + " --level 1").code == 2);
  CHECK(run("grass 2 1 3").out == "G(2,1) over Z/3^1: enumerated 4, formula 4, gaussian binomial 4  ok\n");
  CHECK(run("grass 4 2 2").code == 0);
  CHECK(run("grass 2 1 3 --level 2").out == "G(2,1) over Z/3^2: enumerated 12, formula 12  ok\n");
  CHECK(run("grass 2 1 4").code == 2);
  CHECK(run("selftest --seed 5 --count 4").code == 0);
}

TEST_CASE("commands in process") {
  std::ostringstream out;
  pcc::ConeSet ray = pcc::parse_document(R"({"p": 3, "n": 2, "d": 1, "pieces": [
    {"e": 1, "r": 1, "phase": 0, "A": [["1"], ["0"]], "base": {"depth": 1, "classes": [[1]]}}]})");
  pcc::DensityFlags df;
  df.expect = "1/(L+1)";
  CHECK(pcc::cmd_density(ray, df, out) == pcc::kExitFailed);
  pcc::VerifyFlags vf;
  vf.max_level = 2;
  CHECK(pcc::cmd_verify(ray, vf, out) == pcc::kExitOk);
}
