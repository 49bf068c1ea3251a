#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "pcc/cone.hpp"

namespace pcc {

/// Exit codes of the command-line driver.
enum ExitCode : int { kExitOk = 0, kExitFailed = 1, kExitInput = 2 };

struct DensityFlags {
  std::optional<long> limit;  // also print θ_n for 0 <= n <= limit
  std::optional<std::string> expect;
  bool json = false;
};
int cmd_density(const ConeSet& x, const DensityFlags& flags, std::ostream& out);

struct VerifyFlags {
  int max_level = 4;
  int jobs = 1;
  int budget = 1;
  bool breakdown = false;
  bool json = false;
  std::optional<std::string> expect;
};
int cmd_verify(const ConeSet& x, const VerifyFlags& flags, std::ostream& out);

struct OracleFlags {
  std::optional<int> level;  // default: oracle_min_level
  std::optional<long> slice; // default: every i < 2e
};
int cmd_oracle(const ConeSet& x, const OracleFlags& flags, std::ostream& out);

/// Counts G(n,k) over Z/p^m by enumeration and by formula.
int cmd_grass(int n, int k, long p, int m, std::ostream& out);

/// Density and oracle checks on randomly drawn cones.
int cmd_selftest(std::uint64_t seed, int count, std::ostream& out);

}  // namespace pcc
