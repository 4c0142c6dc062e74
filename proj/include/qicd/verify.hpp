#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qicd {

enum class VerifyLevel { Fast, Full };

struct CheckResult {
  std::string name;
  bool passed;
  double measured;
  double tolerance;
  std::string detail;
};

/// Oracle cross-checks: Fock-space and quadrature oracles against the closed forms,
/// sampler statistics, and channel-composition identities. Deterministic in `seed`.
std::vector<CheckResult> run_verification(VerifyLevel level, std::uint64_t seed, int threads = 1);

}  // namespace qicd
