#ifndef ESQPT_VERIFY_HPP
#define ESQPT_VERIFY_HPP

#include <string>
#include <vector>

#include "esqpt/solver.hpp"
#include "esqpt/u3.hpp"

namespace esqpt::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Cross-validation of the Lagrange and HP-atlas stationary searches at one
/// parameter point: multisets of (E, r) must agree pairwise.
struct MethodAgreement {
  bool matched = false;
  std::size_t lagrange_count = 0;
  std::size_t atlas_count = 0;
  double max_abs_de = 0.0;  // over matched pairs
};
MethodAgreement compare_methods(const u3::U3Params& p, const SolverConfig& cfg);

/// Named check suites: "core" (derivative/index machinery), "atlas"
/// (HP chart identities), "density" (smoothing and Weyl Monte Carlo),
/// "all" (the full acceptance criteria 1-9).
std::vector<CheckResult> run_suite(const std::string& suite);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace esqpt::verify

#endif
