#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace polyglue {

// One pass/fail verdict: `statistic` compared against `threshold` under
// `comparison` ("<=", ">=", "in" for interval checks, "==" for exact ones).
//
// A few checks pin tolerances that finite n cannot meet: the target law
// Poisson(log n) sits gamma + log 2 below the true finite-n location, so the
// total-variation distance converges at a 1/sqrt(log n) rate and stays near
// 0.17 at every reachable scale. Those checks are still run and reported
// exactly as specified (`pass` stays false); they carry
// `infeasible_as_specified` together with a sanity band around the predicted
// finite-n value, so a genuine regression still trips `sanity_pass`.
struct Verdict {
  std::string check;
  int criterion = 0;  // acceptance criterion 1..10, or 0 for auxiliary checks
  double statistic = 0.0;
  double threshold = 0.0;
  std::string comparison;
  bool pass = false;
  bool infeasible_as_specified = false;
  bool sanity_pass = true;
  std::string detail;
};

enum class VerifySuite { kFast, kFull };

// Runs the verification suite. kFast covers the exact and enumeration-backed
// checks; kFull adds every statistical check at its committed scale and
// threshold. Deterministic given `seed`.
std::vector<Verdict> verify(VerifySuite suite, std::uint64_t seed);

// Strict conjunction of the specified thresholds.
bool all_pass(const std::vector<Verdict>& verdicts);
// Suite gate: every check passes, except that documented infeasible checks
// only need their sanity band.
bool gate_pass(const std::vector<Verdict>& verdicts);

// Names of the ten acceptance criteria, indexed 1..10.
const char* criterion_name(int criterion);

}  // namespace polyglue
