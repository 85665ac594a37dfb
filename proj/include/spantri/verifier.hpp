#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spantri/exact.hpp"
#include "spantri/fragments.hpp"
#include "spantri/triangulation.hpp"

namespace spantri {

/// How fragments are enumerated.
///
/// direct: every connected edge subset with at most max_edges edges.
/// reduced: every connected vertex set U with at most max_edges + 1
///   vertices, together with the extreme value each inequality can take
///   over the connected edge sets spanning exactly U. The extremes are exact
///   under structural preconditions checked at run time; when a
///   precondition fails the check falls back to direct enumeration.
enum class EnumerationMode { reduced, direct };

struct VerifyOptions {
  int max_edges = 8;
  std::uint64_t budget = 200'000'000;
  int workers = 0;
  EnumerationMode mode = EnumerationMode::reduced;
  std::size_t max_witnesses = 20;
};

struct Violation {
  std::string condition;
  std::string detail;
  std::vector<Edge> edges;    // the offending fragment (or cycle edges)
  std::vector<int> cycle;     // vertex sequence for cycle conditions
  bool reverified = false;    // recomputed independently and still violating
};

struct ConditionResult {
  std::string id;
  std::string statement;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  bool informational = false;  // reported but not part of `passed`
};

struct VerificationReport {
  std::string suite;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::string mode;
  std::uint64_t fragments_checked = 0;
  std::vector<ConditionResult> conditions;
  std::vector<Violation> violations;   // pass/fail conditions, first max_witnesses in enumeration order
  std::vector<Violation> diagnostics;  // informational conditions
  bool aborted = false;
  bool passed = false;

  const ConditionResult* find(const std::string& id) const;
};

struct DensityParams {
  Rational q;
  Rational eps;
  Rational delta;
};

/// q = 3 - alpha with (eps, delta) = (1/9, 8/9) for n >= 2k and (2/5, 1/2) otherwise.
DensityParams default_density_params(const Triangulation& t);

/// v(I) >= |I|/q + 1 + eps when |I| <= delta n, v(I) >= |I|/q + 1 otherwise,
/// for every connected I with 1..max_edges edges.
VerificationReport check_density_condition(const Triangulation& t, const DensityParams& params,
                                           const VerifyOptions& opts);

/// (l - 1/3)/v >= k/n over simple cycles of length <= k-1, plus the arc
/// diagnostics of the nested proof.
VerificationReport check_isoperimetric_nested(const Triangulation& t, const VerifyOptions& opts);

/// (l - 1)/t >= k/s over simple cycles of length <= k-1 with t > 0 strictly
/// interior vertices, plus the neighbourhood expansion of inner-cycle arcs.
VerificationReport check_isoperimetric_two_ring(const Triangulation& t, const VerifyOptions& opts);

/// |I| <= 2v + r - 3c, connected r = 0 fragments have |I| <= 2v - 3, and
/// connected fragments with r > 0 have |I| >= (r - 1) B / 2.
VerificationReport check_k4_regime(const Triangulation& t, const VerifyOptions& opts);

/// v >= i/2 + c + (c - c_S)/2 + t/2, the per-hub wheel bound, the
/// per-component bound |I_j| <= 2v(I_j) - 2 - t(I_j), and the count of
/// components with t = 0.
VerificationReport check_wheel_regime(const Triangulation& t, const VerifyOptions& opts);

/// Empty when internal vertices are pairwise non-adjacent and each one's
/// neighbourhood induces exactly its rim cycle, with rims pairwise disjoint;
/// otherwise a description of the first obstruction.
std::string wheel_structure_problem(const Triangulation& t);

/// Runs the suite by name: nested | two-ring | k4 | wheel | density.
VerificationReport run_suite(const Triangulation& t, const std::string& suite,
                             const VerifyOptions& opts);

}  // namespace spantri
