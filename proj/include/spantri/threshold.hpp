#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "spantri/triangulation.hpp"

namespace spantri {

/// Simple undirected graph on [n] stored as adjacency bit rows.
class Graph {
 public:
  explicit Graph(int n);

  int n() const { return n_; }
  bool has_edge(int u, int v) const { return (row(u)[v >> 6] >> (v & 63)) & 1; }
  void add_edge(int u, int v);
  const std::uint64_t* row(int v) const { return bits_.data() + static_cast<std::size_t>(v) * words_; }
  int words() const { return words_; }
  int degree(int v) const;
  std::uint64_t edge_count() const;

 private:
  int n_;
  int words_;
  std::vector<std::uint64_t> bits_;
};

/// SplitMix64 finaliser, used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x);
/// Seed of sub-stream `index` of `seed`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// G(n, p): one uniform per pair in lexicographic order, edge iff u < p. Two
/// calls with the same seed and p1 <= p2 give nested graphs.
Graph sample_gnp(int n, double p, std::uint64_t seed);

enum class SearchOutcome { found, absent, inconclusive };

struct ContainmentResult {
  SearchOutcome outcome = SearchOutcome::absent;
  std::vector<int> embedding;  // T vertex -> G vertex when found
  std::uint64_t nodes = 0;
};

/// Vertex order used by the search: a maximum-degree vertex first, then
/// repeatedly the vertex with the most already placed neighbours (ties:
/// higher degree, then lower id).
std::vector<int> search_order(const Triangulation& t);

/// Is there a spanning copy of T in G? Backtracking with bit-parallel
/// candidate sets, degree filtering and forward checking. Needs n <= 64.
ContainmentResult contains_copy(const Graph& g, const Triangulation& t, std::uint64_t budget = 20'000'000);

/// True if `phi` is injective and carries every edge of T onto an edge of G.
bool embedding_valid(const Graph& g, const Triangulation& t, const std::vector<int>& phi);

struct Interval {
  double lo = 0;
  double hi = 1;
};

/// Wilson score interval for `successes` out of `trials` at normal quantile z.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

struct SimulationOptions {
  int workers = 1;
  std::uint64_t search_budget = 20'000'000;
  int max_redraws = 8;          // per trial, after an inconclusive search
  double z = 1.959963984540054;  // 95%
};

struct ContainmentEstimate {
  double p = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double p_hat = 0;
  Interval ci;
  std::uint64_t inconclusive = 0;  // searches that hit the budget (then re-drawn)
  std::uint64_t dropped = 0;       // trials still inconclusive after all re-draws
  bool unreliable = false;         // inconclusive searches above 1% of trials
};

/// Trial j (j = first_trial, first_trial + 1, ...) samples G(n, p) from
/// stream (seed, j); re-draw r of trial j uses stream (stream(seed, j), r).
/// Outcomes are merged in trial order, so the result does not depend on the
/// worker count.
ContainmentEstimate estimate_containment_prob(const Triangulation& t, double p, std::uint64_t trials,
                                              std::uint64_t seed, const SimulationOptions& opts,
                                              std::uint64_t first_trial = 0);

/// Per-trial outcomes at several p with shared uniforms (coupled sampling).
/// Row j holds trial j's outcomes at each p. Inconclusive searches are
/// reported as such and not re-drawn.
std::vector<std::vector<SearchOutcome>> coupled_outcomes(const Triangulation& t, const std::vector<double>& ps,
                                                         std::uint64_t trials, std::uint64_t seed,
                                                         const SimulationOptions& opts);

struct ThresholdOptions {
  std::uint64_t trials = 200;  // per probe, per round
  int max_rounds = 4;          // a probe whose interval contains 1/2 gets up to this many rounds
  double tol = 0.01;
  SimulationOptions sim;
};

struct ThresholdEstimate {
  int n = 0;
  int k = 0;
  double alpha = 0;
  std::string regime;
  double p_c = 0;
  Interval ci;
  std::string ci_method;
  double ci_level = 0.95;
  std::uint64_t trials_per_probe = 0;
  std::uint64_t trials_total = 0;
  std::uint64_t seed = 0;
  double tol = 0;
  Interval bracket;
  std::vector<ContainmentEstimate> probes;  // in probe order
  bool unreliable = false;
};

/// Bisection for the p where containment has probability 1/2.
///
/// The initial bracket is [n^(-1/2)/4, min(1, 4 n^(-1/3))]; it is widened
/// towards [1/n^2, 1] until the lower end is below 1/2 and the upper end at
/// or above it. All probes share the trial streams, so p -> p_hat is
/// monotone. The interval reported for p_c inverts the Wilson test: from the
/// largest p whose interval lies below 1/2 to the smallest p whose interval
/// lies above it, both ends located by further bisection to within tol.
ThresholdEstimate estimate_threshold(const Triangulation& t, std::uint64_t seed, const ThresholdOptions& opts);

struct LowerBoundCertificate {
  int n = 0;
  int k = 0;
  int m = 0;
  double alpha = 0;
  double p = 0;
  double log_exact_bound = 0;  // ln(n! 2^(4m) p^m)
  double log_union_bound = 0;  // ln(e n (n/e)^n (16 p)^m), the Stirling-relaxed form
  bool negative = false;       // log_exact_bound < 0
};

/// The first-moment bound at p = n^(-1/(3 - k/n)) / 12, in log space.
LowerBoundCertificate lower_bound_certificate(int n, int k);

enum class KRule { fixed, alpha, all };

struct SweepRow {
  int n = 0;
  int k = 0;
  std::optional<ThresholdEstimate> estimate;
  double theory_exponent = 0;  // -1/(3 - k/n)
  std::string error;
};

struct SweepFit {
  bool fitted = false;
  double slope = 0;
  double intercept = 0;
  std::vector<double> residuals;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  SweepFit fit;
};

/// k for n under a rule: fixed k, ceil(alpha n), or n.
int sweep_k(int n, KRule rule, int fixed_k, double alpha);

/// One threshold estimate per n on auto_construct(n, k); failures are
/// recorded per row. The fit of log p_c against log n needs 3 rows.
SweepResult sweep(const std::vector<int>& ns, KRule rule, int fixed_k, double alpha, std::uint64_t seed,
                  const ThresholdOptions& opts);

/// Least-squares line through (x, y).
SweepFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// CSV: n,k,alpha,p_hat_c,ci_lo,ci_hi,trials_total,theory_exponent,seed.
std::string sweep_csv(const SweepResult& r, std::uint64_t seed);

}  // namespace spantri
