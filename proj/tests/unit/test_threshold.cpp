#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "spantri/constructors.hpp"
#include "spantri/errors.hpp"
#include "spantri/threshold.hpp"

using namespace spantri;

namespace {

bool contains_by_permutations(const Graph& g, const Triangulation& t) {
  std::vector<int> perm(t.n());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (const auto& e : t.edges()) {
      if (!g.has_edge(perm[e.u], perm[e.v])) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

Graph graph_of(const Triangulation& t, const std::vector<int>& relabel) {
  Graph g(t.n());
  for (const auto& e : t.edges()) g.add_edge(relabel[e.u], relabel[e.v]);
  return g;
}

}  // namespace

TEST_CASE("G(n, p) sampling") {
  CHECK(sample_gnp(20, 0.0, 1).edge_count() == 0);
  CHECK(sample_gnp(20, 1.0, 1).edge_count() == 190);
  const auto big = sample_gnp(1000, 0.01, 7);
  const double mean = 499500 * 0.01, sd = std::sqrt(499500 * 0.01 * 0.99);
  CHECK(std::abs(static_cast<double>(big.edge_count()) - mean) < 4 * sd);
  CHECK_THROWS_AS(sample_gnp(5, 1.5, 1), ParameterError);
  CHECK_THROWS_AS(sample_gnp(5, -0.1, 1), ParameterError);

  // Same seed: same graph; larger p: a supergraph.
  const auto a = sample_gnp(30, 0.3, 99), b = sample_gnp(30, 0.3, 99), c = sample_gnp(30, 0.6, 99);
  bool same = true, nested = true;
  for (int u = 0; u < 30; ++u)
    for (int v = u + 1; v < 30; ++v) {
      same = same && a.has_edge(u, v) == b.has_edge(u, v);
      nested = nested && (!a.has_edge(u, v) || c.has_edge(u, v));
    }
  CHECK(same);
  CHECK(nested);
  CHECK(stream_seed(5, 0) != stream_seed(5, 1));
  CHECK(stream_seed(5, 0) != stream_seed(6, 0));
}

TEST_CASE("containment search") {
  const auto t = construct_nested(9, 4);
  Graph complete(9);
  for (int u = 0; u < 9; ++u)
    for (int v = u + 1; v < 9; ++v) complete.add_edge(u, v);
  auto r = contains_copy(complete, t);
  CHECK(r.outcome == SearchOutcome::found);
  CHECK(embedding_valid(complete, t, r.embedding));
  CHECK(contains_copy(Graph(9), t).outcome == SearchOutcome::absent);

  // T itself under a relabelling.
  std::vector<int> relabel(9);
  std::iota(relabel.begin(), relabel.end(), 0);
  std::reverse(relabel.begin(), relabel.end());
  std::swap(relabel[2], relabel[5]);
  const auto copy = graph_of(t, relabel);
  r = contains_copy(copy, t);
  REQUIRE(r.outcome == SearchOutcome::found);
  CHECK(embedding_valid(copy, t, r.embedding));
  // The identity labelling.
  const auto self = graph_of(t, std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(contains_copy(self, t).outcome == SearchOutcome::found);

  CHECK_THROWS_AS(contains_copy(Graph(8), t), ParameterError);
  const auto order = search_order(t);
  CHECK(t.degree(order[0]) == t.max_degree());
}

TEST_CASE("containment agrees with a permutation oracle") {
  int found = 0, absent = 0;
  for (const auto& t : {construct_nested(7, 3), construct_comb(7), construct_k4_sprinkle(7, 5), construct_wheel(6),
                        construct_two_ring(7, 5)}) {
    for (std::uint64_t s = 0; s < 40; ++s) {
      const auto g = sample_gnp(7, 0.55 + 0.01 * static_cast<double>(s % 10), stream_seed(11, s));
      const auto r = contains_copy(g, t);
      CHECK((r.outcome == SearchOutcome::found) == contains_by_permutations(g, t));
      if (r.outcome == SearchOutcome::found) {
        CHECK(embedding_valid(g, t, r.embedding));
        ++found;
      } else {
        ++absent;
      }
    }
  }
  CHECK(found > 20);
  CHECK(absent > 20);
}

TEST_CASE("budget-capped search is inconclusive, not absent") {
  const auto t = auto_construct(20, 10);
  const auto g = sample_gnp(20, 0.6, 3);
  const auto r = contains_copy(g, t, 5);
  CHECK(r.outcome == SearchOutcome::inconclusive);
  CHECK(r.nodes > 5);
}

TEST_CASE("Wilson interval") {
  const auto half = wilson_interval(5, 10);
  CHECK(half.lo == doctest::Approx(0.2366).epsilon(1e-3));
  CHECK(half.hi == doctest::Approx(0.7634).epsilon(1e-3));
  const auto none = wilson_interval(0, 10);
  CHECK(none.lo == 0.0);
  CHECK(none.hi == doctest::Approx(0.2775).epsilon(1e-3));
  const auto all = wilson_interval(10, 10);
  CHECK(all.hi == 1.0);
  CHECK(all.lo == doctest::Approx(0.7225).epsilon(1e-3));
}

TEST_CASE("containment estimates") {
  const auto t = auto_construct(10, 5);
  SimulationOptions o;
  CHECK(estimate_containment_prob(t, 1.0, 20, 1, o).p_hat == 1.0);
  CHECK(estimate_containment_prob(t, 0.0, 20, 1, o).p_hat == 0.0);
  const auto lb = lower_bound_certificate(10, 5);
  const auto low = estimate_containment_prob(t, lb.p, 500, 1, o);
  CHECK(low.p_hat < 0.05);
  CHECK(low.ci.hi < 0.5);
  CHECK_THROWS_AS(estimate_containment_prob(t, 0.5, 0, 1, o), ParameterError);

  SimulationOptions many = o;
  many.workers = 3;
  const auto a = estimate_containment_prob(t, 0.6, 120, 42, o);
  const auto b = estimate_containment_prob(t, 0.6, 120, 42, many);
  CHECK(a.successes == b.successes);
  CHECK(a.trials == b.trials);
}

TEST_CASE("coupled outcomes are monotone in p") {
  const auto t = auto_construct(10, 6);
  std::vector<double> ps;
  for (int j = 0; j < 10; ++j) ps.push_back(0.4 + 0.05 * j);
  const auto rows = coupled_outcomes(t, ps, 60, 8, SimulationOptions{});
  for (const auto& row : rows)
    for (std::size_t j = 1; j < row.size(); ++j)
      CHECK((row[j - 1] != SearchOutcome::found || row[j] == SearchOutcome::found));
}

TEST_CASE("threshold estimate") {
  const auto t = auto_construct(8, 8);
  ThresholdOptions o;
  o.trials = 100;
  o.tol = 0.02;
  const auto a = estimate_threshold(t, 5, o);
  CHECK(a.p_c > 0.0);
  CHECK(a.p_c < 1.0);
  CHECK(a.bracket.hi - a.bracket.lo < o.tol);
  CHECK(a.ci.lo <= a.bracket.lo);
  CHECK(a.ci.hi >= a.bracket.hi);
  CHECK(a.trials_total >= a.probes.size() * o.trials);
  // Same seed, any worker count: identical probe history.
  o.sim.workers = 4;
  const auto b = estimate_threshold(t, 5, o);
  REQUIRE(a.probes.size() == b.probes.size());
  for (std::size_t j = 0; j < a.probes.size(); ++j) {
    CHECK(a.probes[j].p == b.probes[j].p);
    CHECK(a.probes[j].successes == b.probes[j].successes);
  }
  o.tol = 0;
  CHECK_THROWS_AS(estimate_threshold(t, 5, o), ParameterError);
}

TEST_CASE("lower-bound certificate") {
  const auto c = lower_bound_certificate(100, 50);
  CHECK(c.p == doctest::Approx(0.013207).epsilon(1e-4));
  CHECK(std::abs(c.p - 0.013207) < 1e-6);
  CHECK(c.m == 247);
  CHECK(c.negative);
  CHECK(c.log_union_bound < 0);
  CHECK(c.log_exact_bound <= c.log_union_bound);
  // alpha = 1: p = n^(-1/2) / 12.
  CHECK(lower_bound_certificate(64, 64).p == doctest::Approx(1.0 / 96));
  // Linear decay for large n.
  const auto big = lower_bound_certificate(1'000'000, 1000);
  const auto bigger = lower_bound_certificate(2'000'000, 1000);
  CHECK(big.negative);
  CHECK(bigger.log_union_bound / big.log_union_bound == doctest::Approx(2.0).epsilon(0.02));
  CHECK_THROWS_AS(lower_bound_certificate(10, 2), ParameterError);
  CHECK_THROWS_AS(lower_bound_certificate(10, 11), ParameterError);
}

TEST_CASE("sweep plumbing") {
  CHECK_THROWS_AS(sweep({}, KRule::all, 0, 0, 1, ThresholdOptions{}), ParameterError);
  CHECK(sweep_k(10, KRule::alpha, 0, 0.5) == 5);
  CHECK(sweep_k(10, KRule::alpha, 0, 0.01) == 3);
  CHECK(sweep_k(10, KRule::fixed, 4, 0) == 4);
  CHECK(sweep_k(10, KRule::all, 0, 0) == 10);

  ThresholdOptions o;
  o.trials = 40;
  o.tol = 0.05;
  const auto single = sweep({7}, KRule::all, 0, 0, 3, o);
  CHECK(single.rows.size() == 1);
  CHECK_FALSE(single.fit.fitted);
  // A bad row is recorded and the sweep continues.
  const auto mixed = sweep({7, 2}, KRule::fixed, 3, 0, 3, o);
  CHECK(mixed.rows[0].estimate.has_value());
  CHECK_FALSE(mixed.rows[1].error.empty());
  const auto csv = sweep_csv(mixed, 3);
  CHECK(csv.rfind("n,k,alpha,p_hat_c,ci_lo,ci_hi,trials_total,theory_exponent,seed\n", 0) == 0);

  const auto fit = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(fit.fitted);
  CHECK(fit.slope == doctest::Approx(2));
  CHECK(fit.intercept == doctest::Approx(1));
}
