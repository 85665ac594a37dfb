#include "doctest.h"
#include "spantri/constructors.hpp"
#include "spantri/errors.hpp"
#include "spantri/verifier.hpp"

using namespace spantri;

namespace {

VerifyOptions options(int max_edges, EnumerationMode mode, int workers = 1) {
  VerifyOptions o;
  o.max_edges = max_edges;
  o.mode = mode;
  o.workers = workers;
  return o;
}

std::uint64_t failures(const VerificationReport& r, const std::string& id) {
  const auto* c = r.find(id);
  REQUIRE(c != nullptr);
  return c->violations;
}

void check_witnesses(const VerificationReport& r) {
  for (const auto& w : r.violations) CHECK_MESSAGE(w.reverified, w.condition << " " << w.detail);
  CHECK(r.passed == (r.violations.empty() && !r.aborted));
}

}  // namespace

TEST_CASE("density defaults follow the regime") {
  const auto nested = default_density_params(construct_nested(14, 7));
  CHECK(nested.q == Rational(5, 2));
  CHECK(nested.eps == Rational(1, 9));
  CHECK(nested.delta == Rational(8, 9));
  const auto two = default_density_params(construct_two_ring(14, 10));
  CHECK(two.eps == Rational(2, 5));
  CHECK(two.delta == Rational(1, 2));
}

TEST_CASE("density condition on nested triangulations") {
  for (int n : {14, 16, 18}) {
    const auto t = construct_nested(n, 7);
    const auto r = check_density_condition(t, default_density_params(t), options(7, EnumerationMode::reduced));
    CHECK(r.passed);
    check_witnesses(r);
  }
  // A K4 is too dense for q < 12/5 with eps = 1/9: 4 < 6/q + 1 + 1/9.
  const auto k4 = construct_k4_sprinkle(17, 14);
  DensityParams p{Rational(2), Rational(1, 9), Rational(8, 9)};
  const auto r = check_density_condition(k4, p, options(6, EnumerationMode::direct));
  CHECK_FALSE(r.passed);
  check_witnesses(r);
  bool clique_witness = false;
  for (const auto& w : r.violations) clique_witness = clique_witness || (w.edges.size() == 6 && w.detail == "i=6 v=4");
  CHECK(clique_witness);
  CHECK_THROWS_AS(check_density_condition(k4, {Rational(0), Rational(0), Rational(0)}, options(3, EnumerationMode::direct)),
                  ParameterError);
}

TEST_CASE("reduced and direct enumeration agree") {
  struct Case {
    Triangulation t;
    std::string suite;
  };
  std::vector<Case> cases = {
      {construct_nested(14, 7), "density"},   {construct_nested(12, 4), "density"},
      {construct_two_ring(14, 10), "density"}, {construct_k4_sprinkle(17, 14), "density"},
      {construct_k4_sprinkle(17, 14), "k4"},   {construct_k4_sprinkle(12, 9), "k4"},
      {construct_k4_sprinkle(10, 8), "k4"},    {construct_wheel_chain(20, 18), "wheel"},
      {construct_wheel_chain(13, 12), "wheel"}, {construct_wheel(5), "wheel"},
      {construct_nested(12, 6), "k4"},        {construct_nested(12, 6), "wheel"},
  };
  for (const auto& c : cases) {
    for (int m : {4, 6}) {
      const auto direct = run_suite(c.t, c.suite, options(m, EnumerationMode::direct));
      const auto reduced = run_suite(c.t, c.suite, options(m, EnumerationMode::reduced));
      CAPTURE(c.suite);
      CAPTURE(c.t.n());
      CAPTURE(c.t.k());
      CAPTURE(m);
      CHECK(direct.passed == reduced.passed);
      for (const auto& cond : direct.conditions) {
        CAPTURE(cond.id);
        CHECK((cond.violations > 0) == (failures(reduced, cond.id) > 0));
      }
      check_witnesses(direct);
      check_witnesses(reduced);
    }
  }
  // Looser density parameters so that violations exist in both modes.
  const auto t = construct_nested(14, 7);
  for (const auto& p : {DensityParams{Rational(3, 2), Rational(1, 9), Rational(8, 9)},
                        DensityParams{Rational(5, 4), Rational(1, 2), Rational(1, 3)}}) {
    const auto direct = check_density_condition(t, p, options(6, EnumerationMode::direct));
    const auto reduced = check_density_condition(t, p, options(6, EnumerationMode::reduced));
    CHECK_FALSE(direct.passed);
    for (const auto& cond : direct.conditions)
      CHECK((cond.violations > 0) == (failures(reduced, cond.id) > 0));
    check_witnesses(reduced);
  }
}

TEST_CASE("k4 suite") {
  const auto t = construct_k4_sprinkle(17, 14);
  const auto r = check_k4_regime(t, options(10, EnumerationMode::reduced));
  CHECK(r.passed);
  CHECK(r.mode == "reduced");
  CHECK(r.find("clique_spacing")->checked > 0);
  CHECK(r.find("center_distance")->checked == 3);
  // Two 4-cliques sharing an edge force the direct path.
  const auto crowded = construct_k4_sprinkle(6, 4);
  const auto rc = check_k4_regime(crowded, options(5, EnumerationMode::reduced));
  CHECK(rc.mode == "direct");
  // With B(T) = 1 the union of two cliques minus their shared edge has 10 edges on 6 vertices.
  const auto hit = check_k4_regime(crowded, options(10, EnumerationMode::direct));
  CHECK(failures(hit, "two_degenerate") == 1);
  REQUIRE_FALSE(hit.violations.empty());
  CHECK(hit.violations.front().edges.size() == 10);
  check_witnesses(hit);
}

TEST_CASE("wheel suite") {
  const auto t = construct_wheel_chain(20, 18);
  const auto r = check_wheel_regime(t, options(10, EnumerationMode::reduced));
  CHECK(r.passed);
  CHECK(failures(r, "wheel_vertices") == 0);
  CHECK(failures(r, "hub_edges") == 0);
  CHECK(failures(r, "component_edges") == 0);
  // Rim plus one spoke: one component with t = 0 and only l + 1 edges.
  CHECK(failures(r, "components_t0_2l") > 0);
  CHECK(r.find("components_t0_2l")->informational);
  CHECK(r.violations.empty());
  CHECK_FALSE(r.diagnostics.empty());
  for (const auto& w : r.diagnostics) CHECK(w.reverified);
  // Not a wheel chain: falls back to direct enumeration.
  const auto other = check_wheel_regime(construct_nested(12, 6), options(4, EnumerationMode::reduced));
  CHECK(other.mode == "direct");
}

TEST_CASE("cycle suites") {
  const auto nested = check_isoperimetric_nested(construct_nested(14, 7), options(0, EnumerationMode::reduced));
  CHECK(nested.passed);
  CHECK(nested.find("cycle_ratio")->checked > 0);
  CHECK(nested.find("arc_ratio")->checked > 0);
  const auto small_k = check_isoperimetric_nested(construct_nested(14, 4), options(0, EnumerationMode::reduced));
  CHECK(small_k.passed);
  const auto two = check_isoperimetric_two_ring(construct_two_ring(11, 9), options(0, EnumerationMode::reduced));
  CHECK(two.passed);
  CHECK(two.find("interior_ratio")->checked > 0);
  // Arcs of length 1..s at every start, the full cycle once.
  CHECK(two.find("arc_expansion")->checked == 3);
  // The rim of W_4 has length k, outside the l <= k - 1 range.
  const auto wheel = check_isoperimetric_two_ring(construct_wheel(4), options(0, EnumerationMode::reduced));
  CHECK(wheel.find("interior_ratio")->checked == 0);
  CHECK(wheel.passed);
}

TEST_CASE("passing at M implies passing below M") {
  const auto t = construct_k4_sprinkle(17, 14);
  std::uint64_t last = 0;
  for (int m = 1; m <= 9; ++m) {
    const auto r = check_k4_regime(t, options(m, EnumerationMode::reduced));
    CHECK(r.passed);
    CHECK(r.fragments_checked >= last);
    last = r.fragments_checked;
  }
}

TEST_CASE("reports do not depend on the worker count") {
  const auto t = construct_nested(16, 7);
  DensityParams loose{Rational(3, 2), Rational(1, 9), Rational(8, 9)};
  const auto a = check_density_condition(t, loose, options(6, EnumerationMode::reduced, 1));
  const auto b = check_density_condition(t, loose, options(6, EnumerationMode::reduced, 3));
  REQUIRE(a.violations.size() == b.violations.size());
  for (std::size_t j = 0; j < a.violations.size(); ++j) CHECK(a.violations[j].edges == b.violations[j].edges);
  CHECK(a.fragments_checked == b.fragments_checked);
}

TEST_CASE("budget abort is never a pass") {
  VerifyOptions o = options(8, EnumerationMode::direct);
  o.budget = 100;
  const auto r = check_k4_regime(construct_k4_sprinkle(17, 14), o);
  CHECK(r.aborted);
  CHECK_FALSE(r.passed);
  CHECK_THROWS_AS(run_suite(construct_nested(14, 7), "bogus", o), ParameterError);
}
