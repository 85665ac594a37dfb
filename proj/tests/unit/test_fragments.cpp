#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "spantri/constructors.hpp"
#include "spantri/errors.hpp"
#include "spantri/fragments.hpp"

using namespace spantri;

namespace {

// Brute force over all edge masks of a small triangulation.
struct MaskOracle {
  const Triangulation& t;

  std::vector<Edge> pairs(std::uint64_t mask) const {
    std::vector<Edge> out;
    for (int e = 0; e < t.m(); ++e)
      if (mask >> e & 1) out.push_back(t.edges()[e]);
    return out;
  }

  std::set<int> vertices(std::uint64_t mask) const {
    std::set<int> out;
    for (const auto& e : pairs(mask)) {
      out.insert(e.u);
      out.insert(e.v);
    }
    return out;
  }

  bool connected(std::uint64_t mask) const {
    const auto vs = vertices(mask);
    if (vs.empty()) return false;
    std::set<int> seen{*vs.begin()};
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& e : pairs(mask)) {
        if (seen.count(e.u) != seen.count(e.v)) {
          seen.insert(e.u);
          seen.insert(e.v);
          grew = true;
        }
      }
    }
    return seen.size() == vs.size();
  }

  bool is_cycle(std::uint64_t mask) const {
    if (!connected(mask)) return false;
    std::map<int, int> deg;
    for (const auto& e : pairs(mask)) {
      ++deg[e.u];
      ++deg[e.v];
    }
    for (const auto& [v, d] : deg)
      if (d != 2) return false;
    return true;
  }
};

Triangulation wheel4() { return construct_wheel(4); }

}  // namespace

TEST_CASE("fragment parameters on small pieces") {
  const auto k4 = construct_k4_sprinkle(17, 14);
  const auto layout = k4_sprinkle_layout(17, 14);
  const int center = layout.centers.at(0);
  std::vector<Edge> clique;
  std::vector<int> q{center};
  for (int x : k4.rotation(center)) q.push_back(x);
  REQUIRE(q.size() == 4);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) clique.push_back({std::min(q[a], q[b]), std::max(q[a], q[b])});
  const Fragment f = fragment_params(k4, edge_ids(k4, clique));
  CHECK(f == Fragment{6, 4, 1, 1, 1, 1, f.t});
  CHECK(f == fragment_params_reference(k4, clique));

  const auto w = construct_wheel_chain(20, 18);
  const int hub = w.internal().at(0);
  const auto& rim = w.rotation(hub);
  const int ell = static_cast<int>(rim.size());
  CHECK(ell == 5);
  std::vector<Edge> wheel;
  for (int j = 0; j < ell; ++j) {
    wheel.push_back({std::min(hub, rim[j]), std::max(hub, rim[j])});
    const int a = rim[j], b = rim[(j + 1) % ell];
    wheel.push_back({std::min(a, b), std::max(a, b)});
  }
  const Fragment full = fragment_params(w, edge_ids(w, wheel));
  CHECK(full.i == 2 * ell);
  CHECK(full.v == ell + 1);
  CHECK(full.c == 1);
  CHECK(full.c_S == 1);
  CHECK(full.t == 0);
  // Dropping one rim edge leaves the spokes' ends in one arc: t = 1.
  wheel.pop_back();
  CHECK(fragment_params(w, edge_ids(w, wheel)).t == 1);

  CHECK_THROWS_AS(edge_ids(w, {{0, 0}}), ParameterError);
}

TEST_CASE("fragment_params matches the reference on every subset of small triangulations") {
  for (const auto& t : {construct_k4_sprinkle(4, 3), wheel4(), construct_nested(6, 3)}) {
    MaskOracle oracle{t};
    FragmentCalculator calc(t);
    // t <= i needs internal vertices to be pairwise non-adjacent (the octahedron's are not).
    bool independent = true;
    for (int a : t.internal())
      for (int b : t.internal()) independent = independent && !t.has_edge(a, b);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << t.m()); ++mask) {
      std::vector<int> ids;
      for (int e = 0; e < t.m(); ++e)
        if (mask >> e & 1) ids.push_back(e);
      const Fragment a = calc(ids);
      const Fragment b = fragment_params_reference(t, oracle.pairs(mask));
      REQUIRE(a == b);
      CHECK(a.c_S <= a.c);
      CHECK(a.g >= a.c_S);
      if (independent) CHECK(a.t <= a.i);
      CHECK(a.i >= a.v - a.c);
    }
  }
}

TEST_CASE("connected subgraph enumeration is exact") {
  for (const auto& t : {construct_k4_sprinkle(4, 3), wheel4(), construct_nested(6, 3)}) {
    MaskOracle oracle{t};
    const int full = t.m();
    // Oracle counts: per size overall and per (root, size).
    std::vector<std::uint64_t> per_size(full + 1, 0);
    std::vector<std::vector<std::uint64_t>> rooted(t.n(), std::vector<std::uint64_t>(full + 1, 0));
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << full); ++mask) {
      if (!oracle.connected(mask)) continue;
      const int i = __builtin_popcountll(mask);
      ++per_size[i];
      for (int v : oracle.vertices(mask)) ++rooted[v][i];
    }
    std::vector<std::uint64_t> by_min(full + 1, 0);
    std::set<std::vector<int>> seen;
    for (int root = 0; root < t.n(); ++root) {
      enumerate_connected_subgraphs_min_root(t, root, full, 1'000'000, [&](const SubgraphView& s) {
        ++by_min[s.edges.size()];
        auto key = s.edges;
        std::sort(key.begin(), key.end());
        CHECK(seen.insert(key).second);
        CHECK(*std::min_element(s.vertices.begin(), s.vertices.end()) == root);
      });
      const auto stats = enumerate_connected_subgraphs(t, root, full, 1'000'000, [](const SubgraphView&) {});
      for (int i = 1; i <= full; ++i) CHECK(stats.per_size[i] == rooted[root][i]);
      CHECK(stats.per_size[1] == static_cast<std::uint64_t>(t.degree(root)));
    }
    CHECK(by_min == per_size);
    const auto counts = rooted_subgraph_counts(t, full, 1'000'000, 2);
    for (int root = 0; root < t.n(); ++root)
      for (int i = 1; i <= full; ++i) CHECK(counts.counts[root][i] == rooted[root][i]);
  }
}

TEST_CASE("connected vertex sets are exact") {
  const auto t = construct_nested(9, 4);
  std::map<int, int> oracle_sizes, got_sizes;
  std::map<std::vector<int>, int> oracle_edges;
  for (int mask = 1; mask < (1 << t.n()); ++mask) {
    std::vector<int> vs;
    for (int x = 0; x < t.n(); ++x)
      if (mask >> x & 1) vs.push_back(x);
    std::set<int> seen{vs[0]};
    bool grew = true;
    while (grew) {
      grew = false;
      for (int a : vs)
        for (int b : vs)
          if (seen.count(a) && !seen.count(b) && t.has_edge(a, b)) {
            seen.insert(b);
            grew = true;
          }
    }
    if (seen.size() != vs.size() || vs.size() > 6) continue;
    int e = 0;
    for (int a : vs)
      for (int b : vs) e += (a < b && t.has_edge(a, b)) ? 1 : 0;
    oracle_edges[vs] = e;
  }
  std::map<std::vector<int>, int> got;
  for (int root = 0; root < t.n(); ++root) {
    enumerate_connected_vertex_sets_min_root(t, root, 6, 1'000'000, [&](const std::vector<int>& u, int e) {
      auto key = u;
      std::sort(key.begin(), key.end());
      CHECK(got.emplace(key, e).second);
    });
  }
  CHECK(got == oracle_edges);
}

TEST_CASE("rooted counts on K4") {
  const auto k4 = construct_k4_sprinkle(4, 3);
  const auto counts = rooted_subgraph_counts(k4, 6, 1'000'000, 1);
  for (int root = 0; root < 4; ++root) {
    CHECK(counts.counts[root][1] == 3);
    for (int i = 1; i <= 6; ++i) CHECK(compare_below_e_power(counts.counts[root][i], 3, i) == Comparison::below);
  }
}

TEST_CASE("e-power comparison uses both brackets") {
  CHECK(compare_below_e_power(2, 1, 1) == Comparison::below);
  CHECK(compare_below_e_power(3, 1, 1) == Comparison::not_below);
  CHECK(compare_below_e_power(7, 1, 2) == Comparison::below);       // e^2 = 7.389
  CHECK(compare_below_e_power(8, 1, 2) == Comparison::not_below);
  CHECK(compare_below_e_power(22026, 1, 10) == Comparison::below);
  CHECK(compare_below_e_power(22027, 1, 10) == Comparison::not_below);
}

TEST_CASE("cycle enumeration matches brute force and embedding interiors") {
  for (const auto& t : {construct_k4_sprinkle(4, 3), wheel4(), construct_nested(6, 3)}) {
    MaskOracle oracle{t};
    std::map<int, int> by_len;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << t.m()); ++mask)
      if (oracle.is_cycle(mask)) ++by_len[__builtin_popcountll(mask)];
    std::map<int, int> got;
    enumerate_simple_cycles(t, t.n(), 1'000'000, [&](const CycleInfo& c) {
      ++got[c.length];
      CHECK(c.cycle.front() == *std::min_element(c.cycle.begin(), c.cycle.end()));
      CHECK(c.v_inside == c.length + c.t_inside);
    });
    CHECK(got == by_len);
  }
  // Octahedron: 8 triangles, 15 four-cycles, 24 five-cycles, 16 six-cycles.
  std::map<int, int> oct;
  enumerate_simple_cycles(construct_nested(6, 3), 6, 1'000'000, [&](const CycleInfo& c) { ++oct[c.length]; });
  CHECK(oct == std::map<int, int>{{3, 8}, {4, 15}, {5, 24}, {6, 16}});

  const auto w = wheel4();
  bool rim_seen = false;
  enumerate_simple_cycles(w, 4, 1'000'000, [&](const CycleInfo& c) {
    if (c.length == 3) {
      CHECK(c.t_inside == 0);
      CHECK(c.v_inside == 3);
    }
    if (c.length == 4 && std::find(c.cycle.begin(), c.cycle.end(), 4) == c.cycle.end()) {
      rim_seen = true;
      CHECK(c.t_inside == 1);
      CHECK(c.v_inside == 5);
    }
  });
  CHECK(rim_seen);

  // C_2 of T(14,7) is the inner ring: nothing strictly inside it.
  const auto nested = construct_nested(14, 7);
  const auto lay = nested_layout(14, 7);
  std::vector<int> ring;
  for (int x = 0; x < 14; ++x)
    if (!lay.residual[x] && lay.ring[x] == 1) ring.push_back(x);
  std::sort(ring.begin(), ring.end(), [&](int a, int b) { return lay.angle[a] < lay.angle[b]; });
  CycleInterior interior(nested);
  CycleInfo c2;
  c2.cycle = ring;
  interior.fill(c2);
  CHECK(c2.length == 7);
  CHECK(c2.v_inside == 7);
  CHECK(c2.t_inside == 0);
}

TEST_CASE("subset counts by components and t") {
  const auto w = construct_wheel_chain(20, 18);
  std::vector<int> all(w.m());
  for (int e = 0; e < w.m(); ++e) all[e] = e;
  const auto rows = count_bound_check_subgraphs(w, all, 1, 5, 1'000'000);
  BigInt total = 0;
  for (const auto& r : rows) {
    CHECK(r.c == 1);
    CHECK(r.t <= 1);
    CHECK(r.holds);
    total += r.count;
  }
  CHECK(total == w.m());

  // A single wheel: exactly one 2l-edge subset is connected with t = 0.
  const int hub = w.internal().at(0);
  const auto& rim = w.rotation(hub);
  std::vector<int> wheel;
  for (std::size_t j = 0; j < rim.size(); ++j) {
    wheel.push_back(w.edge_id(hub, rim[j]));
    wheel.push_back(w.edge_id(rim[j], rim[(j + 1) % rim.size()]));
  }
  const auto full = count_bound_check_subgraphs(w, wheel, 10, 5, 1'000'000);
  REQUIRE(full.size() == 1);
  CHECK(full[0].c == 1);
  CHECK(full[0].t == 0);
  CHECK(full[0].count == 1);
  CHECK_THROWS_AS(count_bound_check_subgraphs(w, all, 8, 5, 1000), BudgetExceeded);
}

TEST_CASE("histogram csv") {
  const auto t = construct_k4_sprinkle(4, 3);
  bool aborted = true;
  const auto hist = fragment_histogram(t, 6, 1'000'000, 1, &aborted);
  CHECK_FALSE(aborted);
  std::uint64_t total = 0;
  for (const auto& [f, n] : hist) total += n;
  CHECK(total == 60);  // 6 + 12 + 20 + 15 + 6 + 1 connected edge subsets of K4
  std::ostringstream os;
  write_histogram_csv(os, hist);
  CHECK(os.str().rfind("i,v,c,c_S,g,r,t,count\n", 0) == 0);
  CHECK(os.str().find("6,4,1,1,1,1,0,1\n") != std::string::npos);
}

TEST_CASE("enumeration budget aborts") {
  const auto t = construct_nested(14, 7);
  const auto stats = enumerate_connected_subgraphs(t, 0, 6, 50, [](const SubgraphView&) {});
  CHECK(stats.aborted);
}
