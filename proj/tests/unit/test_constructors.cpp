#include <algorithm>
#include <set>

#include "doctest.h"
#include "spantri/constructors.hpp"
#include "spantri/errors.hpp"

using namespace spantri;

namespace {

std::set<std::pair<int, int>> chord_set(const std::vector<Edge>& es) {
  std::set<std::pair<int, int>> out;
  for (auto e : es) out.insert({e.u, e.v});
  return out;
}

}  // namespace

TEST_CASE("even_edge_select") {
  CHECK(even_edge_select(2, 5) == std::vector<int>{1, 4});
  CHECK(even_edge_select(3, 6) == std::vector<int>{1, 3, 5});
  CHECK(even_edge_select(0, 4).empty());
  CHECK_THROWS_AS(even_edge_select(4, 4), ParameterError);
  // Arc property: any L consecutive edges carry at most L*a/b + 1 picks.
  for (int b = 2; b <= 30; ++b) {
    for (int a = 0; a < b; ++a) {
      std::vector<int> mark(b, 0);
      for (int e : even_edge_select(a, b)) mark.at(e) = 1;
      for (int start = 0; start < b; ++start) {
        int count = 0;
        for (int len = 1; len <= b; ++len) {
          count += mark[(start + len - 1) % b];
          CHECK(count * b <= len * a + b);
        }
      }
    }
  }
}

TEST_CASE("comb of a pentagon") {
  std::vector<int> c{0, 1, 2, 3, 4};
  CHECK(chord_set(comb_triangulate(c)) == std::set<std::pair<int, int>>{{0, 3}, {1, 3}});
  CHECK(comb_faces(c).size() == 3);
}

TEST_CASE("comb degrees along the zigzag") {
  for (int len = 4; len <= 12; ++len) {
    std::vector<int> c(len);
    for (int i = 0; i < len; ++i) c[i] = i;
    auto zz = comb_zigzag(c);
    auto ch = comb_triangulate(c);
    CHECK(static_cast<int>(ch.size()) == len - 3);
    std::vector<int> cnt(len, 0);
    for (auto e : ch) { ++cnt[e.u]; ++cnt[e.v]; }
    CHECK(cnt[zz.front()] == 0);
    CHECK(cnt[zz.back()] == 0);
    CHECK(cnt[zz[1]] == 1);
    CHECK(cnt[zz[len - 2]] == 1);
    for (int i = 2; i + 2 < len; ++i) CHECK(cnt[zz[i]] == 2);
  }
}

TEST_CASE("anchor instances") {
  auto t = construct_nested(14, 7);
  CHECK(t.m() == 32);
  CHECK(faces(t).size() == 20);  // 19 triangles and the outer 7-gon
  CHECK(construct_nested(14, 4).m() == 35);
  CHECK(construct_two_ring(11, 9).m() == 21);
  CHECK(construct_two_ring(14, 10).m() == 29);
  auto k4 = construct_k4_sprinkle(17, 14);
  CHECK(k4.m() == 34);
  CHECK(k4_sprinkle_layout(17, 14).border == 4);
  CHECK(wheel_chain_length(20, 18) == 5);
  CHECK(wheel_chain_length(50, 46) == 6);
}

TEST_CASE("every regime validates for n <= 60") {
  int built = 0;
  for (int n = 4; n <= 60; ++n) {
    for (int k = 3; k <= n; ++k) {
      const Regime r = auto_regime(n, k);
      const auto t = auto_construct(n, k);
      const auto rep = validate(t);
      INFO("n=", n, " k=", k, " regime=", regime_name(r));
      for (const auto& c : rep.checks) {
        INFO(c.name, ": ", c.witness);
        CHECK(c.passed);
      }
      CHECK(t.n() == n);
      CHECK(t.k() == k);
      CHECK(t.m() == 3 * n - 3 - k);
      switch (r) {
        case Regime::nested: CHECK(t.max_degree() <= 7); break;
        case Regime::k4_sprinkle: CHECK(t.max_degree() <= 5); break;
        case Regime::two_ring: {
          const int s = n - k;
          CHECK(t.max_degree() <= 5 + (k + s - 1) / s);
          break;
        }
        default: break;
      }
      ++built;
    }
  }
  CHECK(built > 1500);
}

TEST_CASE("explicit regimes validate wherever they apply") {
  for (int n = 4; n <= 40; ++n) {
    for (int k = 3; k < n; ++k) {
      INFO("n=", n, " k=", k);
      if (n < 2 * k) CHECK(validate(construct_two_ring(n, k)).passed);
      if (n - k <= k - 2) CHECK(validate(construct_k4_sprinkle(n, k)).passed);
      if (wheel_chain_feasible(n, k)) {
        const auto t = construct_wheel_chain(n, k);
        CHECK(validate(t).passed);
        const int ell = wheel_chain_length(n, k);
        for (int h : t.internal()) CHECK(t.degree(h) == ell);
      }
    }
  }
}

TEST_CASE("wheel chain infeasibility names a side") {
  // s = 10 internal vertices with only 3 boundary vertices cannot form wheels.
  try {
    wheel_chain_length(13, 3);
    FAIL("expected ConstructionError");
  } catch (const ConstructionError& e) {
    CHECK(std::string(e.what()).find("n + l") != std::string::npos);
  }
}

TEST_CASE("nested layout ids") {
  auto lay = nested_layout(17, 7);
  CHECK(lay.c == 2);
  CHECK(lay.r == 3);
  CHECK(lay.inner_cycle.size() == 10);
  for (int v = 14; v < 17; ++v) CHECK(lay.residual[v]);
  CHECK(validate(construct_nested(17, 7)).passed);
}

TEST_CASE("bad parameters") {
  CHECK_THROWS_AS(auto_construct(5, 2), ParameterError);
  CHECK_THROWS_AS(auto_construct(5, 6), ParameterError);
  CHECK_THROWS_AS(construct_nested(10, 6), ParameterError);
  CHECK_THROWS_AS(construct(5, 4, Regime::custom), ParameterError);
}
