#include "spantri/constructors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>

#include "spantri/errors.hpp"

namespace spantri {

namespace {

std::string nk(int n, int k) {
  return "(n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")";
}

int ceil_sqrt(int n) {
  int r = static_cast<int>(std::sqrt(static_cast<double>(n)));
  while (r * r < n) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= n) --r;
  return r;
}

}  // namespace

ConstructionParams ConstructionParams::of(int n, int k) {
  ConstructionParams p;
  p.n = n;
  p.k = k;
  p.s = n - k;
  p.alpha = Rational(k, n);
  p.c = n / k;
  p.r = n % k;
  p.border = p.s > 0 ? (k - 2) / p.s : 0;
  return p;
}

std::vector<int> even_edge_select(int a, int b) {
  if (a < 0 || b <= a) {
    throw ParameterError("even_edge_select needs 0 <= a < b, got a=" + std::to_string(a) +
                         ", b=" + std::to_string(b));
  }
  std::vector<int> picked;
  picked.reserve(a);
  for (long i = 1; i <= a; ++i) picked.push_back(static_cast<int>(i * b / a) - 1);
  return picked;
}

std::vector<int> comb_zigzag(const std::vector<int>& cycle) {
  const int len = static_cast<int>(cycle.size());
  if (len < 3) throw ParameterError("comb needs a cycle of length >= 3");
  const auto start = std::min_element(cycle.begin(), cycle.end()) - cycle.begin();
  auto at = [&](int one_based) { return cycle[(start + one_based - 1) % len]; };
  std::vector<int> order{at(len)};
  int lo = 1, hi = len - 1;
  bool take_lo = true;
  while (lo <= hi) {
    order.push_back(take_lo ? at(lo++) : at(hi--));
    take_lo = !take_lo;
  }
  return order;
}

std::vector<std::array<int, 3>> square_path_faces(const std::vector<int>& path) {
  std::vector<std::array<int, 3>> out;
  for (std::size_t i = 0; i + 2 < path.size(); ++i) out.push_back({path[i], path[i + 1], path[i + 2]});
  return out;
}

std::vector<std::array<int, 3>> comb_faces(const std::vector<int>& cycle) {
  return square_path_faces(comb_zigzag(cycle));
}

std::vector<Edge> comb_triangulate(const std::vector<int>& cycle) {
  const auto zz = comb_zigzag(cycle);
  std::vector<Edge> chords;
  // zz[0]zz[1] is a polygon edge; the rest of the zigzag path is chords.
  for (std::size_t i = 1; i + 2 < zz.size(); ++i) {
    chords.push_back({std::min(zz[i], zz[i + 1]), std::max(zz[i], zz[i + 1])});
  }
  return chords;
}

NestedLayout nested_layout(int n, int k) {
  if (k < 3 || n < 2 * k) {
    throw ParameterError("nested construction needs k >= 3 and n >= 2k, got " + nk(n, k));
  }
  NestedLayout lay;
  lay.c = n / k;
  lay.r = n % k;
  const int c = lay.c, r = lay.r;
  lay.ring.assign(n, 0);
  lay.angle.assign(n, 0);
  lay.residual.assign(n, 0);
  auto id = [k](int ring, int angle) { return ring * k + ((angle % k) + k) % k; };
  for (int i = 0; i < c; ++i) {
    for (int j = 0; j < k; ++j) {
      lay.ring[id(i, j)] = i;
      lay.angle[id(i, j)] = j;
    }
  }

  // Lattice strips between consecutive rings.
  for (int i = 0; i + 1 < c; ++i) {
    for (int j = 0; j < k; ++j) {
      const int a = id(i, j), a_next = id(i, j + 1);
      const int b = id(i + 1, j), b_next = id(i + 1, j + 1);
      lay.triangles.push_back({a, a_next, b_next});
      if (i + 2 == c) continue;  // the innermost strip's (a, b, b_next) may be subdivided below
      lay.triangles.push_back({a, b, b_next});
    }
  }

  std::vector<int> distinguished(k, -1);
  {
    int next_id = c * k;
    for (int e : even_edge_select(r, k)) {
      distinguished[e] = next_id;
      lay.ring[next_id] = c - 1;
      lay.angle[next_id] = e;
      lay.residual[next_id] = 1;
      ++next_id;
    }
  }
  for (int j = 0; j < k; ++j) {
    const int a = id(c - 2, j), b = id(c - 1, j), b_next = id(c - 1, j + 1);
    const int u = distinguished[j];
    if (u < 0) {
      lay.triangles.push_back({a, b, b_next});
    } else {
      lay.triangles.push_back({a, b, u});
      lay.triangles.push_back({a, u, b_next});
    }
    lay.inner_cycle.push_back(b);
    if (u >= 0) lay.inner_cycle.push_back(u);
  }
  for (const auto& f : comb_faces(lay.inner_cycle)) lay.triangles.push_back(f);
  lay.inner_chords = comb_triangulate(lay.inner_cycle);
  return lay;
}

Triangulation construct_nested(int n, int k) {
  const NestedLayout lay = nested_layout(n, k);
  std::vector<int> boundary(k);
  for (int j = 0; j < k; ++j) boundary[j] = j;
  return build_from_triangles(n, boundary, lay.triangles, Regime::nested);
}

TwoRingLayout two_ring_layout(int n, int k) {
  if (k < 3 || n <= k || n >= 2 * k) {
    throw ParameterError("two-ring construction needs k < n < 2k, got " + nk(n, k));
  }
  const int s = n - k;
  TwoRingLayout lay;
  lay.separators = even_edge_select(s, k);
  for (int i = 0; i < s; ++i) lay.inner.push_back(k + i);
  for (int i = 0; i < s; ++i) {
    const int first = (lay.separators[i] + 1) % k;
    const int last = lay.separators[(i + 1) % s];
    std::vector<int> group;
    for (int v = first;; v = (v + 1) % k) {
      group.push_back(v);
      if (v == last) break;
    }
    lay.groups.push_back(std::move(group));
  }
  for (int i = 0; i < s; ++i) {
    const int u = lay.inner[i];
    const auto& group = lay.groups[i];
    for (std::size_t t = 0; t + 1 < group.size(); ++t) lay.triangles.push_back({u, group[t], group[t + 1]});
    const int next_first = lay.groups[(i + 1) % s].front();
    if (s == 1) {
      // A single hub sees the whole boundary: close the wheel.
      lay.triangles.push_back({u, group.back(), next_first});
      continue;
    }
    lay.triangles.push_back({u, group.back(), next_first});
    lay.triangles.push_back({u, next_first, lay.inner[(i + 1) % s]});
  }
  if (s >= 3) {
    for (const auto& f : comb_faces(lay.inner)) lay.triangles.push_back(f);
  }
  return lay;
}

Triangulation construct_two_ring(int n, int k) {
  const TwoRingLayout lay = two_ring_layout(n, k);
  std::vector<int> boundary(k);
  for (int j = 0; j < k; ++j) boundary[j] = j;
  return build_from_triangles(n, boundary, lay.triangles, Regime::two_ring);
}

K4Layout k4_sprinkle_layout(int n, int k) {
  const int s = n - k;
  if (k < 3 || s < 1 || s > k - 2) {
    throw ParameterError("k4-sprinkle construction needs 1 <= n-k <= k-2, got " + nk(n, k));
  }
  K4Layout lay;
  lay.border = (k - 2) / s;
  std::vector<int> polygon(k);
  for (int j = 0; j < k; ++j) polygon[j] = j;
  lay.comb = comb_faces(polygon);
  const int face_count = k - 2;
  if (s == face_count) {
    for (int f = 0; f < face_count; ++f) lay.chosen_faces.push_back(f);
  } else {
    lay.chosen_faces = even_edge_select(s, face_count);
  }
  std::vector<int> center_of(face_count, -1);
  for (int i = 0; i < s; ++i) {
    center_of[lay.chosen_faces[i]] = k + i;
    lay.centers.push_back(k + i);
  }
  for (int f = 0; f < face_count; ++f) {
    const auto& [a, b, c] = lay.comb[f];
    if (center_of[f] < 0) {
      lay.triangles.push_back(lay.comb[f]);
    } else {
      const int x = center_of[f];
      lay.triangles.push_back({a, b, x});
      lay.triangles.push_back({b, c, x});
      lay.triangles.push_back({c, a, x});
    }
  }
  return lay;
}

Triangulation construct_k4_sprinkle(int n, int k) {
  const K4Layout lay = k4_sprinkle_layout(n, k);
  std::vector<int> boundary(k);
  for (int j = 0; j < k; ++j) boundary[j] = j;
  return build_from_triangles(n, boundary, lay.triangles, Regime::k4_sprinkle);
}

namespace {

struct WheelLengthSearch {
  int chosen = -1;
  std::string failure;
};

WheelLengthSearch search_wheel_length(int n, int k) {
  WheelLengthSearch out;
  const int s = n - k;
  if (k < 3 || s < 1) {
    out.failure = "wheel chain needs 3 <= k < n, got " + nk(n, k);
    return out;
  }
  // Two disjoint shared rim edges need l >= 4 once there is more than one wheel.
  const int min_ell = s == 1 ? 3 : 4;
  long best_gap = -1;
  for (int ell = min_ell; ell <= n; ++ell) {
    const long mid = static_cast<long>(s) + 2L * ell * s;
    if (n - ell + 1 > mid || mid > n + ell) continue;
    const long gap = std::labs(2L * ell * s - k);
    if (best_gap < 0 || gap <= best_gap) {
      best_gap = gap;
      out.chosen = ell;
    }
  }
  if (out.chosen < 0) {
    const long at_min = static_cast<long>(s) + 2L * min_ell * s;
    if (at_min > n + min_ell) {
      out.failure = "no wheel length for " + nk(n, k) + ": s + 2ls <= n + l fails for every l >= " +
                    std::to_string(min_ell) + " (too many internal vertices)";
    } else {
      out.failure = "no wheel length for " + nk(n, k) +
                    ": no integer l satisfies n - l + 1 <= s + 2ls together with s + 2ls <= n + l";
    }
  }
  return out;
}

}  // namespace

int wheel_chain_length(int n, int k) {
  const auto search = search_wheel_length(n, k);
  if (search.chosen < 0) throw ConstructionError(search.failure);
  return search.chosen;
}

bool wheel_chain_feasible(int n, int k) { return search_wheel_length(n, k).chosen >= 0; }

WheelChainLayout wheel_chain_layout(int n, int k) {
  if (k < 3 || n <= k) throw ParameterError("wheel chain needs 3 <= k < n, got " + nk(n, k));
  const int s = n - k;
  const int ell = wheel_chain_length(n, k);
  const int final_block = n + ell + 2 - s - 2 * ell * s;
  const int right = ell / 2;  // right shared rim edge {rim[right], rim[right+1]}

  // Provisional ids in creation order, relabelled below.
  int next = 0;
  std::vector<std::vector<int>> rims(s);
  std::vector<int> hubs(s);
  std::vector<std::array<int, 3>> tris;
  std::vector<int> carry;  // {y_(L-2), y_(L-1)} of the previous comb
  for (int i = 0; i < s; ++i) {
    auto& rim = rims[i];
    rim.resize(ell);
    for (int j = 0; j < ell; ++j) {
      rim[j] = (j < 2 && !carry.empty()) ? carry[j] : next++;
    }
    hubs[i] = next++;
    for (int j = 0; j < ell; ++j) tris.push_back({hubs[i], rim[j], rim[(j + 1) % ell]});

    const int block = i + 1 < s ? ell + 4 : final_block;
    carry.clear();
    if (block < 3) continue;
    std::vector<int> path{rim[right], rim[(right + 1) % ell]};
    const int fresh = i + 1 < s ? block - 4 : block - 2;
    for (int f = 0; f < fresh; ++f) path.push_back(next++);
    if (i + 1 < s) {
      carry = {next, next + 1};
      path.push_back(next++);
      path.push_back(next++);
    }
    for (const auto& f : square_path_faces(path)) tris.push_back(f);
  }
  if (next != n) {
    throw ConstructionError("wheel chain layout produced " + std::to_string(next) +
                            " vertices for " + nk(n, k));
  }

  // Trace the outer cycle (edges on exactly one triangle).
  std::map<std::uint64_t, int> uses;
  for (const auto& t : tris) {
    for (int e = 0; e < 3; ++e) ++uses[edge_key(t[e], t[(e + 1) % 3])];
  }
  std::vector<std::vector<int>> outer_adj(n);
  for (const auto& [key, count] : uses) {
    if (count != 1) continue;
    const int u = static_cast<int>(key >> 32), v = static_cast<int>(key & 0xffffffffu);
    outer_adj[u].push_back(v);
    outer_adj[v].push_back(u);
  }
  std::vector<int> cycle{rims[0][0]};
  {
    int prev = -1, cur = rims[0][0];
    auto nbrs = outer_adj[cur];
    std::sort(nbrs.begin(), nbrs.end());
    int nxt = nbrs.at(0);
    while (nxt != rims[0][0]) {
      cycle.push_back(nxt);
      prev = cur;
      cur = nxt;
      const auto& a = outer_adj[cur];
      if (a.size() != 2) throw ConstructionError("wheel chain outer boundary is not a cycle");
      nxt = a[0] == prev ? a[1] : a[0];
    }
  }
  if (static_cast<int>(cycle.size()) != k) {
    throw ConstructionError("wheel chain boundary has " + std::to_string(cycle.size()) +
                            " vertices, expected k for " + nk(n, k));
  }

  std::vector<int> relabel(n, -1);
  for (int i = 0; i < k; ++i) relabel[cycle[i]] = i;
  for (int i = 0; i < s; ++i) relabel[hubs[i]] = k + i;

  WheelChainLayout lay;
  lay.ell = ell;
  lay.final_block = final_block;
  for (int i = 0; i < s; ++i) {
    lay.hubs.push_back(relabel[hubs[i]]);
    std::vector<int> rim;
    for (int v : rims[i]) rim.push_back(relabel[v]);
    lay.rims.push_back(std::move(rim));
  }
  for (const auto& t : tris) lay.triangles.push_back({relabel[t[0]], relabel[t[1]], relabel[t[2]]});
  lay.boundary.resize(k);
  for (int i = 0; i < k; ++i) lay.boundary[i] = i;
  return lay;
}

Triangulation construct_wheel_chain(int n, int k) {
  const WheelChainLayout lay = wheel_chain_layout(n, k);
  return build_from_triangles(n, lay.boundary, lay.triangles, Regime::wheel_chain);
}

Triangulation construct_comb(int n) {
  if (n < 3) throw ParameterError("comb triangulation needs n >= 3");
  std::vector<int> polygon(n);
  for (int j = 0; j < n; ++j) polygon[j] = j;
  return build_from_triangles(n, polygon, comb_faces(polygon), Regime::comb);
}

Triangulation construct_wheel(int k) {
  if (k < 3) throw ParameterError("wheel needs k >= 3");
  std::vector<int> rim(k);
  std::vector<std::array<int, 3>> triangles;
  for (int j = 0; j < k; ++j) {
    rim[j] = j;
    triangles.push_back({j, (j + 1) % k, k});
  }
  return build_from_triangles(k + 1, rim, triangles, Regime::wheel_chain);
}

Regime auto_regime(int n, int k) {
  if (k < 3 || k > n) throw ParameterError("need 3 <= k <= n, got " + nk(n, k));
  if (n < 4 && !(n == 3 && k == 3)) throw ParameterError("need n >= 4, got " + nk(n, k));
  if (k == n) return Regime::comb;
  if (n >= 2 * k) return Regime::nested;
  const int s = n - k;
  const int border = (k - 2) / s;
  if (s <= ceil_sqrt(n) && s <= k - 2 && (s == 1 || border >= 3)) return Regime::k4_sprinkle;
  if (3 * s < n && wheel_chain_feasible(n, k)) return Regime::wheel_chain;
  return Regime::two_ring;
}

Triangulation construct(int n, int k, Regime regime) {
  switch (regime) {
    case Regime::nested: return construct_nested(n, k);
    case Regime::two_ring: return construct_two_ring(n, k);
    case Regime::k4_sprinkle: return construct_k4_sprinkle(n, k);
    case Regime::wheel_chain: return construct_wheel_chain(n, k);
    case Regime::comb:
      if (k != n) throw ParameterError("comb triangulation needs k = n, got " + nk(n, k));
      return construct_comb(n);
    case Regime::custom: break;
  }
  throw ParameterError("no constructor for regime 'custom'");
}

Triangulation auto_construct(int n, int k) { return construct(n, k, auto_regime(n, k)); }

}  // namespace spantri
