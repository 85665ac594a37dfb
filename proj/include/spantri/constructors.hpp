#pragma once

#include <array>
#include <vector>

#include "spantri/exact.hpp"
#include "spantri/triangulation.hpp"

namespace spantri {

/// Derived quantities shared by the constructors.
struct ConstructionParams {
  int n = 0;
  int k = 0;
  int s = 0;          // n - k
  Rational alpha;     // k / n
  int c = 0;          // floor(n / k), nested regime
  int r = 0;          // n mod k, nested regime
  int border = 0;     // floor((k - 2) / s), k4-sprinkle regime (0 when s = 0)

  static ConstructionParams of(int n, int k);
};

/// Evenly spread selection of `a` edges on a cycle of length `b`.
/// Edge e joins cycle positions e and e + 1 (mod b). Returns the sorted
/// positions floor(i*b/a) - 1, i = 1..a: for every arc of L edges at most
/// L*a/b + 1 of them are selected.
std::vector<int> even_edge_select(int a, int b);

/// Zigzag order of the comb (square of a Hamilton path) triangulating a
/// polygon. With the cycle rotated to start at its smallest id v1..vL, the
/// order is vL, v1, v(L-1), v2, v(L-2), ...; consecutive triples are the faces.
std::vector<int> comb_zigzag(const std::vector<int>& cycle);

/// Faces of the comb triangulation in left-to-right order.
std::vector<std::array<int, 3>> comb_faces(const std::vector<int>& cycle);

/// The L - 3 chords the comb adds to a polygon of length L.
std::vector<Edge> comb_triangulate(const std::vector<int>& cycle);

/// Faces of the square of the path y0..y(L-1): triples (y_i, y_i+1, y_i+2).
std::vector<std::array<int, 3>> square_path_faces(const std::vector<int>& path);

/// Nested cycles: rings 0..c-1 of k vertices (id = ring*k + angle), the
/// residual vertices (ids c*k..n-1) subdividing evenly chosen edges of the
/// innermost ring, and a comb over the extended innermost cycle.
struct NestedLayout {
  int c = 0;
  int r = 0;
  std::vector<int> ring;            // ring index per vertex; residuals report c - 1
  std::vector<int> angle;           // angular coordinate per vertex (residual: angle of its left end)
  std::vector<char> residual;       // 1 for residual vertices
  std::vector<int> inner_cycle;     // extended innermost cycle, angular order
  std::vector<Edge> inner_chords;   // comb chords inside the innermost cycle
  std::vector<std::array<int, 3>> triangles;
};

NestedLayout nested_layout(int n, int k);
Triangulation construct_nested(int n, int k);

/// Two rings: boundary ids 0..k-1, inner cycle u_i = k + i; u_i sees the
/// boundary group V_i and the first vertex of V_(i+1).
struct TwoRingLayout {
  std::vector<int> separators;               // edge positions on the boundary
  std::vector<std::vector<int>> groups;      // V_0..V_(s-1)
  std::vector<int> inner;                    // u_0..u_(s-1)
  std::vector<std::array<int, 3>> triangles;
};

TwoRingLayout two_ring_layout(int n, int k);
Triangulation construct_two_ring(int n, int k);

/// Comb of the k-gon with s face centres (ids k..n-1, comb order).
struct K4Layout {
  int border = 0;
  std::vector<int> chosen_faces;           // indices into the comb face order
  std::vector<std::array<int, 3>> comb;    // comb faces of the boundary polygon
  std::vector<int> centers;
  std::vector<std::array<int, 3>> triangles;
};

K4Layout k4_sprinkle_layout(int n, int k);
Triangulation construct_k4_sprinkle(int n, int k);

/// Wheel length for the wheel chain on (n, k). Throws ConstructionError when
/// no admissible length exists, naming the side of
///   n - l + 1 <= s + 2 l s <= n + l
/// that fails.
int wheel_chain_length(int n, int k);
bool wheel_chain_feasible(int n, int k);

/// Wheels W_1..W_s (rim of length l, hub in S) alternating with combs of
/// l + 4 vertices, closed by a final comb of 2..2l+1 vertices. Boundary ids
/// are 0..k-1 in boundary order, hubs k..n-1 in chain order.
struct WheelChainLayout {
  int ell = 0;
  int final_block = 0;                     // vertex count of the closing comb
  std::vector<int> hubs;
  std::vector<std::vector<int>> rims;      // rim cycle per wheel
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundary;
};

WheelChainLayout wheel_chain_layout(int n, int k);
Triangulation construct_wheel_chain(int n, int k);

/// The comb triangulation of the n-gon (k = n).
Triangulation construct_comb(int n);

/// The wheel W_k: boundary 0..k-1 around the hub k. Gives T(k+1, k), e.g.
/// the 4-cycle plus hub used by the spread tests.
Triangulation construct_wheel(int k);

/// Regime picked by auto_construct for (n, k).
Regime auto_regime(int n, int k);
Triangulation auto_construct(int n, int k);

/// Dispatches to one regime's constructor; Regime::custom is rejected.
Triangulation construct(int n, int k, Regime regime);

}  // namespace spantri
