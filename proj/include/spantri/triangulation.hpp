#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace spantri {

enum class Regime { nested, two_ring, k4_sprinkle, wheel_chain, comb, custom };

std::string_view regime_name(Regime r);
Regime parse_regime(std::string_view name);

struct Edge {
  int u = 0;  // u < v
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline std::uint64_t edge_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

/// A labeled plane graph with a combinatorial embedding (rotation system),
/// a marked outer boundary cycle and the complementary internal vertex set.
///
/// Rotations list neighbours counter-clockwise; the boundary is listed with
/// the triangulated disk on its left. The object is immutable once built, so
/// it can be shared freely between worker threads.
///
/// Construction only checks structural well-formedness (ids in range,
/// symmetric adjacency). The triangulation invariants themselves are
/// checked by validate().
class Triangulation {
 public:
  Triangulation(int n, int k, std::vector<std::vector<int>> rotations, std::vector<int> boundary,
                std::vector<int> internal, Regime regime);

  int n() const { return n_; }
  int k() const { return k_; }
  /// Number of internal vertices, n - k.
  int s() const { return n_ - k_; }
  /// Edge count as seen by the rotation system (half the degree sum).
  int m() const { return static_cast<int>(edges_.size()); }
  Regime regime() const { return regime_; }

  const std::vector<int>& rotation(int v) const { return rotations_[v]; }
  const std::vector<std::vector<int>>& rotations() const { return rotations_; }
  int degree(int v) const { return static_cast<int>(rotations_[v].size()); }
  int max_degree() const;

  const std::vector<int>& boundary() const { return boundary_; }
  /// Sorted internal vertex ids as supplied.
  const std::vector<int>& internal() const { return internal_; }
  bool is_internal(int v) const { return internal_flag_[v]; }

  /// Distinct edges, sorted lexicographically. Edge ids index this list.
  const std::vector<Edge>& edges() const { return edges_; }
  /// Edge id of {u, v}, or -1 when absent.
  int edge_id(int u, int v) const;
  bool has_edge(int u, int v) const { return edge_id(u, v) >= 0; }

  /// True when there are no loops and no repeated neighbour entries.
  bool is_simple() const { return simple_; }

  /// Rotation successor / predecessor of neighbour u around v.
  int rotation_next(int v, int u) const;
  int rotation_prev(int v, int u) const;

  friend bool operator==(const Triangulation& a, const Triangulation& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.rotations_ == b.rotations_ &&
           a.boundary_ == b.boundary_ && a.internal_ == b.internal_ && a.regime_ == b.regime_;
  }

 private:
  int position_in_rotation(int v, int u) const;

  int n_;
  int k_;
  std::vector<std::vector<int>> rotations_;
  std::vector<int> boundary_;
  std::vector<int> internal_;
  std::vector<char> internal_flag_;
  Regime regime_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, int> edge_ids_;
  std::unordered_map<std::uint64_t, int> dart_pos_;  // (v, u) -> index of u in rotation(v)
  bool simple_ = true;
};

/// Builds a triangulation of a disk from its triangles. Orientation is
/// propagated across shared edges, then fixed so that `boundary` runs with
/// the disk on its left. Rotations are read off the oriented triangles.
Triangulation build_from_triangles(int n, const std::vector<int>& boundary,
                                   const std::vector<std::array<int, 3>>& triangles, Regime regime);

struct FaceStructure {
  std::vector<std::vector<int>> faces;     // cyclic vertex sequences
  std::unordered_map<std::uint64_t, int> face_of_dart;  // directed (u -> v) -> face id
  int outer = -1;                          // index of the outer face, -1 if unidentified
  int outer_candidates = 0;                // faces whose vertex set equals the boundary set

  int face_left_of(int u, int v) const;
};

inline std::uint64_t dart_key(int u, int v) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

/// Traces every face of the rotation system. Requires a simple graph.
FaceStructure trace_faces(const Triangulation& t);

/// faces(T): each face once, as a cyclic vertex list.
std::vector<std::vector<int>> faces(const Triangulation& t);

struct Check {
  std::string name;
  bool passed = false;
  std::string witness;
};

struct ValidationReport {
  std::vector<Check> checks;
  bool passed = false;

  const Check* find(std::string_view name) const;
};

ValidationReport validate(const Triangulation& t);

/// Degree histogram: hist[d] = number of vertices of degree d.
std::vector<int> degree_histogram(const Triangulation& t);

}  // namespace spantri
