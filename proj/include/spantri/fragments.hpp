#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "spantri/exact.hpp"
#include "spantri/triangulation.hpp"

namespace spantri {

/// Parameters of an edge subset I of T.
///   i    = |I|
///   v    = number of vertices touched by I
///   c    = connected components of I
///   c_S  = components containing an internal vertex
///   g    = |V(I) ∩ S|
///   r    = number of 4-cliques in I
///   t    = sum over u in V(I) ∩ S of t_I(u), where t_I(u) = 0 if the rim
///          C(u) (the cycle on N_T(u)) lies in I, and otherwise the number of
///          components of I induced on N_I(u), the I-neighbours of u.
struct Fragment {
  int i = 0;
  int v = 0;
  int c = 0;
  int c_S = 0;
  int g = 0;
  int r = 0;
  int t = 0;

  friend bool operator==(const Fragment&, const Fragment&) = default;
  friend auto operator<=>(const Fragment&, const Fragment&) = default;
};

std::string to_string(const Fragment& f);

/// Edge ids of T for the given vertex pairs. Throws ParameterError when a
/// pair is not an edge of T.
std::vector<int> edge_ids(const Triangulation& t, const std::vector<Edge>& pairs);

/// Reusable evaluator for fragment_params; keeps scratch buffers so it can be
/// called in tight enumeration loops. Not thread-safe: one per worker.
class FragmentCalculator {
 public:
  explicit FragmentCalculator(const Triangulation& t);

  Fragment operator()(const std::vector<int>& edges);
  /// t_I(u) for the edge set most recently passed to operator().
  int t_of(int u) const;
  const Triangulation& triangulation() const { return *t_; }

 private:
  int find(int x);

  const Triangulation* t_;
  std::vector<Edge> endpoint_;
  std::vector<std::vector<int>> rim_edges_;  // per internal vertex: edge ids of its rim cycle
  std::vector<int> stamp_;                    // vertex -> generation when touched
  std::vector<int> edge_stamp_;               // edge -> generation when in I
  std::vector<int> parent_;
  std::vector<int> t_value_;
  std::vector<std::vector<int>> adj_;         // I-adjacency for the current call
  std::vector<int> touched_;
  int generation_ = 0;
};

Fragment fragment_params(const Triangulation& t, const std::vector<int>& edges);

/// Independent implementation used to cross-check fragment_params: builds an
/// adjacency matrix of I from scratch, labels components by DFS and finds
/// 4-cliques by testing every 4-subset.
Fragment fragment_params_reference(const Triangulation& t, const std::vector<Edge>& pairs);

// ---------------------------------------------------------------------------
// Connected subgraph enumeration

struct EnumerationStats {
  std::vector<std::uint64_t> per_size;  // per_size[i] = subgraphs with i edges
  std::uint64_t total = 0;
  bool aborted = false;

  void merge(const EnumerationStats& other);
};

/// Current subgraph handed to visitors: its edge ids (in insertion order)
/// and the distinct vertices it touches.
struct SubgraphView {
  const std::vector<int>& edges;
  const std::vector<int>& vertices;
};

using SubgraphVisitor = std::function<void(const SubgraphView&)>;

/// Every connected subgraph with 1..max_edges edges that contains `root`,
/// each exactly once. Stops after `budget` subgraphs and flags the result.
EnumerationStats enumerate_connected_subgraphs(const Triangulation& t, int root, int max_edges,
                                               std::uint64_t budget, const SubgraphVisitor& visit);

/// Connected subgraphs whose smallest vertex is `root`; iterating root over
/// all vertices lists every connected subgraph of T exactly once.
EnumerationStats enumerate_connected_subgraphs_min_root(const Triangulation& t, int root,
                                                        int max_edges, std::uint64_t budget,
                                                        const SubgraphVisitor& visit);

/// Connected induced vertex sets of size 1..max_vertices whose smallest
/// vertex is `root`, each once. The visitor gets the vertex list and the
/// number of T-edges inside it.
using VertexSetVisitor = std::function<void(const std::vector<int>& vertices, int induced_edges)>;
EnumerationStats enumerate_connected_vertex_sets_min_root(const Triangulation& t, int root,
                                                          int max_vertices, std::uint64_t budget,
                                                          const VertexSetVisitor& visit);

/// Rooted counts: counts[root][i] = connected i-edge subgraphs
/// containing root, i = 0..max_edges (index 0 unused).
struct RootedCounts {
  std::vector<std::vector<std::uint64_t>> counts;
  int max_degree = 0;
  bool aborted = false;
};

RootedCounts rooted_subgraph_counts(const Triangulation& t, int max_edges, std::uint64_t budget,
                                    int workers = 0);

/// Outcome of comparing an integer count with (e*delta)^i using rational
/// brackets of e; `undecided` only if the count falls between the brackets.
enum class Comparison { below, not_below, undecided };
Comparison compare_below_e_power(std::uint64_t count, int delta, int i);

// ---------------------------------------------------------------------------
// Simple cycles

struct CycleInfo {
  std::vector<int> cycle;      // canonical: starts at its smallest vertex, cycle[1] < cycle.back()
  int length = 0;
  int v_inside = 0;            // cycle vertices plus strictly interior ones
  int t_inside = 0;            // strictly interior vertices
  std::vector<int> interior;   // the strictly interior vertices, sorted
};

/// Interior of a cycle from the embedding: faces reachable from the outer
/// face without crossing the cycle are outside.
class CycleInterior {
 public:
  explicit CycleInterior(const Triangulation& t);
  void fill(CycleInfo& info);

 private:
  const Triangulation* t_;
  FaceStructure fs_;
  std::vector<std::vector<std::pair<int, int>>> face_adj_;  // (edge id, neighbouring face)
  std::vector<int> some_face_of_;                            // a face incident to each vertex
  std::vector<int> edge_mark_;
  std::vector<int> face_mark_;
  std::vector<int> vertex_mark_;
  std::vector<int> queue_;
  int generation_ = 0;
};

using CycleVisitor = std::function<void(const CycleInfo&)>;

/// Simple cycles of length 3..max_len whose smallest vertex is `start`.
EnumerationStats enumerate_simple_cycles_from(const Triangulation& t, int start, int max_len,
                                              std::uint64_t budget, CycleInterior& interior,
                                              const CycleVisitor& visit);

/// All simple cycles of length 3..max_len, each once, in canonical order.
EnumerationStats enumerate_simple_cycles(const Triangulation& t, int max_len, std::uint64_t budget,
                                         const CycleVisitor& visit);

// ---------------------------------------------------------------------------
// Subset counts by (c, t)

struct CountBoundRow {
  int i = 0;
  int c = 0;
  int t = 0;
  BigInt count;
  /// (2048 e)^i C(2j, c) l^t evaluated with e replaced by its lower bracket,
  /// so count <= bound here implies the real inequality.
  BigInt bound_floor;
  bool holds = false;
};

/// Tallies every i-edge subset of J (edge ids of T) by (c, t) and pairs each
/// bucket with the bound. Throws BudgetExceeded when C(|J|, i) > budget.
std::vector<CountBoundRow> count_bound_check_subgraphs(const Triangulation& t,
                                                       const std::vector<int>& j_edges, int i,
                                                       int ell, std::uint64_t budget);

// ---------------------------------------------------------------------------
// Histograms

using FragmentHistogram = std::map<Fragment, std::uint64_t>;

/// Histogram of fragment parameters over all connected subgraphs with at most
/// max_edges edges.
FragmentHistogram fragment_histogram(const Triangulation& t, int max_edges, std::uint64_t budget,
                                     int workers, bool* aborted);

void write_histogram_csv(std::ostream& os, const FragmentHistogram& hist);

}  // namespace spantri
