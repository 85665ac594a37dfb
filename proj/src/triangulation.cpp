#include "spantri/triangulation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "spantri/errors.hpp"

namespace spantri {

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::nested: return "nested";
    case Regime::two_ring: return "two-ring";
    case Regime::k4_sprinkle: return "k4-sprinkle";
    case Regime::wheel_chain: return "wheel-chain";
    case Regime::comb: return "comb";
    case Regime::custom: return "custom";
  }
  return "custom";
}

Regime parse_regime(std::string_view name) {
  for (Regime r : {Regime::nested, Regime::two_ring, Regime::k4_sprinkle, Regime::wheel_chain,
                   Regime::comb, Regime::custom}) {
    if (regime_name(r) == name) return r;
  }
  throw StructuralError("unknown regime tag '" + std::string(name) + "'");
}

Triangulation::Triangulation(int n, int k, std::vector<std::vector<int>> rotations,
                             std::vector<int> boundary, std::vector<int> internal, Regime regime)
    : n_(n),
      k_(k),
      rotations_(std::move(rotations)),
      boundary_(std::move(boundary)),
      internal_(std::move(internal)),
      regime_(regime) {
  if (n_ < 1) throw StructuralError("vertex count must be positive");
  if (static_cast<int>(rotations_.size()) != n_) {
    throw StructuralError("expected " + std::to_string(n_) + " rotation lists, got " +
                          std::to_string(rotations_.size()));
  }
  if (static_cast<int>(boundary_.size()) != k_) {
    throw StructuralError("boundary has " + std::to_string(boundary_.size()) +
                          " vertices but k = " + std::to_string(k_));
  }
  auto in_range = [&](int v) { return v >= 0 && v < n_; };
  for (int v : boundary_) {
    if (!in_range(v)) throw StructuralError("boundary id " + std::to_string(v) + " out of range");
  }
  internal_flag_.assign(n_, 0);
  for (int v : internal_) {
    if (!in_range(v)) throw StructuralError("internal id " + std::to_string(v) + " out of range");
    internal_flag_[v] = 1;
  }
  std::sort(internal_.begin(), internal_.end());

  std::map<std::uint64_t, int> dart_count;
  for (int v = 0; v < n_; ++v) {
    for (std::size_t i = 0; i < rotations_[v].size(); ++i) {
      const int u = rotations_[v][i];
      if (!in_range(u)) {
        throw StructuralError("rotation of " + std::to_string(v) + " names dangling id " +
                              std::to_string(u));
      }
      if (u == v) simple_ = false;
      if (++dart_count[dart_key(v, u)] > 1) simple_ = false;
      dart_pos_.emplace(dart_key(v, u), static_cast<int>(i));
    }
  }
  for (const auto& [key, count] : dart_count) {
    const int v = static_cast<int>(key >> 32);
    const int u = static_cast<int>(key & 0xffffffffu);
    auto it = dart_count.find(dart_key(u, v));
    if (it == dart_count.end() || it->second != count) {
      throw StructuralError("asymmetric adjacency: " + std::to_string(u) + " is in the rotation of " +
                            std::to_string(v) + " but not vice versa");
    }
  }
  for (int v = 0; v < n_; ++v) {
    for (int u : rotations_[v]) {
      if (v < u) edges_.push_back({v, u});
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    edge_ids_.emplace(edge_key(edges_[i].u, edges_[i].v), static_cast<int>(i));
  }
}

int Triangulation::max_degree() const {
  int best = 0;
  for (const auto& r : rotations_) best = std::max(best, static_cast<int>(r.size()));
  return best;
}

int Triangulation::edge_id(int u, int v) const {
  auto it = edge_ids_.find(edge_key(u, v));
  return it == edge_ids_.end() ? -1 : it->second;
}

int Triangulation::position_in_rotation(int v, int u) const {
  auto it = dart_pos_.find(dart_key(v, u));
  if (it == dart_pos_.end()) {
    throw StructuralError(std::to_string(u) + " is not a neighbour of " + std::to_string(v));
  }
  return it->second;
}

int Triangulation::rotation_next(int v, int u) const {
  const auto& rot = rotations_[v];
  return rot[(position_in_rotation(v, u) + 1) % rot.size()];
}

int Triangulation::rotation_prev(int v, int u) const {
  const auto& rot = rotations_[v];
  return rot[(position_in_rotation(v, u) + rot.size() - 1) % rot.size()];
}

Triangulation build_from_triangles(int n, const std::vector<int>& boundary,
                                   const std::vector<std::array<int, 3>>& triangles, Regime regime) {
  const int k = static_cast<int>(boundary.size());
  if (triangles.empty()) throw ConstructionError("no triangles");

  std::unordered_map<std::uint64_t, std::vector<int>> owners;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    for (int i = 0; i < 3; ++i) {
      const int a = tri[i], b = tri[(i + 1) % 3];
      if (a == b || a < 0 || b < 0 || a >= n || b >= n) {
        throw ConstructionError("degenerate triangle in construction");
      }
      owners[edge_key(a, b)].push_back(static_cast<int>(t));
    }
  }
  for (const auto& [key, list] : owners) {
    if (list.size() > 2) throw ConstructionError("edge shared by more than two triangles");
  }

  // Orientation: oriented[t] is the triangle with a fixed cyclic order, and
  // neighbouring triangles traverse their shared edge in opposite directions.
  std::vector<std::array<int, 3>> oriented(triangles.size());
  std::vector<char> done(triangles.size(), 0);
  auto has_dart = [](const std::array<int, 3>& tri, int a, int b) {
    for (int i = 0; i < 3; ++i) {
      if (tri[i] == a && tri[(i + 1) % 3] == b) return true;
    }
    return false;
  };
  std::queue<int> queue;
  oriented[0] = triangles[0];
  done[0] = 1;
  queue.push(0);
  while (!queue.empty()) {
    const int t = queue.front();
    queue.pop();
    for (int i = 0; i < 3; ++i) {
      const int a = oriented[t][i], b = oriented[t][(i + 1) % 3];
      for (int other : owners[edge_key(a, b)]) {
        if (other == t) continue;
        std::array<int, 3> tri = triangles[other];
        if (!has_dart(tri, b, a)) std::swap(tri[1], tri[2]);
        if (done[other]) {
          if (!has_dart(oriented[other], b, a)) {
            throw ConstructionError("triangles do not form an orientable disk");
          }
          continue;
        }
        oriented[other] = tri;
        done[other] = 1;
        queue.push(other);
      }
    }
  }
  if (std::find(done.begin(), done.end(), 0) != done.end()) {
    throw ConstructionError("triangles do not form a connected disk");
  }

  // Make the boundary run with the disk on its left.
  {
    const int b0 = boundary[0], b1 = boundary[1 % k];
    auto it = owners.find(edge_key(b0, b1));
    if (it == owners.end() || it->second.size() != 1) {
      throw ConstructionError("boundary edge is not on exactly one triangle");
    }
    if (!has_dart(oriented[it->second[0]], b0, b1)) {
      for (auto& tri : oriented) std::swap(tri[1], tri[2]);
    }
  }

  // succ[v][u] = w when (v, u, w) is an oriented triangle: w follows u
  // counter-clockwise around v.
  std::vector<std::unordered_map<int, int>> succ(n);
  for (const auto& tri : oriented) {
    for (int i = 0; i < 3; ++i) succ[tri[i]][tri[(i + 1) % 3]] = tri[(i + 2) % 3];
  }
  std::vector<int> boundary_next(n, -1);
  for (int i = 0; i < k; ++i) boundary_next[boundary[i]] = boundary[(i + 1) % k];

  std::vector<std::vector<int>> rotations(n);
  for (int v = 0; v < n; ++v) {
    if (succ[v].empty()) throw ConstructionError("vertex " + std::to_string(v) + " is isolated");
    int start = boundary_next[v];
    if (start < 0) {
      start = std::min_element(succ[v].begin(), succ[v].end())->first;
    }
    int u = start;
    auto& rot = rotations[v];
    while (true) {
      rot.push_back(u);
      auto it = succ[v].find(u);
      if (it == succ[v].end()) break;  // reached the previous boundary vertex
      u = it->second;
      if (u == start) break;
      if (rot.size() > succ[v].size() + 1) throw ConstructionError("rotation does not close");
    }
  }

  std::vector<char> on_boundary(n, 0);
  for (int v : boundary) on_boundary[v] = 1;
  std::vector<int> internal;
  for (int v = 0; v < n; ++v) {
    if (!on_boundary[v]) internal.push_back(v);
  }
  return Triangulation(n, k, std::move(rotations), boundary, std::move(internal), regime);
}

int FaceStructure::face_left_of(int u, int v) const {
  auto it = face_of_dart.find(dart_key(u, v));
  return it == face_of_dart.end() ? -1 : it->second;
}

FaceStructure trace_faces(const Triangulation& t) {
  if (!t.is_simple()) throw StructuralError("face tracing needs a simple graph");
  FaceStructure fs;
  for (int v = 0; v < t.n(); ++v) {
    for (int u : t.rotation(v)) {
      if (fs.face_of_dart.count(dart_key(v, u))) continue;
      const int id = static_cast<int>(fs.faces.size());
      std::vector<int> face;
      int a = v, b = u;
      while (!fs.face_of_dart.count(dart_key(a, b))) {
        fs.face_of_dart.emplace(dart_key(a, b), id);
        face.push_back(a);
        const int c = t.rotation_prev(b, a);
        a = b;
        b = c;
      }
      if (a != v || b != u) throw StructuralError("rotation system does not close into faces");
      fs.faces.push_back(std::move(face));
    }
  }

  // Outer face: the face whose vertex set is the boundary set. With the
  // boundary oriented disk-on-the-left, the outer face is left of the
  // reversed boundary darts, which breaks the tie for the bare triangle.
  const auto& bd = t.boundary();
  std::set<int> bset(bd.begin(), bd.end());
  std::vector<int> candidates;
  for (std::size_t f = 0; f < fs.faces.size(); ++f) {
    std::set<int> fset(fs.faces[f].begin(), fs.faces[f].end());
    if (fset == bset && fs.faces[f].size() == bd.size()) candidates.push_back(static_cast<int>(f));
  }
  fs.outer_candidates = static_cast<int>(candidates.size());
  if (candidates.size() == 1) {
    fs.outer = candidates[0];
  } else if (candidates.size() == 2 && bd.size() >= 2) {
    const int reversed = fs.face_left_of(bd[1], bd[0]);
    if (std::count(candidates.begin(), candidates.end(), reversed) == 1) fs.outer = reversed;
  }
  return fs;
}

std::vector<std::vector<int>> faces(const Triangulation& t) { return trace_faces(t).faces; }

const Check* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

bool cyclic_equal(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  const std::size_t n = a.size();
  for (std::size_t shift = 0; shift < n; ++shift) {
    bool fwd = true, bwd = true;
    for (std::size_t i = 0; i < n && (fwd || bwd); ++i) {
      if (a[i] != b[(i + shift) % n]) fwd = false;
      if (a[i] != b[(shift + n - i) % n]) bwd = false;
    }
    if (fwd || bwd) return true;
  }
  return false;
}

std::string join(const std::vector<int>& xs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? " " : "") << xs[i];
  return os.str();
}

}  // namespace

ValidationReport validate(const Triangulation& t) {
  ValidationReport report;
  auto add = [&](std::string name, bool ok, std::string witness = {}) {
    report.checks.push_back({std::move(name), ok, std::move(witness)});
  };
  const int n = t.n(), k = t.k();

  long degree_sum = 0;
  for (int v = 0; v < n; ++v) degree_sum += t.degree(v);
  const long m = degree_sum / 2;

  add("simple", t.is_simple(), t.is_simple() ? "" : "loop or repeated neighbour entry");

  {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int u : t.rotation(v)) {
        if (!seen[u]) {
          seen[u] = 1;
          ++reached;
          stack.push_back(u);
        }
      }
    }
    int first_missing = -1;
    for (int v = 0; v < n && first_missing < 0; ++v) {
      if (!seen[v]) first_missing = v;
    }
    add("connected", reached == n,
        reached == n ? "" : "vertex " + std::to_string(first_missing) + " unreachable from 0");
  }

  const long expected_m = 3L * n - 3 - k;
  add("edge_count", m == expected_m,
      "m = " + std::to_string(m) + ", expected 3n-3-k = " + std::to_string(expected_m));

  {
    bool ok = k >= 3;
    std::string witness = ok ? "" : "k < 3";
    std::set<int> distinct(t.boundary().begin(), t.boundary().end());
    if (ok && static_cast<int>(distinct.size()) != k) {
      ok = false;
      witness = "boundary repeats a vertex";
    }
    for (int i = 0; ok && i < k; ++i) {
      const int a = t.boundary()[i], b = t.boundary()[(i + 1) % k];
      if (!t.has_edge(a, b)) {
        ok = false;
        witness = "boundary pair {" + std::to_string(a) + "," + std::to_string(b) + "} is not an edge";
      }
    }
    add("boundary_cycle", ok, witness);
  }

  {
    std::vector<char> on_boundary(n, 0);
    for (int v : t.boundary()) on_boundary[v] = 1;
    std::vector<int> complement;
    for (int v = 0; v < n; ++v) {
      if (!on_boundary[v]) complement.push_back(v);
    }
    const bool ok = complement == t.internal();
    add("internal_set", ok, ok ? "" : "internal set differs from complement of boundary: {" +
                                          join(complement) + "}");
  }

  if (!t.is_simple()) {
    add("outer_face", false, "not evaluated: graph is not simple");
    add("triangular_faces", false, "not evaluated: graph is not simple");
    add("euler", false, "not evaluated: graph is not simple");
  } else {
    const FaceStructure fs = trace_faces(t);
    const long f = static_cast<long>(fs.faces.size());
    bool outer_ok = fs.outer >= 0 && cyclic_equal(fs.faces[fs.outer], t.boundary());
    std::string outer_witness;
    if (fs.outer_candidates == 0) {
      outer_witness = "no face has the boundary as its vertex set";
    } else if (fs.outer < 0) {
      outer_witness = std::to_string(fs.outer_candidates) + " faces match the boundary set";
    } else if (!outer_ok) {
      outer_witness = "outer face order (" + join(fs.faces[fs.outer]) + ") differs from boundary";
    }
    add("outer_face", outer_ok, outer_witness);

    std::string tri_witness;
    for (std::size_t i = 0; i < fs.faces.size() && tri_witness.empty(); ++i) {
      if (static_cast<int>(i) == fs.outer) continue;
      const auto& face = fs.faces[i];
      std::set<int> distinct(face.begin(), face.end());
      if (face.size() != 3 || distinct.size() != 3) tri_witness = "face (" + join(face) + ")";
    }
    add("triangular_faces", tri_witness.empty() && fs.outer >= 0,
        tri_witness.empty() ? (fs.outer >= 0 ? "" : "outer face unidentified")
                            : "non-triangular inner " + tri_witness);

    // 2n - 2 - k triangles plus the outer face.
    const long expected_f = 2L * n - 1 - k;
    const bool euler_ok = n - m + f == 2 && f == expected_f;
    add("euler", euler_ok,
        "v - e + f = " + std::to_string(n - m + f) + ", f = " + std::to_string(f) +
            " (expected 2n-1-k = " + std::to_string(expected_f) + ")");
  }

  report.passed = std::all_of(report.checks.begin(), report.checks.end(),
                              [](const Check& c) { return c.passed; });
  for (auto& c : report.checks) {
    if (c.passed && c.name != "edge_count" && c.name != "euler") c.witness.clear();
  }
  return report;
}

std::vector<int> degree_histogram(const Triangulation& t) {
  std::vector<int> hist(t.max_degree() + 1, 0);
  for (int v = 0; v < t.n(); ++v) ++hist[t.degree(v)];
  return hist;
}

}  // namespace spantri
