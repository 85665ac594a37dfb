#include "spantri/fragments.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "spantri/errors.hpp"
#include "spantri/parallel.hpp"

namespace spantri {

std::string to_string(const Fragment& f) {
  std::ostringstream os;
  os << "(i=" << f.i << ", v=" << f.v << ", c=" << f.c << ", c_S=" << f.c_S << ", g=" << f.g
     << ", r=" << f.r << ", t=" << f.t << ")";
  return os.str();
}

std::vector<int> edge_ids(const Triangulation& t, const std::vector<Edge>& pairs) {
  std::vector<int> ids;
  ids.reserve(pairs.size());
  for (const auto& e : pairs) {
    const int id = (e.u >= 0 && e.v >= 0 && e.u < t.n() && e.v < t.n()) ? t.edge_id(e.u, e.v) : -1;
    if (id < 0) {
      throw ParameterError("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                           "} is not an edge of T");
    }
    ids.push_back(id);
  }
  return ids;
}

// ---------------------------------------------------------------------------

FragmentCalculator::FragmentCalculator(const Triangulation& t)
    : t_(&t),
      endpoint_(t.edges()),
      rim_edges_(t.n()),
      stamp_(t.n(), 0),
      edge_stamp_(t.m(), 0),
      parent_(t.n(), 0),
      t_value_(t.n(), 0),
      adj_(t.n()) {
  for (int u : t.internal()) {
    const auto& rot = t.rotation(u);
    for (std::size_t j = 0; j < rot.size(); ++j) {
      rim_edges_[u].push_back(t.edge_id(rot[j], rot[(j + 1) % rot.size()]));
    }
  }
}

int FragmentCalculator::find(int x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

int FragmentCalculator::t_of(int u) const { return stamp_[u] == generation_ ? t_value_[u] : 0; }

Fragment FragmentCalculator::operator()(const std::vector<int>& edges) {
  ++generation_;
  const int gen = generation_;
  touched_.clear();
  Fragment f;
  for (int e : edges) {
    if (e < 0 || e >= static_cast<int>(endpoint_.size())) {
      throw ParameterError("edge id " + std::to_string(e) + " is not an edge of T");
    }
    if (edge_stamp_[e] == gen) continue;
    edge_stamp_[e] = gen;
    ++f.i;
    for (int w : {endpoint_[e].u, endpoint_[e].v}) {
      if (stamp_[w] != gen) {
        stamp_[w] = gen;
        parent_[w] = w;
        t_value_[w] = 0;
        adj_[w].clear();
        touched_.push_back(w);
      }
    }
    adj_[endpoint_[e].u].push_back(endpoint_[e].v);
    adj_[endpoint_[e].v].push_back(endpoint_[e].u);
    const int a = find(endpoint_[e].u), b = find(endpoint_[e].v);
    if (a != b) parent_[a] = b;
  }
  f.v = static_cast<int>(touched_.size());

  auto adjacent = [&](int x, int y) {
    const auto& ax = adj_[x];
    return std::find(ax.begin(), ax.end(), y) != ax.end();
  };

  std::vector<int> roots;
  std::vector<int> roots_with_s;
  for (int w : touched_) {
    const int root = find(w);
    if (root == w) roots.push_back(w);
    if (t_->is_internal(w)) {
      ++f.g;
      roots_with_s.push_back(root);
    }
  }
  f.c = static_cast<int>(roots.size());
  std::sort(roots_with_s.begin(), roots_with_s.end());
  f.c_S = static_cast<int>(std::unique(roots_with_s.begin(), roots_with_s.end()) - roots_with_s.begin());

  // 4-cliques: a < b < c < d, all six pairs in I.
  for (int a : touched_) {
    for (int b : adj_[a]) {
      if (b <= a) continue;
      for (int c : adj_[a]) {
        if (c <= b || !adjacent(b, c)) continue;
        for (int d : adj_[a]) {
          if (d <= c) continue;
          if (adjacent(b, d) && adjacent(c, d)) ++f.r;
        }
      }
    }
  }

  for (int u : touched_) {
    if (!t_->is_internal(u)) continue;
    const auto& rim = rim_edges_[u];
    const bool full_rim =
        !rim.empty() && std::all_of(rim.begin(), rim.end(), [&](int e) { return e >= 0 && edge_stamp_[e] == gen; });
    if (full_rim) continue;
    // Components of I on the I-neighbourhood of u.
    const auto& nb = adj_[u];
    const int deg = static_cast<int>(nb.size());
    std::vector<int> label(deg);
    std::iota(label.begin(), label.end(), 0);
    auto lfind = [&](int x) {
      while (label[x] != x) x = label[x] = label[label[x]];
      return x;
    };
    int comps = deg;
    for (int x = 0; x < deg; ++x) {
      for (int y = x + 1; y < deg; ++y) {
        if (!adjacent(nb[x], nb[y])) continue;
        const int rx = lfind(x), ry = lfind(y);
        if (rx != ry) {
          label[rx] = ry;
          --comps;
        }
      }
    }
    t_value_[u] = comps;
    f.t += comps;
  }
  return f;
}

Fragment fragment_params(const Triangulation& t, const std::vector<int>& edges) {
  FragmentCalculator calc(t);
  return calc(edges);
}

Fragment fragment_params_reference(const Triangulation& t, const std::vector<Edge>& pairs) {
  const int n = t.n();
  std::vector<std::vector<char>> in_i(n, std::vector<char>(n, 0));
  for (const auto& e : pairs) {
    if (!t.has_edge(e.u, e.v)) {
      throw ParameterError("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                           "} is not an edge of T");
    }
    in_i[e.u][e.v] = in_i[e.v][e.u] = 1;
  }
  Fragment f;
  std::vector<int> verts;
  for (int x = 0; x < n; ++x) {
    int deg = 0;
    for (int y = 0; y < n; ++y) deg += in_i[x][y];
    f.i += deg;
    if (deg > 0) verts.push_back(x);
  }
  f.i /= 2;
  f.v = static_cast<int>(verts.size());

  std::vector<int> comp(n, -1);
  for (int s : verts) {
    if (comp[s] >= 0) continue;
    bool meets_s = false;
    std::vector<int> stack{s};
    comp[s] = f.c;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      meets_s = meets_s || t.is_internal(x);
      for (int y = 0; y < n; ++y) {
        if (in_i[x][y] && comp[y] < 0) {
          comp[y] = f.c;
          stack.push_back(y);
        }
      }
    }
    ++f.c;
    if (meets_s) ++f.c_S;
  }
  for (int x : verts) f.g += t.is_internal(x) ? 1 : 0;

  const int nv = f.v;
  for (int a = 0; a < nv; ++a)
    for (int b = a + 1; b < nv; ++b)
      for (int c = b + 1; c < nv; ++c)
        for (int d = c + 1; d < nv; ++d) {
          const int q[4] = {verts[a], verts[b], verts[c], verts[d]};
          bool clique = true;
          for (int x = 0; x < 4 && clique; ++x)
            for (int y = x + 1; y < 4 && clique; ++y) clique = in_i[q[x]][q[y]];
          if (clique) ++f.r;
        }

  for (int u : verts) {
    if (!t.is_internal(u)) continue;
    const auto& rot = t.rotation(u);
    bool full_rim = !rot.empty();
    for (std::size_t j = 0; j < rot.size(); ++j) full_rim = full_rim && in_i[rot[j]][rot[(j + 1) % rot.size()]];
    if (full_rim) continue;
    std::vector<int> nb;
    for (int x = 0; x < n; ++x)
      if (in_i[u][x]) nb.push_back(x);
    std::vector<char> seen(n, 0);
    for (int s : nb) {
      if (seen[s]) continue;
      ++f.t;
      std::vector<int> stack{s};
      seen[s] = 1;
      while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        for (int y : nb) {
          if (!seen[y] && in_i[x][y]) {
            seen[y] = 1;
            stack.push_back(y);
          }
        }
      }
    }
  }
  return f;
}

// ---------------------------------------------------------------------------

void EnumerationStats::merge(const EnumerationStats& other) {
  if (per_size.size() < other.per_size.size()) per_size.resize(other.per_size.size(), 0);
  for (std::size_t i = 0; i < other.per_size.size(); ++i) per_size[i] += other.per_size[i];
  total += other.total;
  aborted = aborted || other.aborted;
}

namespace {

// Include/exclude growth: the candidate list holds every allowed edge touching
// the current vertex set that is neither chosen nor excluded. Choosing the
// candidate at position p excludes positions < p for the whole subtree, which
// makes every connected edge set appear exactly once.
class EdgeGrower {
 public:
  EdgeGrower(const Triangulation& t, int max_edges, std::uint64_t budget, int min_vertex,
             const SubgraphVisitor& visit)
      : t_(t), max_edges_(max_edges), budget_(budget), min_vertex_(min_vertex), visit_(visit),
        vcount_(t.n(), 0), incident_(t.n()) {
    const auto& es = t.edges();
    for (int e = 0; e < static_cast<int>(es.size()); ++e) {
      incident_[es[e].u].push_back(e);
      incident_[es[e].v].push_back(e);
    }
    stats_.per_size.assign(max_edges + 1, 0);
  }

  EnumerationStats run(int root) {
    if (max_edges_ < 1) return stats_;
    vcount_[root] = 1;
    vertices_.push_back(root);
    std::vector<int> ext;
    for (int e : incident_[root]) {
      if (allowed(e)) ext.push_back(e);
    }
    grow(ext);
    return stats_;
  }

 private:
  bool allowed(int e) const {
    const auto& ed = t_.edges()[e];
    return ed.u >= min_vertex_ && ed.v >= min_vertex_;
  }

  void grow(const std::vector<int>& ext) {
    for (std::size_t p = 0; p < ext.size(); ++p) {
      if (stats_.aborted) return;
      const int e = ext[p];
      const auto& ed = t_.edges()[e];
      const int fresh = vcount_[ed.u] == 0 ? ed.u : (vcount_[ed.v] == 0 ? ed.v : -1);
      std::vector<int> next(ext.begin() + static_cast<long>(p) + 1, ext.end());
      edges_.push_back(e);
      ++vcount_[ed.u];
      ++vcount_[ed.v];
      if (fresh >= 0) {
        vertices_.push_back(fresh);
        for (int f : incident_[fresh]) {
          if (f == e || !allowed(f)) continue;
          const auto& fd = t_.edges()[f];
          const int other = fd.u == fresh ? fd.v : fd.u;
          if (vcount_[other] == 0) next.push_back(f);
        }
      }
      if (stats_.total >= budget_) {
        stats_.aborted = true;
      } else {
        ++stats_.total;
        ++stats_.per_size[edges_.size()];
        visit_(SubgraphView{edges_, vertices_});
        if (static_cast<int>(edges_.size()) < max_edges_) grow(next);
      }
      if (fresh >= 0) vertices_.pop_back();
      --vcount_[ed.u];
      --vcount_[ed.v];
      edges_.pop_back();
    }
  }

  const Triangulation& t_;
  int max_edges_;
  std::uint64_t budget_;
  int min_vertex_;
  const SubgraphVisitor& visit_;
  std::vector<int> vcount_;
  std::vector<std::vector<int>> incident_;
  std::vector<int> edges_;
  std::vector<int> vertices_;
  EnumerationStats stats_;
};

class VertexGrower {
 public:
  VertexGrower(const Triangulation& t, int max_vertices, std::uint64_t budget,
               const VertexSetVisitor& visit)
      : t_(t), max_vertices_(max_vertices), budget_(budget), visit_(visit),
        in_set_(t.n(), 0), nbr_count_(t.n(), 0) {
    stats_.per_size.assign(max_vertices + 1, 0);
  }

  EnumerationStats run(int root) {
    if (max_vertices_ < 1) return stats_;
    root_ = root;
    std::vector<int> ext{root};
    grow(ext, 0);
    return stats_;
  }

 private:
  void grow(const std::vector<int>& ext, int induced) {
    for (std::size_t p = 0; p < ext.size(); ++p) {
      if (stats_.aborted) return;
      const int w = ext[p];
      std::vector<int> next(ext.begin() + static_cast<long>(p) + 1, ext.end());
      const int gained = nbr_count_[w];
      in_set_[w] = 1;
      set_.push_back(w);
      for (int x : t_.rotation(w)) {
        if (x > root_ && !in_set_[x] && nbr_count_[x] == 0) next.push_back(x);
      }
      for (int x : t_.rotation(w)) ++nbr_count_[x];
      if (stats_.total >= budget_) {
        stats_.aborted = true;
      } else {
        ++stats_.total;
        ++stats_.per_size[set_.size()];
        visit_(set_, induced + gained);
        if (static_cast<int>(set_.size()) < max_vertices_) grow(next, induced + gained);
      }
      for (int x : t_.rotation(w)) --nbr_count_[x];
      set_.pop_back();
      in_set_[w] = 0;
    }
  }

  const Triangulation& t_;
  int max_vertices_;
  std::uint64_t budget_;
  const VertexSetVisitor& visit_;
  int root_ = 0;
  std::vector<char> in_set_;
  std::vector<int> nbr_count_;
  std::vector<int> set_;
  EnumerationStats stats_;
};

void check_vertex(const Triangulation& t, int v) {
  if (v < 0 || v >= t.n()) throw ParameterError("vertex " + std::to_string(v) + " out of range");
}

}  // namespace

EnumerationStats enumerate_connected_subgraphs(const Triangulation& t, int root, int max_edges,
                                               std::uint64_t budget, const SubgraphVisitor& visit) {
  check_vertex(t, root);
  return EdgeGrower(t, max_edges, budget, 0, visit).run(root);
}

EnumerationStats enumerate_connected_subgraphs_min_root(const Triangulation& t, int root,
                                                        int max_edges, std::uint64_t budget,
                                                        const SubgraphVisitor& visit) {
  check_vertex(t, root);
  return EdgeGrower(t, max_edges, budget, root, visit).run(root);
}

EnumerationStats enumerate_connected_vertex_sets_min_root(const Triangulation& t, int root,
                                                          int max_vertices, std::uint64_t budget,
                                                          const VertexSetVisitor& visit) {
  check_vertex(t, root);
  return VertexGrower(t, max_vertices, budget, visit).run(root);
}

RootedCounts rooted_subgraph_counts(const Triangulation& t, int max_edges, std::uint64_t budget,
                                    int workers) {
  const int n = t.n();
  std::vector<std::vector<std::vector<std::uint64_t>>> partial(n);
  std::vector<char> aborted(n, 0);
  parallel_for(n, workers, [&](int root) {
    auto& local = partial[root];
    local.assign(n, std::vector<std::uint64_t>(max_edges + 1, 0));
    const auto stats = enumerate_connected_subgraphs_min_root(
        t, root, max_edges, budget, [&](const SubgraphView& s) {
          for (int v : s.vertices) ++local[v][s.edges.size()];
        });
    aborted[root] = stats.aborted;
  });
  RootedCounts out;
  out.max_degree = t.max_degree();
  out.counts.assign(n, std::vector<std::uint64_t>(max_edges + 1, 0));
  for (int root = 0; root < n; ++root) {
    out.aborted = out.aborted || aborted[root];
    for (int v = 0; v < n; ++v)
      for (int i = 0; i <= max_edges; ++i) out.counts[v][i] += partial[root][v][i];
  }
  return out;
}

Comparison compare_below_e_power(std::uint64_t count, int delta, int i) {
  const BigInt scaled = BigInt(count) * pow_big(BigInt(kEulerDen), i);
  if (scaled < pow_big(BigInt(kEulerLow) * delta, i)) return Comparison::below;
  if (scaled >= pow_big(BigInt(kEulerHigh) * delta, i)) return Comparison::not_below;
  return Comparison::undecided;
}

// ---------------------------------------------------------------------------

CycleInterior::CycleInterior(const Triangulation& t)
    : t_(&t), fs_(trace_faces(t)), face_adj_(fs_.faces.size()), some_face_of_(t.n(), -1),
      edge_mark_(t.m(), 0), face_mark_(fs_.faces.size(), 0), vertex_mark_(t.n(), 0) {
  if (fs_.outer < 0) throw StructuralError("cycle interiors need an identified outer face");
  for (int f = 0; f < static_cast<int>(fs_.faces.size()); ++f) {
    const auto& face = fs_.faces[f];
    for (std::size_t j = 0; j < face.size(); ++j) {
      const int a = face[j], b = face[(j + 1) % face.size()];
      face_adj_[f].push_back({t.edge_id(a, b), fs_.face_left_of(b, a)});
      if (some_face_of_[a] < 0 && f != fs_.outer) some_face_of_[a] = f;
    }
  }
}

void CycleInterior::fill(CycleInfo& info) {
  const int gen = ++generation_;
  const int len = static_cast<int>(info.cycle.size());
  info.length = len;
  for (int j = 0; j < len; ++j) {
    edge_mark_[t_->edge_id(info.cycle[j], info.cycle[(j + 1) % len])] = gen;
    vertex_mark_[info.cycle[j]] = gen;
  }
  queue_.clear();
  queue_.push_back(fs_.outer);
  face_mark_[fs_.outer] = gen;
  for (std::size_t h = 0; h < queue_.size(); ++h) {
    for (const auto& [e, g] : face_adj_[queue_[h]]) {
      if (edge_mark_[e] == gen || face_mark_[g] == gen) continue;
      face_mark_[g] = gen;
      queue_.push_back(g);
    }
  }
  info.interior.clear();
  for (int v = 0; v < t_->n(); ++v) {
    if (vertex_mark_[v] == gen) continue;
    const int f = some_face_of_[v];
    if (f >= 0 && face_mark_[f] != gen) info.interior.push_back(v);
  }
  info.t_inside = static_cast<int>(info.interior.size());
  info.v_inside = len + info.t_inside;
}

EnumerationStats enumerate_simple_cycles_from(const Triangulation& t, int start, int max_len,
                                              std::uint64_t budget, CycleInterior& interior,
                                              const CycleVisitor& visit) {
  check_vertex(t, start);
  const int n = t.n();
  EnumerationStats stats;
  stats.per_size.assign(std::max(max_len, 0) + 1, 0);
  if (max_len < 3) return stats;

  // Distance back to start through vertices >= start: a lower bound on the
  // remaining closing length.
  std::vector<int> dist(n, -1);
  {
    std::vector<int> q{start};
    dist[start] = 0;
    for (std::size_t h = 0; h < q.size(); ++h) {
      for (int y : t.rotation(q[h])) {
        if (y < start || dist[y] >= 0) continue;
        dist[y] = dist[q[h]] + 1;
        q.push_back(y);
      }
    }
  }

  std::vector<char> on_path(n, 0);
  CycleInfo info;
  std::vector<int>& path = info.cycle;
  path.push_back(start);
  on_path[start] = 1;

  std::function<void(int)> extend = [&](int x) {
    if (stats.aborted) return;
    const int len = static_cast<int>(path.size());
    for (int y : t.rotation(x)) {
      if (stats.aborted) return;
      if (y == start) {
        if (len >= 3 && path[1] < path.back()) {
          if (stats.total >= budget) {
            stats.aborted = true;
            return;
          }
          ++stats.total;
          ++stats.per_size[len];
          interior.fill(info);
          visit(info);
        }
        continue;
      }
      if (y < start || on_path[y] || dist[y] < 0) continue;
      if (len + dist[y] > max_len) continue;  // len edges after adding y, then dist[y] back
      on_path[y] = 1;
      path.push_back(y);
      extend(y);
      path.pop_back();
      on_path[y] = 0;
    }
  };
  extend(start);
  return stats;
}

EnumerationStats enumerate_simple_cycles(const Triangulation& t, int max_len, std::uint64_t budget,
                                         const CycleVisitor& visit) {
  CycleInterior interior(t);
  EnumerationStats total;
  total.per_size.assign(std::max(max_len, 0) + 1, 0);
  for (int s = 0; s < t.n(); ++s) {
    const std::uint64_t left = budget > total.total ? budget - total.total : 0;
    total.merge(enumerate_simple_cycles_from(t, s, max_len, left, interior, visit));
    if (total.aborted) break;
  }
  return total;
}

// ---------------------------------------------------------------------------

std::vector<CountBoundRow> count_bound_check_subgraphs(const Triangulation& t,
                                                       const std::vector<int>& j_edges, int i,
                                                       int ell, std::uint64_t budget) {
  const int j = static_cast<int>(j_edges.size());
  if (i < 1 || i > j) throw ParameterError("need 1 <= i <= |J|");
  const BigInt subsets = binomial(j, i);
  if (subsets > BigInt(budget)) {
    throw BudgetExceeded("C(" + std::to_string(j) + "," + std::to_string(i) + ") subsets exceed the budget");
  }
  FragmentCalculator calc(t);
  std::map<std::pair<int, int>, BigInt> tally;
  std::vector<int> idx(i);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<int> chosen(i);
  for (;;) {
    for (int a = 0; a < i; ++a) chosen[a] = j_edges[idx[a]];
    const Fragment f = calc(chosen);
    tally[{f.c, f.t}] += 1;
    int a = i - 1;
    while (a >= 0 && idx[a] == j - i + a) --a;
    if (a < 0) break;
    ++idx[a];
    for (int b = a + 1; b < i; ++b) idx[b] = idx[b - 1] + 1;
  }
  std::vector<CountBoundRow> rows;
  const BigInt den = pow_big(BigInt(kEulerDen), i);
  for (const auto& [key, count] : tally) {
    CountBoundRow row;
    row.i = i;
    row.c = key.first;
    row.t = key.second;
    row.count = count;
    const BigInt numer = pow_big(BigInt(2048) * kEulerLow, i) * binomial(2 * j, key.first) *
                         pow_big(BigInt(ell), key.second);
    row.bound_floor = numer / den;
    row.holds = count * den <= numer;
    rows.push_back(std::move(row));
  }
  return rows;
}

FragmentHistogram fragment_histogram(const Triangulation& t, int max_edges, std::uint64_t budget,
                                     int workers, bool* aborted) {
  const int n = t.n();
  std::vector<FragmentHistogram> partial(n);
  std::vector<char> flag(n, 0);
  parallel_for(n, workers, [&](int root) {
    FragmentCalculator calc(t);
    auto& h = partial[root];
    const auto stats = enumerate_connected_subgraphs_min_root(
        t, root, max_edges, budget, [&](const SubgraphView& s) { ++h[calc(s.edges)]; });
    flag[root] = stats.aborted;
  });
  FragmentHistogram out;
  bool any = false;
  std::uint64_t total = 0;
  for (int root = 0; root < n; ++root) {
    any = any || flag[root];
    for (const auto& [f, count] : partial[root]) {
      out[f] += count;
      total += count;
    }
  }
  if (total > budget) any = true;
  if (aborted) *aborted = any;
  return out;
}

void write_histogram_csv(std::ostream& os, const FragmentHistogram& hist) {
  os << "i,v,c,c_S,g,r,t,count\n";
  for (const auto& [f, count] : hist) {
    os << f.i << ',' << f.v << ',' << f.c << ',' << f.c_S << ',' << f.g << ',' << f.r << ',' << f.t
       << ',' << count << '\n';
  }
}

}  // namespace spantri
