#include "spantri/spread.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "spantri/errors.hpp"
#include "spantri/verifier.hpp"

namespace spantri {

namespace {

constexpr int kMaxTableN = 10;

// sqrt(pi) brackets.
const Rational kSqrtPiLow(BigInt(17724538509LL), BigInt(10000000000LL));
const Rational kSqrtPiHigh(BigInt(17724538510LL), BigInt(10000000000LL));

std::string describe(const std::vector<Edge>& pairs) {
  std::ostringstream os;
  for (std::size_t j = 0; j < pairs.size(); ++j) os << (j ? " " : "") << pairs[j].u << "-" << pairs[j].v;
  return os.str();
}

double as_double(const BigInt& x) { return x.convert_to<double>(); }

// Every subset of E(T) with 1..max_edges edges, as edge-index masks.
template <class Visit>
void for_each_fragment(int m, int max_edges, Visit&& visit) {
  for (int size = 1; size <= std::min(m, max_edges); ++size) {
    std::uint64_t mask = (std::uint64_t{1} << size) - 1;
    const std::uint64_t limit = std::uint64_t{1} << m;
    while (mask < limit) {
      visit(mask);
      const std::uint64_t low = mask & (~mask + 1);
      const std::uint64_t ripple = mask + low;
      mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
  }
}

std::vector<Edge> pairs_of_mask(const Triangulation& t, std::uint64_t mask) {
  std::vector<Edge> out;
  for (int e = 0; e < t.m(); ++e)
    if (mask >> e & 1) out.push_back(t.edges()[e]);
  return out;
}

// Components of I that contain a 4-clique of I.
int components_with_k4(const Triangulation& t, const std::vector<Edge>& pairs) {
  const int n = t.n();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& e : pairs) {
    adj[e.u][e.v] = adj[e.v][e.u] = 1;
    parent[find(e.u)] = find(e.v);
  }
  std::vector<char> has(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (adj[a][b])
        for (int c = b + 1; c < n; ++c)
          if (adj[a][c] && adj[b][c])
            for (int d = c + 1; d < n; ++d)
              if (adj[a][d] && adj[b][d] && adj[c][d]) has[find(a)] = 1;
  return static_cast<int>(std::count(has.begin(), has.end(), 1));
}

SpreadCheck make_check(std::string id, std::string statement) {
  SpreadCheck c;
  c.id = std::move(id);
  c.statement = std::move(statement);
  return c;
}

void finish(SpreadReport& r) {
  r.passed = true;
  for (const auto& c : r.checks)
    if (c.applicable && c.violations > 0) r.passed = false;
}

SpreadReport base_report(const SpreadOracle& o, const std::string& mode) {
  SpreadReport r;
  r.mode = mode;
  r.n = o.n();
  r.m = o.triangulation().m();
  r.automorphisms = o.automorphisms();
  r.copies = o.copies();
  return r;
}

void record(SpreadCheck& c, bool ok, double ratio, const std::function<std::string()>& what) {
  ++c.checked;
  if (!ok) ++c.violations;
  if (c.worst.empty() || ratio > c.worst_ratio) {
    c.worst_ratio = ratio;
    c.worst = what();
  }
}

}  // namespace

int pair_index(int n, int a, int b) {
  if (a > b) std::swap(a, b);
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

BigInt automorphism_count(const Triangulation& t, std::uint64_t budget) {
  const int n = t.n();
  // BFS order so each vertex after the first has an already placed neighbour.
  std::vector<int> order{0};
  std::vector<char> seen(n, 0);
  seen[0] = 1;
  for (std::size_t h = 0; h < order.size(); ++h)
    for (int y : t.rotation(order[h]))
      if (!seen[y]) {
        seen[y] = 1;
        order.push_back(y);
      }
  for (int v = 0; v < n; ++v)
    if (!seen[v]) order.push_back(v);
  std::vector<int> image(n, -1);
  std::vector<char> used(n, 0);
  std::uint64_t nodes = 0;
  BigInt count = 0;
  std::function<void(int)> place = [&](int pos) {
    if (pos == n) {
      count += 1;
      return;
    }
    const int x = order[pos];
    for (int y = 0; y < n; ++y) {
      if (used[y] || t.degree(y) != t.degree(x)) continue;
      if (++nodes > budget) throw BudgetExceeded("automorphism search exceeded " + std::to_string(budget) + " nodes");
      bool ok = true;
      for (int p = 0; p < pos && ok; ++p) {
        const int z = order[p];
        ok = t.has_edge(x, z) == t.has_edge(y, image[z]);
      }
      if (!ok) continue;
      image[x] = y;
      used[y] = 1;
      place(pos + 1);
      used[y] = 0;
      image[x] = -1;
    }
  };
  place(0);
  return count;
}

BigInt automorphism_count_bruteforce(const Triangulation& t) {
  const int n = t.n();
  if (n > kMaxTableN) throw BudgetExceeded("permutation brute force limited to n <= 10");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  BigInt count = 0;
  do {
    bool ok = true;
    for (const auto& e : t.edges()) {
      if (!t.has_edge(perm[e.u], perm[e.v])) {
        ok = false;
        break;
      }
    }
    if (ok) count += 1;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

SpreadOracle::SpreadOracle(const Triangulation& t) : t_(t), n_(t.n()) {
  if (n_ > kMaxTableN) {
    throw BudgetExceeded("copy table needs n <= " + std::to_string(kMaxTableN) + ", got n = " + std::to_string(n_));
  }
  aut_ = automorphism_count(t);
  adjacent_.assign(n_, std::vector<char>(n_, 0));
  for (const auto& e : t.edges()) {
    adjacent_[e.u][e.v] = adjacent_[e.v][e.u] = 1;
    identity_ |= std::uint64_t{1} << pair_index(n_, e.u, e.v);
  }
  std::vector<int> perm(n_);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::uint64_t> all;
  all.reserve(static_cast<std::size_t>(factorial(n_)));
  do {
    std::uint64_t mask = 0;
    for (const auto& e : t.edges()) mask |= std::uint64_t{1} << pair_index(n_, perm[e.u], perm[e.v]);
    all.push_back(mask);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  copies_ = std::move(all);
  if (BigInt(copies_.size()) * aut_ != factorial(n_)) {
    throw ConsistencyError("|H| * |Aut| != n!: " + std::to_string(copies_.size()) + " copies, |Aut| = " + aut_.str());
  }
}

std::uint64_t SpreadOracle::mask_of(const std::vector<Edge>& pairs) const {
  std::uint64_t mask = 0;
  for (const auto& e : pairs) {
    if (e.u == e.v || e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_) {
      throw ParameterError("pair " + std::to_string(e.u) + "-" + std::to_string(e.v) + " is not an edge of K_n");
    }
    mask |= std::uint64_t{1} << pair_index(n_, e.u, e.v);
  }
  return mask;
}

std::uint64_t SpreadOracle::count_by_copies(std::uint64_t mask) const {
  std::uint64_t count = 0;
  for (std::uint64_t c : copies_) count += (c & mask) == mask ? 1 : 0;
  return count;
}

BigInt SpreadOracle::count_by_embedding(const std::vector<Edge>& pairs) const {
  // Vertices of I in BFS order per component; psi maps them into T.
  std::vector<std::vector<int>> nbr(n_);
  std::vector<char> in_i(n_, 0);
  for (const auto& e : pairs) {
    if (e.u == e.v) throw ParameterError("loop in fragment");
    nbr[e.u].push_back(e.v);
    nbr[e.v].push_back(e.u);
    in_i[e.u] = in_i[e.v] = 1;
  }
  std::vector<int> order;
  std::vector<int> parent(n_, -1);
  std::vector<char> seen(n_, 0);
  for (int r = 0; r < n_; ++r) {
    if (!in_i[r] || seen[r]) continue;
    seen[r] = 1;
    const std::size_t first = order.size();
    order.push_back(r);
    for (std::size_t h = first; h < order.size(); ++h)
      for (int y : nbr[order[h]])
        if (!seen[y]) {
          seen[y] = 1;
          parent[y] = order[h];
          order.push_back(y);
        }
  }
  const int v = static_cast<int>(order.size());
  std::vector<int> psi(n_, -1);
  std::vector<char> used(n_, 0);
  BigInt placements = 0;
  std::function<void(int)> place = [&](int pos) {
    if (pos == v) {
      placements += 1;
      return;
    }
    const int x = order[pos];
    auto try_target = [&](int y) {
      if (used[y]) return;
      for (int z : nbr[x])
        if (psi[z] >= 0 && !adjacent_[y][psi[z]]) return;
      psi[x] = y;
      used[y] = 1;
      place(pos + 1);
      used[y] = 0;
      psi[x] = -1;
    };
    if (parent[x] >= 0) {
      for (int y : t_.rotation(psi[parent[x]])) try_target(y);
    } else {
      for (int y = 0; y < n_; ++y) try_target(y);
    }
  };
  place(0);
  const BigInt perms = placements * factorial(n_ - v);
  if (perms % aut_ != 0) throw ConsistencyError("placement count not divisible by |Aut(T)|");
  return perms / aut_;
}

std::uint64_t SpreadOracle::count_extensions(const std::vector<Edge>& pairs) const {
  const std::uint64_t by_table = count_by_copies(mask_of(pairs));
  const BigInt by_embedding = count_by_embedding(pairs);
  if (BigInt(by_table) != by_embedding) {
    throw ConsistencyError("extension counts disagree for {" + describe(pairs) + "}: copy scan " +
                           std::to_string(by_table) + ", embedding " + by_embedding.str());
  }
  return by_table;
}

std::uint64_t SpreadOracle::copies_meeting(std::uint64_t a_mask, int i) const {
  std::uint64_t count = 0;
  for (std::uint64_t c : copies_) count += __builtin_popcountll(c & a_mask) >= i ? 1 : 0;
  return count;
}

std::vector<int> default_spiro_levels(int m, int n) {
  std::vector<int> levels;
  for (int j = 0; j <= 5; ++j) {
    const int level = static_cast<int>(std::floor(m / std::pow(static_cast<double>(n), j / 5.0) + 1e-9));
    if (level >= 1 && (levels.empty() || level < levels.back())) levels.push_back(level);
  }
  if (levels.empty() || levels.back() != 1) levels.push_back(1);
  return levels;
}

std::pair<Rational, Rational> half_factorial_bounds(int half) {
  if (half < 0) throw ParameterError("factorial of a negative number");
  if (half % 2 == 0) {
    const Rational f(factorial(half / 2));
    return {f, f};
  }
  // Gamma(y + 3/2) = (2y + 2)! / (4^(y+1) (y+1)!) sqrt(pi), y = (half - 1)/2.
  const unsigned y = static_cast<unsigned>((half - 1) / 2);
  const Rational base(factorial(2 * y + 2), pow_big(BigInt(4), y + 1) * factorial(y + 1));
  return {base * kSqrtPiLow, base * kSqrtPiHigh};
}

// ---------------------------------------------------------------------------

namespace {

// count <= q^i |H|, exactly.
bool within_qspread(std::uint64_t count, const Rational& q, int i, std::uint64_t h) {
  return Rational(count) <= pow_rat(q, i) * h;
}

// count <= q^i m^(-beta c) |H|  <=>  count^b m^(a c) <= (q^i |H|)^b with beta = a/b.
bool within_superspread(std::uint64_t count, const Rational& q, const Rational& beta, int i, int c, int m,
                        std::uint64_t h) {
  const BigInt a = numerator(beta), b = denominator(beta);
  const unsigned bb = static_cast<unsigned>(b);
  const Rational lhs = pow_rat(Rational(count), bb) * Rational(pow_big(BigInt(m), static_cast<unsigned>(a) * c));
  const Rational rhs = pow_rat(pow_rat(q, i) * h, bb);
  return lhs <= rhs;
}

}  // namespace

SpreadReport check_qspread(const SpreadOracle& o, const SpreadOptions& opts) {
  const auto& t = o.triangulation();
  SpreadReport r = base_report(o, "qspread");
  r.parameters = {{"q", to_string(opts.q)}, {"max_fragment_edges", std::to_string(opts.max_fragment_edges)}};
  SpreadCheck qs = make_check("qspread", "|H ∩ <I>| <= q^|I| |H|");
  double measured = 0;
  std::string measured_at;
  for_each_fragment(t.m(), opts.max_fragment_edges, [&](std::uint64_t mask) {
    const auto pairs = pairs_of_mask(t, mask);
    const int i = static_cast<int>(pairs.size());
    const std::uint64_t count = o.count_extensions(pairs);
    const double ratio = static_cast<double>(count) / (to_double(pow_rat(opts.q, i)) * o.copies());
    record(qs, within_qspread(count, opts.q, i, o.copies()), ratio, [&] { return describe(pairs); });
    const double spread = std::pow(static_cast<double>(count) / o.copies(), 1.0 / i);
    if (spread > measured) {
      measured = spread;
      measured_at = describe(pairs);
    }
  });
  std::ostringstream ms;
  ms.precision(6);
  ms << measured;
  r.parameters.emplace_back("measured_spread", ms.str());
  r.parameters.emplace_back("measured_at", measured_at);
  r.checks.push_back(qs);
  finish(r);
  return r;
}

SpreadReport check_superspread(const SpreadOracle& o, const SpreadOptions& opts) {
  const auto& t = o.triangulation();
  SpreadReport r = check_qspread(o, opts);
  r.mode = "superspread";
  r.parameters.emplace_back("beta", to_string(opts.beta));
  r.parameters.emplace_back("delta", to_string(opts.delta));
  // The spread constant the density condition gives for this instance, d = max degree, C_2 = max(1, m/n).
  {
    const DensityParams dp = default_density_params(t);
    const double qd = to_double(dp.q), eps = to_double(dp.eps);
    const double c2 = std::max(1.0, static_cast<double>(t.m()) / t.n());
    const double implied = 8.0 * t.max_degree() * std::pow(c2, eps) * std::exp(eps + 1.0 / qd) *
                         std::pow(static_cast<double>(t.n()), -1.0 / qd);
    std::ostringstream os;
    os.precision(6);
    os << implied;
    r.parameters.emplace_back("density_spread_q", os.str());
  }
  SpreadCheck ss = make_check("superspread", "|H ∩ <I>| <= q^|I| m^(-beta c_I) |H| for |I| <= delta m");
  const Rational cap = opts.delta * t.m();
  FragmentCalculator calc(t);
  for_each_fragment(t.m(), opts.max_fragment_edges, [&](std::uint64_t mask) {
    const auto pairs = pairs_of_mask(t, mask);
    const int i = static_cast<int>(pairs.size());
    if (Rational(i) > cap) return;
    const Fragment f = calc(edge_ids(t, pairs));
    const std::uint64_t count = o.count_extensions(pairs);
    const double bound = to_double(pow_rat(opts.q, i)) * std::pow(t.m(), -to_double(opts.beta) * f.c) * o.copies();
    record(ss, within_superspread(count, opts.q, opts.beta, i, f.c, t.m(), o.copies()), count / bound,
           [&] { return describe(pairs); });
  });
  r.checks.push_back(ss);
  finish(r);
  return r;
}

SpreadReport check_spiro_spread(const SpreadOracle& o, const SpreadOptions& opts) {
  const auto& t = o.triangulation();
  SpreadReport r = base_report(o, "spiro");
  const std::vector<int> levels = opts.levels.empty() ? default_spiro_levels(t.m(), t.n()) : opts.levels;
  for (std::size_t j = 1; j < levels.size(); ++j) {
    if (levels[j] >= levels[j - 1]) throw ParameterError("levels must be strictly decreasing");
  }
  std::ostringstream ls;
  for (std::size_t j = 0; j < levels.size(); ++j) ls << (j ? "," : "") << levels[j];
  r.parameters = {{"q", to_string(opts.q)},
                  {"levels", ls.str()},
                  {"max_fragment_edges", std::to_string(opts.max_fragment_edges)}};
  SpreadCheck sp = make_check("spiro", "M_i(A) <= q^i |H| for l_{t'} >= |A| >= l_{t'+1}, i >= l_{t'+1}");
  for_each_fragment(t.m(), opts.max_fragment_edges, [&](std::uint64_t mask) {
    const auto pairs = pairs_of_mask(t, mask);
    const int size = static_cast<int>(pairs.size());
    const std::uint64_t a_mask = o.mask_of(pairs);
    // Smallest lower level that applies to |A|.
    int low = -1;
    for (std::size_t j = 0; j + 1 < levels.size(); ++j)
      if (levels[j] >= size && size >= levels[j + 1]) low = std::max(low, levels[j + 1]);
    if (low < 0) return;
    for (int i = low; i <= size; ++i) {
      const std::uint64_t hits = o.copies_meeting(a_mask, i);
      const double ratio = static_cast<double>(hits) / (to_double(pow_rat(opts.q, i)) * o.copies());
      record(sp, within_qspread(hits, opts.q, i, o.copies()), ratio,
             [&] { return describe(pairs) + " i=" + std::to_string(i); });
    }
  });
  r.checks.push_back(sp);
  finish(r);
  return r;
}

SpreadReport check_extension_bounds(const SpreadOracle& o, const SpreadOptions& opts) {
  const auto& t = o.triangulation();
  const int n = t.n(), m = t.m(), s = t.s();
  SpreadReport r = base_report(o, "bounds");
  const int d = t.max_degree();
  r.parameters = {{"d", std::to_string(d)}, {"max_fragment_edges", std::to_string(opts.max_fragment_edges)}};

  SpreadCheck identity = make_check("copies_times_aut", "|H| |Aut(T)| = n!");
  record(identity, BigInt(o.copies()) * o.automorphisms() == factorial(n), 0, [] { return std::string(); });
  SpreadCheck extremes = make_check("empty_and_full", "|H ∩ <{}>| = |H| and |H ∩ <T>| = 1");
  record(extremes, o.count_by_copies(0) == o.copies() && o.count_by_copies(o.identity_mask()) == 1 &&
                       o.count_by_embedding({}) == BigInt(o.copies()),
         0, [] { return std::string(); });
  SpreadCheck edge_sum = make_check("edge_sum", "sum over pairs e of |H ∩ <{e}>| = m |H|");
  {
    BigInt sum = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) sum += o.count_extensions({{a, b}});
    record(edge_sum, sum == BigInt(m) * o.copies(), 0, [] { return std::string(); });
  }

  SpreadCheck general = make_check("general_extension", "|H ∩ <I>| <= (2d)^|I| / |Aut(T)| (n - v(I) + c)!");
  SpreadCheck dense = make_check("k4_regime", "|H ∩ <I>| <= 10^|I| / |Aut(T)| s^c_K (n - v(I) + c - c_K)!, c_K = components with a 4-clique");
  SpreadCheck wheel = make_check("wheel_regime", "|H ∩ <I>| <= 10^i l^t (n - i/2 - t/2 - (c - c_S)/2)!");
  SpreadCheck wheel_mid = make_check("wheel_regime_intermediate", "|H ∩ <I>| <= 10^i l^t (n - v + c)!");
  SpreadCheck monotone = make_check("monotone", "adding an edge never increases |H ∩ <I>|");
  if (d > 5 || s < 1) {
    dense.applicable = false;
    dense.note = d > 5 ? "max degree above 5" : "no internal vertices";
  }
  const std::string wheel_problem = s < 1 ? "no internal vertices" : wheel_structure_problem(t);
  int ell = 0;
  int other_degree = 0;
  for (int v = 0; v < n; ++v) {
    if (t.is_internal(v)) ell = std::max(ell, t.degree(v));
    else other_degree = std::max(other_degree, t.degree(v));
  }
  if (!wheel_problem.empty() || other_degree > 5) {
    wheel.applicable = wheel_mid.applicable = false;
    wheel.note = wheel_mid.note = wheel_problem.empty() ? "a non-hub vertex has degree above 5" : wheel_problem;
  }
  r.parameters.emplace_back("l", std::to_string(ell));

  FragmentCalculator calc(t);
  std::map<Fragment, ExtensionRow> rows;
  std::map<std::uint64_t, std::uint64_t> counts;  // mask -> count, for the monotone check
  for_each_fragment(m, opts.max_fragment_edges, [&](std::uint64_t mask) {
    const auto pairs = pairs_of_mask(t, mask);
    const int i = static_cast<int>(pairs.size());
    const Fragment f = calc(edge_ids(t, pairs));
    const std::uint64_t count = o.count_extensions(pairs);
    counts[mask] = count;
    auto& row = rows[f];
    row.params = f;
    ++row.fragments;
    row.max_count = std::max(row.max_count, count);
    auto what = [&] { return describe(pairs) + " " + to_string(f); };

    {
      const BigInt perms = pow_big(BigInt(2 * d), i) * factorial(n - f.v + f.c);
      const BigInt lhs = BigInt(count) * o.automorphisms();
      record(general, lhs <= perms, as_double(lhs) / as_double(perms), what);
    }
    if (dense.applicable) {
      const int ck = components_with_k4(t, pairs);
      const BigInt perms = pow_big(BigInt(10), i) * pow_big(BigInt(s), ck) * factorial(n - f.v + f.c - ck);
      const BigInt lhs = BigInt(count) * o.automorphisms();
      record(dense, lhs <= perms, as_double(lhs) / as_double(perms), what);
    }
    if (wheel.applicable) {
      const BigInt front = pow_big(BigInt(10), i) * pow_big(BigInt(ell), f.t);
      const BigInt mid = front * factorial(n - f.v + f.c);
      record(wheel_mid, BigInt(count) <= mid, static_cast<double>(count) / as_double(mid), what);
      const int half = 2 * n - f.i - f.t - (f.c - f.c_S);
      const auto [low, high] = half_factorial_bounds(half);
      const bool ok = Rational(count) <= low * front;
      if (!ok && Rational(count) <= high * front) {
        throw ConsistencyError("half-integer factorial bracket too wide for " + what());
      }
      record(wheel, ok, static_cast<double>(count) / to_double(low * front), what);
    }
  });
  // Monotone: every fragment against each of its one-edge-smaller subsets.
  for (const auto& [mask, count] : counts) {
    for (int e = 0; e < m; ++e) {
      if (!(mask >> e & 1)) continue;
      const std::uint64_t smaller = mask & ~(std::uint64_t{1} << e);
      const std::uint64_t base = smaller == 0 ? o.copies() : counts.at(smaller);
      record(monotone, count <= base, base == 0 ? 0.0 : static_cast<double>(count) / base,
             [&] { return describe(pairs_of_mask(t, mask)); });
    }
  }
  r.checks = {identity, extremes, edge_sum, general, dense, wheel_mid, wheel, monotone};
  for (auto& [f, row] : rows) r.rows.push_back(row);
  finish(r);
  return r;
}

}  // namespace spantri
