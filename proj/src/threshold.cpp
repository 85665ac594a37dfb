#include "spantri/threshold.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "spantri/constructors.hpp"
#include "spantri/errors.hpp"
#include "spantri/parallel.hpp"

namespace spantri {

Graph::Graph(int n) : n_(n), words_((n + 63) / 64) {
  if (n < 0) throw ParameterError("negative vertex count");
  bits_.assign(static_cast<std::size_t>(n) * words_, 0);
}

void Graph::add_edge(int u, int v) {
  if (u == v || u < 0 || v < 0 || u >= n_ || v >= n_) throw ParameterError("bad edge");
  bits_[static_cast<std::size_t>(u) * words_ + (v >> 6)] |= std::uint64_t{1} << (v & 63);
  bits_[static_cast<std::size_t>(v) * words_ + (u >> 6)] |= std::uint64_t{1} << (u & 63);
}

int Graph::degree(int v) const {
  int d = 0;
  for (int w = 0; w < words_; ++w) d += std::popcount(row(v)[w]);
  return d;
}

std::uint64_t Graph::edge_count() const {
  std::uint64_t total = 0;
  for (int v = 0; v < n_; ++v) total += degree(v);
  return total / 2;
}

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) { return mix_seed(mix_seed(seed) ^ mix_seed(~index)); }

Graph sample_gnp(int n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p must lie in [0, 1]");
  Graph g(n);
  std::mt19937_64 rng(seed);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (uniform01(rng) < p) g.add_edge(u, v);
  return g;
}

// ---------------------------------------------------------------------------

std::vector<int> search_order(const Triangulation& t) {
  const int n = t.n();
  std::vector<int> order;
  std::vector<int> placed_nbrs(n, 0);
  std::vector<char> placed(n, 0);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (placed[v]) continue;
      if (best < 0 || placed_nbrs[v] > placed_nbrs[best] ||
          (placed_nbrs[v] == placed_nbrs[best] && t.degree(v) > t.degree(best)))
        best = v;
    }
    placed[best] = 1;
    order.push_back(best);
    for (int w : t.rotation(best)) ++placed_nbrs[w];
  }
  return order;
}

namespace {

class Embedder {
 public:
  Embedder(const Graph& g, const Triangulation& t, std::uint64_t budget) : g_(g), t_(t), n_(t.n()), budget_(budget) {
    order_ = search_order(t);
    pos_.assign(n_, 0);
    for (int i = 0; i < n_; ++i) pos_[order_[i]] = i;
    adj_.assign(n_, 0);
    for (int v = 0; v < n_; ++v) adj_[v] = g.row(v)[0];
    std::vector<int> gdeg(n_);
    for (int v = 0; v < n_; ++v) gdeg[v] = std::popcount(adj_[v]);
    fits_.assign(n_, 0);
    for (int x = 0; x < n_; ++x)
      for (int v = 0; v < n_; ++v)
        if (gdeg[v] >= t.degree(x)) fits_[x] |= std::uint64_t{1} << v;
    back_.resize(n_);
    for (int i = 0; i < n_; ++i)
      for (int y : t.rotation(order_[i]))
        if (pos_[y] < i) back_[i].push_back(y);
    phi_.assign(n_, -1);
  }

  ContainmentResult run() {
    ContainmentResult r;
    try {
      const bool found = place(0, 0);
      r.outcome = found ? SearchOutcome::found : SearchOutcome::absent;
      if (found) r.embedding = phi_;
    } catch (const BudgetExceeded&) {
      r.outcome = SearchOutcome::inconclusive;
    }
    r.nodes = nodes_;
    return r;
  }

 private:
  std::uint64_t candidates(int x, std::uint64_t used) const {
    std::uint64_t c = fits_[x] & ~used;
    for (int y : t_.rotation(x))
      if (phi_[y] >= 0) c &= adj_[phi_[y]];
    return c;
  }

  bool place(int i, std::uint64_t used) {
    if (i == n_) return true;
    const int x = order_[i];
    std::uint64_t cand = fits_[x] & ~used;
    for (int y : back_[i]) cand &= adj_[phi_[y]];
    while (cand) {
      if (++nodes_ > budget_) throw BudgetExceeded("search budget");
      const int v = std::countr_zero(cand);
      cand &= cand - 1;
      phi_[x] = v;
      const std::uint64_t now = used | (std::uint64_t{1} << v);
      bool alive = true;
      for (int z : t_.rotation(x)) {
        if (phi_[z] < 0 && candidates(z, now) == 0) {
          alive = false;
          break;
        }
      }
      if (alive && place(i + 1, now)) return true;
      phi_[x] = -1;
    }
    return false;
  }

  const Graph& g_;
  const Triangulation& t_;
  int n_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<int> order_, pos_, phi_;
  std::vector<std::uint64_t> adj_, fits_;
  std::vector<std::vector<int>> back_;
};

}  // namespace

ContainmentResult contains_copy(const Graph& g, const Triangulation& t, std::uint64_t budget) {
  if (g.n() != t.n()) throw ParameterError("graph and triangulation differ in order");
  if (t.n() > 64) throw ParameterError("containment search supports n <= 64");
  ContainmentResult r;
  if (g.edge_count() < static_cast<std::uint64_t>(t.m())) return r;
  // A spanning copy needs the sorted degree sequence of G to dominate T's.
  std::vector<int> dg(t.n()), dt(t.n());
  for (int v = 0; v < t.n(); ++v) {
    dg[v] = g.degree(v);
    dt[v] = t.degree(v);
  }
  std::sort(dg.rbegin(), dg.rend());
  std::sort(dt.rbegin(), dt.rend());
  for (int j = 0; j < t.n(); ++j)
    if (dg[j] < dt[j]) return r;
  r = Embedder(g, t, budget).run();
  if (r.outcome == SearchOutcome::found && !embedding_valid(g, t, r.embedding))
    throw ConsistencyError("containment search returned an invalid embedding");
  return r;
}

bool embedding_valid(const Graph& g, const Triangulation& t, const std::vector<int>& phi) {
  if (static_cast<int>(phi.size()) != t.n() || g.n() != t.n()) return false;
  std::vector<char> hit(g.n(), 0);
  for (int v : phi) {
    if (v < 0 || v >= g.n() || hit[v]) return false;
    hit[v] = 1;
  }
  for (const auto& e : t.edges())
    if (!g.has_edge(phi[e.u], phi[e.v])) return false;
  return true;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(trials), x = static_cast<double>(successes);
  const double z2 = z * z;
  const double centre = (x + z2 / 2) / (nn + z2);
  const double half = z / (nn + z2) * std::sqrt(x * (nn - x) / nn + z2 / 4);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

// ---------------------------------------------------------------------------

namespace {

struct TrialOutcome {
  SearchOutcome outcome = SearchOutcome::absent;
  std::uint64_t inconclusive = 0;
};

TrialOutcome run_trial(const Triangulation& t, double p, std::uint64_t seed, std::uint64_t trial,
                       const SimulationOptions& opts) {
  TrialOutcome r;
  const std::uint64_t base = stream_seed(seed, trial);
  for (int draw = 0; draw <= opts.max_redraws; ++draw) {
    const std::uint64_t s = draw == 0 ? base : stream_seed(base, static_cast<std::uint64_t>(draw));
    const auto res = contains_copy(sample_gnp(t.n(), p, s), t, opts.search_budget);
    r.outcome = res.outcome;
    if (res.outcome != SearchOutcome::inconclusive) return r;
    ++r.inconclusive;
  }
  return r;
}

void merge(ContainmentEstimate& into, const ContainmentEstimate& more, double z) {
  into.trials += more.trials;
  into.successes += more.successes;
  into.inconclusive += more.inconclusive;
  into.dropped += more.dropped;
  const std::uint64_t counted = into.trials - into.dropped;
  into.p_hat = counted ? static_cast<double>(into.successes) / counted : 0.0;
  into.ci = wilson_interval(into.successes, counted, z);
  into.unreliable = into.inconclusive * 100 > into.trials;
}

}  // namespace

ContainmentEstimate estimate_containment_prob(const Triangulation& t, double p, std::uint64_t trials,
                                              std::uint64_t seed, const SimulationOptions& opts,
                                              std::uint64_t first_trial) {
  if (trials < 1) throw ParameterError("trials must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p must lie in [0, 1]");
  std::vector<TrialOutcome> slots(trials);
  parallel_for(static_cast<int>(trials), opts.workers,
               [&](int j) { slots[j] = run_trial(t, p, seed, first_trial + j, opts); });
  ContainmentEstimate part;
  part.p = p;
  part.trials = trials;
  for (const auto& s : slots) {
    part.inconclusive += s.inconclusive;
    if (s.outcome == SearchOutcome::found) ++part.successes;
    if (s.outcome == SearchOutcome::inconclusive) ++part.dropped;
  }
  ContainmentEstimate r;
  r.p = p;
  merge(r, part, opts.z);
  return r;
}

std::vector<std::vector<SearchOutcome>> coupled_outcomes(const Triangulation& t, const std::vector<double>& ps,
                                                         std::uint64_t trials, std::uint64_t seed,
                                                         const SimulationOptions& opts) {
  std::vector<std::vector<SearchOutcome>> rows(trials, std::vector<SearchOutcome>(ps.size()));
  parallel_for(static_cast<int>(trials), opts.workers, [&](int j) {
    const std::uint64_t s = stream_seed(seed, static_cast<std::uint64_t>(j));
    for (std::size_t a = 0; a < ps.size(); ++a)
      rows[j][a] = contains_copy(sample_gnp(t.n(), ps[a], s), t, opts.search_budget).outcome;
  });
  return rows;
}

// ---------------------------------------------------------------------------

ThresholdEstimate estimate_threshold(const Triangulation& t, std::uint64_t seed, const ThresholdOptions& opts) {
  if (!(opts.tol > 0)) throw ParameterError("tol must be positive");
  if (opts.trials < 1 || opts.max_rounds < 1) throw ParameterError("trials and rounds must be positive");
  const int n = t.n();
  ThresholdEstimate est;
  est.n = n;
  est.k = t.k();
  est.alpha = static_cast<double>(t.k()) / n;
  est.regime = std::string(regime_name(t.regime()));
  est.seed = seed;
  est.tol = opts.tol;
  est.trials_per_probe = opts.trials;
  est.ci_method = "Wilson test inversion over probes";
  est.ci_level = 0.95;

  auto probe = [&](double p) {
    ContainmentEstimate e;
    e.p = p;
    for (int round = 0; round < opts.max_rounds; ++round) {
      if (round > 0 && (e.ci.hi < 0.5 || e.ci.lo > 0.5)) break;
      merge(e, estimate_containment_prob(t, p, opts.trials, seed, opts.sim, round * opts.trials), opts.sim.z);
    }
    est.probes.push_back(e);
    est.trials_total += e.trials;
    est.unreliable = est.unreliable || e.unreliable;
    return e.p_hat >= 0.5;
  };

  const double floor_p = 1.0 / (static_cast<double>(n) * n);
  double lo = std::max(floor_p, 0.25 / std::sqrt(static_cast<double>(n)));
  double hi = std::min(1.0, 4.0 * std::pow(static_cast<double>(n), -1.0 / 3.0));
  while (probe(lo)) {
    if (lo <= floor_p) throw ParameterError("containment probability is at least 1/2 down to p = 1/n^2");
    hi = lo;
    lo = std::max(floor_p, lo / 4);
  }
  while (!probe(hi)) {
    if (hi >= 1.0) throw ParameterError("containment probability stays below 1/2 up to p = 1");
    lo = hi;
    hi = std::min(1.0, hi * 2);
  }
  while (hi - lo >= opts.tol) {
    const double mid = (lo + hi) / 2;
    if (probe(mid))
      hi = mid;
    else
      lo = mid;
  }
  est.bracket = {lo, hi};
  est.p_c = (lo + hi) / 2;

  // Interval ends: the largest p significantly below 1/2 and the smallest p
  // significantly above it, each located to within tol.
  auto significant = [&](double p, bool above) {
    probe(p);
    const auto& e = est.probes.back();
    return above ? e.ci.lo > 0.5 : e.ci.hi < 0.5;
  };
  double below = 0.0, above = 1.0;
  for (const auto& e : est.probes) {
    if (e.ci.hi < 0.5) below = std::max(below, e.p);
    if (e.ci.lo > 0.5) above = std::min(above, e.p);
  }
  for (double b = hi; above - b >= opts.tol;) {
    const double mid = (b + above) / 2;
    if (significant(mid, true))
      above = mid;
    else
      b = mid;
  }
  for (double a = lo; a - below >= opts.tol;) {
    const double mid = (below + a) / 2;
    if (significant(mid, false))
      below = mid;
    else
      a = mid;
  }
  est.ci = {below, above};
  return est;
}

// ---------------------------------------------------------------------------

LowerBoundCertificate lower_bound_certificate(int n, int k) {
  if (k < 3 || k > n) throw ParameterError("lower bound needs 3 <= k <= n");
  LowerBoundCertificate c;
  c.n = n;
  c.k = k;
  c.m = 3 * n - 3 - k;
  c.alpha = static_cast<double>(k) / n;
  const double ln_n = std::log(static_cast<double>(n));
  const double ln_p = -ln_n / (3.0 - c.alpha) - std::log(12.0);
  c.p = std::exp(ln_p);
  const double ln_16p = std::log(16.0) + ln_p;
  c.log_union_bound = 1.0 + ln_n + n * (ln_n - 1.0) + c.m * ln_16p;
  c.log_exact_bound = std::lgamma(n + 1.0) + c.m * ln_16p;
  c.negative = c.log_exact_bound < 0;
  return c;
}

int sweep_k(int n, KRule rule, int fixed_k, double alpha) {
  switch (rule) {
    case KRule::fixed:
      return fixed_k;
    case KRule::alpha:
      return std::max(3, static_cast<int>(std::ceil(alpha * n - 1e-9)));
    case KRule::all:
      return n;
  }
  return n;
}

SweepFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  SweepFit f;
  const std::size_t count = x.size();
  if (count < 3 || y.size() != count) return f;
  double mx = 0, my = 0;
  for (std::size_t j = 0; j < count; ++j) {
    mx += x[j];
    my += y[j];
  }
  mx /= count;
  my /= count;
  double sxx = 0, sxy = 0;
  for (std::size_t j = 0; j < count; ++j) {
    sxx += (x[j] - mx) * (x[j] - mx);
    sxy += (x[j] - mx) * (y[j] - my);
  }
  if (sxx == 0) return f;
  f.fitted = true;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t j = 0; j < count; ++j) f.residuals.push_back(y[j] - (f.intercept + f.slope * x[j]));
  return f;
}

SweepResult sweep(const std::vector<int>& ns, KRule rule, int fixed_k, double alpha, std::uint64_t seed,
                  const ThresholdOptions& opts) {
  if (ns.empty()) throw ParameterError("empty n list");
  SweepResult r;
  std::vector<double> x, y;
  for (int n : ns) {
    SweepRow row;
    row.n = n;
    row.k = sweep_k(n, rule, fixed_k, alpha);
    row.theory_exponent = -1.0 / (3.0 - static_cast<double>(row.k) / n);
    try {
      row.estimate = estimate_threshold(auto_construct(n, row.k), seed, opts);
      x.push_back(std::log(static_cast<double>(n)));
      y.push_back(std::log(row.estimate->p_c));
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    r.rows.push_back(std::move(row));
  }
  r.fit = fit_line(x, y);
  return r;
}

std::string sweep_csv(const SweepResult& r, std::uint64_t seed) {
  std::ostringstream os;
  os.precision(8);
  os << "n,k,alpha,p_hat_c,ci_lo,ci_hi,trials_total,theory_exponent,seed\n";
  for (const auto& row : r.rows) {
    os << row.n << ',' << row.k << ',' << static_cast<double>(row.k) / row.n << ',';
    if (row.estimate)
      os << row.estimate->p_c << ',' << row.estimate->ci.lo << ',' << row.estimate->ci.hi << ','
         << row.estimate->trials_total;
    else
      os << ",,,0";
    os << ',' << row.theory_exponent << ',' << seed << '\n';
  }
  return os.str();
}

}  // namespace spantri
