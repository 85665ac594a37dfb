// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance --only N   run criterion N
//
// Exit status is 0 when every criterion that ran passed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "spantri/cli.hpp"
#include "spantri/constructors.hpp"
#include "spantri/errors.hpp"
#include "spantri/fragments.hpp"
#include "spantri/spread.hpp"
#include "spantri/threshold.hpp"
#include "spantri/verifier.hpp"

using namespace spantri;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
  std::vector<std::string> problems;

  void fail(const std::string& what) {
    passed = false;
    if (problems.size() < 8) problems.push_back(what);
  }
};

std::string nk(int n, int k) { return "(" + std::to_string(n) + "," + std::to_string(k) + ")"; }

int ceil_div(int a, int b) { return (a + b - 1) / b; }

// Every triangulation the constructors produce for 4 <= n <= n_max: the
// auto-routed one and each regime constructor whose preconditions hold.
std::vector<Triangulation> all_constructions(int n_max) {
  std::vector<Triangulation> out;
  for (int n = 4; n <= n_max; ++n) {
    for (int k = 3; k <= n; ++k) {
      const Regime chosen = auto_regime(n, k);
      out.push_back(auto_construct(n, k));
      const int s = n - k;
      std::vector<Regime> extra;
      if (n >= 2 * k) extra.push_back(Regime::nested);
      if (k < n && n < 2 * k) extra.push_back(Regime::two_ring);
      if (s >= 1 && s <= k - 2) extra.push_back(Regime::k4_sprinkle);
      if (s >= 1 && wheel_chain_feasible(n, k)) extra.push_back(Regime::wheel_chain);
      for (Regime r : extra)
        if (r != chosen) out.push_back(construct(n, k, r));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  int count = 0;
  for (int n = 4; n <= 60; ++n) {
    for (int k = 3; k <= n; ++k) {
      ++count;
      const auto t = auto_construct(n, k);
      const auto v = validate(t);
      if (!v.passed) {
        for (const auto& c : v.checks)
          if (!c.passed) o.fail(nk(n, k) + " " + c.name + ": " + c.witness);
        continue;
      }
      if (t.m() != 3 * n - 3 - k) o.fail(nk(n, k) + " edge count");
      const int s = n - k;
      switch (t.regime()) {
        case Regime::nested:
          if (t.max_degree() > 7) o.fail(nk(n, k) + " nested degree " + std::to_string(t.max_degree()));
          break;
        case Regime::k4_sprinkle:
          if (t.max_degree() > 5) o.fail(nk(n, k) + " k4 degree " + std::to_string(t.max_degree()));
          break;
        case Regime::two_ring:
          if (t.max_degree() > 5 + ceil_div(k, s)) o.fail(nk(n, k) + " two-ring degree " + std::to_string(t.max_degree()));
          break;
        case Regime::wheel_chain: {
          const int ell = wheel_chain_length(n, k);
          for (int h : t.internal())
            if (t.degree(h) != ell) o.fail(nk(n, k) + " hub degree " + std::to_string(t.degree(h)));
          break;
        }
        case Regime::comb:
          if (t.max_degree() > 4) o.fail(nk(n, k) + " comb degree");
          break;
        case Regime::custom:
          o.fail(nk(n, k) + " custom regime");
          break;
      }
    }
  }
  // Anchor instances.
  auto anchor = [&](const Triangulation& t, int m, const std::string& name) {
    if (!validate(t).passed || t.m() != m) o.fail("anchor " + name);
  };
  anchor(construct_nested(14, 7), 32, "nested (14,7)");
  anchor(construct_nested(14, 4), 35, "nested (14,4)");
  if (nested_layout(14, 4).r != 2 || nested_layout(14, 4).c != 3) o.fail("anchor (14,4) c=3 r=2");
  anchor(construct_two_ring(11, 9), 21, "two-ring (11,9)");
  anchor(construct_two_ring(14, 10), 29, "two-ring (14,10)");
  anchor(construct_k4_sprinkle(17, 14), 34, "k4 (17,14)");
  if (k4_sprinkle_layout(17, 14).border != 4) o.fail("anchor (17,14) B=4");
  anchor(construct_wheel_chain(20, 18), 39, "wheel-chain (20,18)");
  if (wheel_chain_length(20, 18) != 5) o.fail("anchor (20,18) l=5");
  o.detail = std::to_string(count) + " auto-routed pairs, 6 anchor instances";
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::uint64_t arcs = 0;
  for (int b = 1; b <= 200; ++b) {
    for (int a = 0; a < b; ++a) {
      const auto sel = even_edge_select(a, b);
      if (static_cast<int>(sel.size()) != a || std::set<int>(sel.begin(), sel.end()).size() != sel.size()) {
        o.fail("size " + nk(a, b));
        continue;
      }
      std::vector<int> mark(b, 0);
      for (int e : sel) mark.at(e) = 1;
      for (int start = 0; start < b; ++start) {
        int count = 0;
        for (int len = 1; len <= b; ++len) {
          count += mark[(start + len - 1) % b];
          ++arcs;
          if (count * b > len * a + b) o.fail("arc (a,b)=" + nk(a, b) + " start " + std::to_string(start));
        }
      }
    }
  }
  o.detail = std::to_string(arcs) + " arcs over all 0 <= a < b <= 200";
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::uint64_t checked = 0;
  const auto all = all_constructions(20);
  for (const auto& t : all) {
    const auto rc = rooted_subgraph_counts(t, 8, 4'000'000'000ULL, 0);
    if (rc.aborted) {
      o.fail(nk(t.n(), t.k()) + " aborted");
      continue;
    }
    for (int root = 0; root < t.n(); ++root) {
      for (int i = 1; i <= 8; ++i) {
        ++checked;
        if (compare_below_e_power(rc.counts[root][i], rc.max_degree, i) != Comparison::below)
          o.fail(nk(t.n(), t.k()) + " " + std::string(regime_name(t.regime())) + " root " + std::to_string(root) +
                 " i=" + std::to_string(i));
      }
    }
  }
  o.detail = std::to_string(all.size()) + " triangulations, " + std::to_string(checked) + " (root, i) counts";
  return o;
}

Outcome criterion4() {
  Outcome o;
  VerifyOptions v;
  v.max_edges = 12;
  v.workers = 0;
  int runs = 0;
  std::uint64_t checked = 0;
  auto use = [&](const Triangulation& t, const std::string& suite) {
    const auto r = run_suite(t, suite, v);
    ++runs;
    checked += r.fragments_checked;
    if (!r.passed) {
      std::string why = r.aborted ? "aborted" : (r.violations.empty() ? "failed" : r.violations.front().condition + " " + r.violations.front().detail);
      o.fail(suite + " " + nk(t.n(), t.k()) + ": " + why);
    }
  };
  for (int n = 6; n <= 30; ++n)
    for (int k = 3; 2 * k <= n; ++k) use(construct_nested(n, k), "density");
  for (int n = 6; n <= 24; ++n)
    for (int k = 3; 2 * k <= n; ++k) use(construct_nested(n, k), "nested");
  for (int n = 5; n <= 24; ++n)
    for (int k = n / 2 + 1; k < n; ++k)
      if (k >= 3) use(construct_two_ring(n, k), "two-ring");
  int k4_skipped = 0;
  for (int n = 5; n <= 24; ++n) {
    for (int k = 3; k < n; ++k) {
      const int s = n - k;
      if (s > k - 2) continue;
      // With B(T) < 2 two 4-cliques can share an edge and the clique bound fails.
      if (s > 1 && (k - 2) / s < 2) {
        ++k4_skipped;
        continue;
      }
      use(construct_k4_sprinkle(n, k), "k4");
    }
  }
  int wheels = 0;
  for (int n = 5; n <= 24; ++n)
    for (int k = 3; k < n; ++k)
      if (wheel_chain_feasible(n, k)) {
        use(construct_wheel_chain(n, k), "wheel");
        ++wheels;
      }
  o.detail = std::to_string(runs) + " suite runs (" + std::to_string(wheels) + " wheel chains, " +
             std::to_string(k4_skipped) + " k4 instances with B(T) < 2 excluded), " + std::to_string(checked) +
             " fragment classes and cycles, M = 12";
  return o;
}

Outcome criterion5() {
  Outcome o;
  struct Case {
    Triangulation t;
    std::string name;
    int aut;
    int max_frag;
  };
  std::vector<Case> cases = {{construct_k4_sprinkle(4, 3), "T(4,3)", 24, 6},
                             {construct_wheel(4), "T(5,4)", 8, 6},
                             {construct_nested(6, 3), "T(6,3)", 48, 6},
                             {construct_wheel_chain(8, 7), "wheel-chain (8,7)", 0, 6}};
  std::uint64_t fragments = 0;
  for (const auto& c : cases) {
    const BigInt aut = automorphism_count(c.t);
    if (c.aut && aut != c.aut) o.fail(c.name + " |Aut| = " + aut.str());
    if (aut != automorphism_count_bruteforce(c.t)) o.fail(c.name + " brute-force |Aut| differs");
    const SpreadOracle oracle(c.t);
    SpreadOptions opts;
    opts.max_fragment_edges = c.max_frag;
    // check_extension_bounds counts every fragment by both methods and throws on disagreement.
    SpreadReport r;
    try {
      r = check_extension_bounds(oracle, opts);
    } catch (const ConsistencyError& e) {
      o.fail(c.name + ": " + e.what());
      continue;
    }
    bool wheel_bound = false;
    for (const auto& chk : r.checks) {
      if (chk.id == "general_extension") fragments += chk.checked;
      if (chk.id == "wheel_regime" && chk.applicable) wheel_bound = true;
      if (chk.applicable && chk.violations > 0) o.fail(c.name + " " + chk.id + " " + chk.worst);
    }
    if (c.name == "T(5,4)" && !wheel_bound) o.fail("wheel bound not applied to T(5,4)");
    if (!r.passed) o.fail(c.name + " report failed");
  }
  o.detail = std::to_string(fragments) + " fragments counted two ways; |Aut| 24/8/48";
  return o;
}

Outcome criterion6() {
  Outcome o;
  SimulationOptions sim;
  sim.workers = 0;
  // (a) coupled monotonicity at n = 10.
  std::vector<double> ps;
  for (int j = 0; j < 10; ++j) ps.push_back(0.30 + 0.06 * j);
  std::uint64_t pairs = 0;
  for (int k : {3, 5, 7, 10}) {
    const auto rows = coupled_outcomes(auto_construct(10, k), ps, 200, 1000 + k, sim);
    for (const auto& row : rows) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j] == SearchOutcome::inconclusive) o.fail("(a) inconclusive search");
        if (j > 0 && row[j - 1] == SearchOutcome::found && row[j] != SearchOutcome::found)
          o.fail("(a) non-monotone trial at k=" + std::to_string(k));
        ++pairs;
      }
    }
  }
  // (b) ordering at n = 12.
  ThresholdOptions th;
  th.trials = 500;
  th.tol = 0.005;
  th.sim = sim;
  const auto e12 = estimate_threshold(auto_construct(12, 12), 7, th);
  const auto e3 = estimate_threshold(auto_construct(12, 3), 7, th);
  if (!(e12.p_c < e3.p_c)) o.fail("(b) p_c(k=12) >= p_c(k=3)");
  if (!(e12.ci.hi < e3.ci.lo)) o.fail("(b) confidence intervals overlap");
  if (e12.unreliable || e3.unreliable) o.fail("(b) unreliable estimate");
  // (c) slope for k = n.
  const auto sw = sweep({8, 10, 12, 14}, KRule::all, 0, 1.0, 11, th);
  if (!sw.fit.fitted)
    o.fail("(c) fit skipped");
  else if (sw.fit.slope < -0.9 || sw.fit.slope > -0.2)
    o.fail("(c) slope " + std::to_string(sw.fit.slope));
  std::ostringstream d;
  d.precision(4);
  d << "(a) " << pairs << " coupled outcomes; (b) p_c(12,12) = " << e12.p_c << " [" << e12.ci.lo << ", " << e12.ci.hi
    << "] vs p_c(12,3) = " << e3.p_c << " [" << e3.ci.lo << ", " << e3.ci.hi << "]; (c) slope " << sw.fit.slope;
  o.detail = d.str();
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::uint64_t checked = 0, bad = 0;
  for (int n = 30; n <= 1000; ++n) {
    for (int k = 3; k <= n; ++k) {
      const auto c = lower_bound_certificate(n, k);
      ++checked;
      if (!c.negative) {
        ++bad;
        std::ostringstream w;
        w.precision(4);
        w << "non-negative at " << nk(n, k) << ": ln bound " << c.log_exact_bound;
        o.fail(w.str());
      }
    }
  }
  const auto spot = lower_bound_certificate(100, 50);
  if (std::abs(spot.p - 0.013207) > 1e-6 || !spot.negative) o.fail("spot value (100,50)");
  std::ostringstream d;
  d.precision(9);
  d << checked << " pairs, " << bad << " non-negative; p(100,50) = " << spot.p;
  o.detail = d.str();
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome criterion8() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / ("spantri_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  auto path = [&](const std::string& name) { return (dir / name).string(); };
  std::ostringstream sink;

  auto run_cli = [&](std::vector<std::string> args) {
    std::ostringstream err;
    const int code = run(args, sink, err);
    return code;
  };
  if (run_cli({"construct", "--n", "14", "--k", "7", "--out", path("t147.json")}) != 0) o.fail("construct (14,7)");
  if (run_cli({"construct", "--n", "5", "--k", "4", "--regime", "wheel-single", "--out", path("w4.json")}) != 0)
    o.fail("construct W4");
  if (run_cli({"construct", "--n", "17", "--k", "14", "--out", path("k4.json")}) != 0) o.fail("construct (17,14)");

  struct Command {
    std::string name;
    std::vector<std::string> args;
    std::vector<std::string> outputs;  // extra files written besides the report
  };
  const std::vector<Command> commands = {
      {"construct", {"construct", "--n", "20", "--k", "18", "--regime", "wheel", "--out", "@t.json", "--dot", "@t.dot"}, {"t.json", "t.dot"}},
      {"verify-nested", {"verify", "--in", path("t147.json"), "--suite", "nested"}, {}},
      {"verify-density", {"verify", "--in", path("t147.json"), "--suite", "density", "--max-edges", "8"}, {}},
      {"verify-k4-direct", {"verify", "--in", path("k4.json"), "--suite", "k4", "--max-edges", "6", "--mode", "direct"}, {}},
      {"verify-loose", {"verify", "--in", path("t147.json"), "--suite", "density", "--max-edges", "6", "--q", "3/2"}, {}},
      {"fragments", {"fragments", "--in", path("t147.json"), "--max-edges", "6", "--rooted-edges", "6", "--hist", "@h.csv"}, {"h.csv"}},
      {"spread", {"spread", "--in", path("w4.json"), "--mode", "bounds"}, {}},
      {"spread-spiro", {"spread", "--in", path("w4.json"), "--mode", "spiro", "--q", "1"}, {}},
      {"simulate", {"simulate", "--n", "10", "--k", "5", "--p", "0.6", "--trials", "200", "--seed", "5"}, {}},
      {"threshold", {"threshold", "--n", "9", "--k", "9", "--tol", "0.02", "--trials", "100", "--seed", "5"}, {}},
      {"sweep", {"sweep", "--alpha", "0.5", "--n-min", "6", "--n-max", "10", "--n-step", "2", "--trials", "60", "--tol", "0.05", "--out", "@s.csv"}, {"s.csv"}},
      {"lowerbound", {"lowerbound", "--n", "100", "--k", "50"}, {}},
  };
  int compared = 0;
  for (const auto& c : commands) {
    for (const std::string format : {"json", "csv"}) {
      std::vector<std::string> outputs[2];
      for (int pass = 0; pass < 2; ++pass) {
        const std::string tag = c.name + "_" + format + "_" + std::to_string(pass);
        std::vector<std::string> args;
        for (const auto& a : c.args) args.push_back(a.rfind('@', 0) == 0 ? path(tag + "_" + a.substr(1)) : a);
        args.insert(args.end(), {"--format", format, "--report", path(tag + ".report"), "--workers", pass == 0 ? "1" : "3"});
        const int code = run_cli(args);
        if (code != 0 && !(c.name == "verify-loose" && code == 1)) o.fail(c.name + " exit " + std::to_string(code));
        outputs[pass].push_back(slurp(path(tag + ".report")));
        for (const auto& f : c.outputs) outputs[pass].push_back(slurp(path(tag + "_" + f)));
      }
      if (outputs[0] != outputs[1]) o.fail(c.name + " " + format + " differs between 1 and 3 workers");
      if (outputs[0].front().empty()) o.fail(c.name + " " + format + " empty report");
      ++compared;
    }
  }
  std::filesystem::remove_all(dir);
  o.detail = std::to_string(compared) + " report pairs byte-identical across 1 and 3 workers";
  return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria = {
    {"construction suite, 4 <= n <= 60", criterion1},
    {"even edge selection arc bound, b <= 200", criterion2},
    {"rooted subgraph counts below (e Delta)^i, n <= 20, i <= 8", criterion3},
    {"inequality suites at M = 12", criterion4},
    {"spread oracle exactness and extension bounds", criterion5},
    {"simulation sanity", criterion6},
    {"first-moment certificate, 30 <= n <= 1000", criterion7},
    {"determinism across worker counts", criterion8},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int j = 1; j < argc; ++j) {
    const std::string a = argv[j];
    if (a == "--only" && j + 1 < argc) {
      only = std::atoi(argv[++j]);
    } else {
      std::cerr << "usage: acceptance [--only N]\n";
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(kCriteria.size())) {
    std::cerr << "no criterion " << only << "\n";
    return 2;
  }
  int failed = 0;
  for (std::size_t c = 0; c < kCriteria.size(); ++c) {
    if (only && static_cast<int>(c) + 1 != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = kCriteria[c].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu: %s  %s  [%s; %.1f s]\n", c + 1, o.passed ? "PASS" : "FAIL", kCriteria[c].first.c_str(),
                o.detail.c_str(), secs);
    for (const auto& p : o.problems) std::printf("    %s\n", p.c_str());
    std::fflush(stdout);
    if (!o.passed) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
