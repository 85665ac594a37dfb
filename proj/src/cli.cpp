#include "spantri/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "spantri/constructors.hpp"
#include "spantri/errors.hpp"
#include "spantri/fragments.hpp"
#include "spantri/io.hpp"
#include "spantri/parallel.hpp"
#include "spantri/spread.hpp"
#include "spantri/threshold.hpp"
#include "spantri/verifier.hpp"

namespace spantri {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSeed = 20240611;

std::uint64_t default_budget(std::uint64_t fallback) {
  const char* env = std::getenv(kBudgetEnv);
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || v == 0) throw ParameterError(std::string(kBudgetEnv) + " must be a positive integer");
  return v;
}

struct Common {
  int workers = 0;
  std::string format = "json";
  std::string report;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--workers", c.workers, "worker threads (0: available parallelism)")->check(CLI::NonNegativeNumber);
  sub->add_option("--format", c.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--report", c.report, "report path ('-' for standard output)");
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) return;
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ParameterError("cannot write " + path);
  f << text;
}

std::string render(const Json& j, const std::string& format, const std::vector<std::vector<std::string>>& csv_rows) {
  if (format == "json") return j.dump(2) + "\n";
  std::ostringstream os;
  for (const auto& row : csv_rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
    os << '\n';
  }
  return os.str();
}

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

Triangulation build(int n, int k, const std::string& regime) {
  if (regime == "auto") return auto_construct(n, k);
  if (regime == "k4" || regime == "k4-sprinkle") return construct_k4_sprinkle(n, k);
  if (regime == "wheel" || regime == "wheel-chain") return construct_wheel_chain(n, k);
  if (regime == "wheel-single") {
    if (n != k + 1) throw ParameterError("wheel-single needs n = k + 1");
    return construct_wheel(k);
  }
  return construct(n, k, parse_regime(regime));
}

const std::vector<std::string> kRegimes = {"auto", "nested", "two-ring", "k4", "k4-sprinkle", "wheel",
                                           "wheel-chain", "wheel-single", "comb"};

Json edges_json(const std::vector<Edge>& edges) {
  Json a = Json::array();
  for (const auto& e : edges) a.push_back({e.u, e.v});
  return a;
}

Json validation_json(const ValidationReport& v) {
  Json checks = Json::array();
  for (const auto& c : v.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"witness", c.witness}});
  return {{"checks", checks}, {"passed", v.passed}};
}

void summarize_validation(const ValidationReport& v, std::ostream& out) {
  for (const auto& c : v.checks)
    if (!c.passed) out << "  invalid: " << c.name << (c.witness.empty() ? "" : ": " + c.witness) << "\n";
}

Json violation_json(const Violation& w) {
  return {{"condition", w.condition}, {"detail", w.detail}, {"edges", edges_json(w.edges)},
          {"cycle", w.cycle},         {"reverified", w.reverified}};
}

Json verification_json(const VerificationReport& r, int max_edges) {
  Json j;
  j["suite"] = r.suite;
  Json params = Json::object();
  for (const auto& [key, value] : r.parameters) params[key] = value;
  j["parameters"] = params;
  j["mode"] = r.mode;
  j["max_edges"] = max_edges;
  j["fragments_checked"] = r.fragments_checked;
  Json conds = Json::array();
  for (const auto& c : r.conditions)
    conds.push_back({{"id", c.id},
                     {"statement", c.statement},
                     {"checked", c.checked},
                     {"violations", c.violations},
                     {"informational", c.informational}});
  j["conditions"] = conds;
  Json vs = Json::array(), ds = Json::array();
  for (const auto& w : r.violations) vs.push_back(violation_json(w));
  for (const auto& w : r.diagnostics) ds.push_back(violation_json(w));
  j["violations"] = vs;
  j["diagnostics"] = ds;
  j["aborted"] = r.aborted;
  j["passed"] = r.passed;
  return j;
}

// ---------------------------------------------------------------------------

struct ConstructArgs {
  int n = 0, k = 0;
  std::string regime = "auto";
  std::string out_path, dot_path;
  Common common;
};

int cmd_construct(const ConstructArgs& a, std::ostream& out) {
  const Triangulation t = build(a.n, a.k, a.regime);
  const auto v = validate(t);
  const std::string text = to_json(t).dump(2) + "\n";
  if (a.out_path.empty())
    out << text;
  else
    emit(a.out_path, text, out);
  if (!a.dot_path.empty()) emit(a.dot_path, to_dot(t), out);
  if (!a.common.report.empty()) {
    Json j = {{"n", t.n()}, {"k", t.k()}, {"m", t.m()}, {"regime", regime_name(t.regime())},
              {"max_degree", t.max_degree()}, {"validation", validation_json(v)}};
    std::vector<std::vector<std::string>> rows = {{"n", "k", "m", "regime", "max_degree", "valid"},
                                                  {std::to_string(t.n()), std::to_string(t.k()), std::to_string(t.m()),
                                                   std::string(regime_name(t.regime())),
                                                   std::to_string(t.max_degree()), v.passed ? "true" : "false"}};
    emit(a.common.report, render(j, a.common.format, rows), out);
  }
  if (!a.out_path.empty())
    out << "T(" << t.n() << "," << t.k() << ") " << regime_name(t.regime()) << ": m=" << t.m()
        << " max_degree=" << t.max_degree() << (v.passed ? " valid" : " INVALID") << "\n";
  summarize_validation(v, out);
  return v.passed ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string in, suite;
  int max_edges = 8;
  std::string mode = "reduced";
  std::string q, eps, delta;
  std::uint64_t budget = 0;
  Common common;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const Triangulation t = read_triangulation(a.in);
  const auto valid = validate(t);
  if (!valid.passed) {
    out << "input is not a valid (" << t.n() << "," << t.k() << ")-triangulation\n";
    summarize_validation(valid, out);
    Json j = {{"suite", a.suite}, {"validation", validation_json(valid)}, {"passed", false}};
    std::vector<std::vector<std::string>> rows = {{"check", "passed", "witness"}};
    for (const auto& c : valid.checks) rows.push_back({c.name, c.passed ? "true" : "false", "\"" + c.witness + "\""});
    emit(a.common.report, render(j, a.common.format, rows), out);
    return kExitFailed;
  }
  VerifyOptions o;
  o.max_edges = a.max_edges;
  o.mode = a.mode == "direct" ? EnumerationMode::direct : EnumerationMode::reduced;
  o.workers = a.common.workers;
  o.budget = a.budget ? a.budget : default_budget(o.budget);
  VerificationReport r;
  if (a.suite == "density" && !(a.q.empty() && a.eps.empty() && a.delta.empty())) {
    DensityParams p = default_density_params(t);
    if (!a.q.empty()) p.q = parse_rational(a.q);
    if (!a.eps.empty()) p.eps = parse_rational(a.eps);
    if (!a.delta.empty()) p.delta = parse_rational(a.delta);
    r = check_density_condition(t, p, o);
  } else {
    r = run_suite(t, a.suite, o);
  }
  std::vector<std::vector<std::string>> rows = {{"suite", "condition", "checked", "violations", "informational"}};
  for (const auto& c : r.conditions)
    rows.push_back({r.suite, c.id, std::to_string(c.checked), std::to_string(c.violations),
                    c.informational ? "true" : "false"});
  emit(a.common.report, render(verification_json(r, a.max_edges), a.common.format, rows), out);

  out << "suite " << r.suite << " on T(" << t.n() << "," << t.k() << "), mode " << r.mode << ", "
      << r.fragments_checked << " checked\n";
  for (const auto& c : r.conditions)
    out << "  " << std::left << std::setw(20) << c.id << " checked " << c.checked << ", violations " << c.violations
        << (c.informational ? " (informational)" : "") << "\n";
  for (const auto& w : r.violations) {
    out << "  witness [" << w.condition << "] " << w.detail << ":";
    for (const auto& e : w.edges) out << " " << e.u << "-" << e.v;
    out << "\n";
  }
  if (r.aborted) {
    out << "ABORTED: budget exhausted\n";
    return kExitInconclusive;
  }
  out << (r.passed ? "PASSED" : "FAILED") << "\n";
  return r.passed ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------

struct FragmentsArgs {
  std::string in, hist;
  int max_edges = 6;
  int rooted_edges = 8;
  std::uint64_t budget = 0;
  Common common;
};

int cmd_fragments(const FragmentsArgs& a, std::ostream& out) {
  const Triangulation t = read_triangulation(a.in);
  const std::uint64_t budget = a.budget ? a.budget : default_budget(200'000'000);
  bool aborted = false;
  const auto hist = fragment_histogram(t, a.max_edges, budget, a.common.workers, &aborted);
  if (!a.hist.empty()) {
    std::ostringstream csv;
    write_histogram_csv(csv, hist);
    emit(a.hist, csv.str(), out);
  }
  std::uint64_t total = 0;
  std::vector<std::uint64_t> per_size(a.max_edges + 1, 0);
  for (const auto& [f, count] : hist) {
    total += count;
    if (f.i >= 0 && f.i <= a.max_edges) per_size[f.i] += count;
  }

  // Rooted counts against (e Delta)^i.
  const auto rooted = rooted_subgraph_counts(t, a.rooted_edges, budget, a.common.workers);
  std::uint64_t checked = 0, failures = 0, undecided = 0;
  Json worst = nullptr;
  for (int root = 0; root < t.n(); ++root) {
    for (int i = 1; i <= a.rooted_edges && i < static_cast<int>(rooted.counts[root].size()); ++i) {
      ++checked;
      const auto cmp = compare_below_e_power(rooted.counts[root][i], rooted.max_degree, i);
      if (cmp == Comparison::not_below) {
        ++failures;
        if (worst.is_null()) worst = {{"root", root}, {"i", i}, {"count", rooted.counts[root][i]}};
      }
      if (cmp == Comparison::undecided) ++undecided;
    }
  }
  aborted = aborted || rooted.aborted;
  const bool passed = !aborted && failures == 0 && undecided == 0;
  Json j;
  j["n"] = t.n();
  j["k"] = t.k();
  j["max_edges"] = a.max_edges;
  j["subgraphs"] = total;
  j["per_size"] = per_size;
  j["distinct_parameter_tuples"] = hist.size();
  j["rooted"] = {{"max_edges", a.rooted_edges}, {"max_degree", rooted.max_degree}, {"checked", checked},
                 {"failures", failures},        {"undecided", undecided},         {"first_failure", worst}};
  j["aborted"] = aborted;
  j["passed"] = passed;
  std::vector<std::vector<std::string>> rows = {{"i", "subgraphs"}};
  for (int i = 1; i <= a.max_edges; ++i) rows.push_back({std::to_string(i), std::to_string(per_size[i])});
  emit(a.common.report, render(j, a.common.format, rows), out);

  out << "T(" << t.n() << "," << t.k() << "): " << total << " connected subgraphs with <= " << a.max_edges
      << " edges, " << hist.size() << " parameter tuples\n";
  out << "rooted counts below (e*" << rooted.max_degree << ")^i for i <= " << a.rooted_edges << ": " << checked - failures
      << "/" << checked << (undecided ? " (some undecided)" : "") << "\n";
  if (aborted) return kExitInconclusive;
  return passed ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------

struct SpreadArgs {
  std::string in, mode = "bounds";
  std::string q = "1/2", beta = "1/2", delta = "1/2";
  int max_frag = 6;
  std::vector<int> levels;
  Common common;
};

Json spread_json(const SpreadReport& r) {
  Json j;
  j["mode"] = r.mode;
  j["n"] = r.n;
  j["m"] = r.m;
  j["automorphisms"] = r.automorphisms.str();
  j["copies"] = r.copies;
  Json params = Json::object();
  for (const auto& [key, value] : r.parameters) params[key] = value;
  j["parameters"] = params;
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"id", c.id},
                      {"statement", c.statement},
                      {"applicable", c.applicable},
                      {"note", c.note},
                      {"checked", c.checked},
                      {"violations", c.violations},
                      {"worst_ratio", c.worst_ratio},
                      {"worst", c.worst}});
  j["checks"] = checks;
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"i", row.params.i}, {"v", row.params.v}, {"c", row.params.c}, {"c_S", row.params.c_S},
                    {"t", row.params.t}, {"fragments", row.fragments}, {"max_count", row.max_count}});
  j["rows"] = rows;
  j["passed"] = r.passed;
  return j;
}

int cmd_spread(const SpreadArgs& a, std::ostream& out) {
  const Triangulation t = read_triangulation(a.in);
  const auto valid = validate(t);
  if (!valid.passed) {
    out << "input is not a valid triangulation\n";
    summarize_validation(valid, out);
    return kExitFailed;
  }
  SpreadOptions o;
  o.q = parse_rational(a.q);
  o.beta = parse_rational(a.beta);
  o.delta = parse_rational(a.delta);
  o.max_fragment_edges = a.max_frag;
  o.levels = a.levels;
  const SpreadOracle oracle(t);
  SpreadReport r;
  if (a.mode == "qspread")
    r = check_qspread(oracle, o);
  else if (a.mode == "superspread")
    r = check_superspread(oracle, o);
  else if (a.mode == "spiro")
    r = check_spiro_spread(oracle, o);
  else
    r = check_extension_bounds(oracle, o);
  std::vector<std::vector<std::string>> rows = {{"mode", "check", "applicable", "checked", "violations", "worst_ratio"}};
  for (const auto& c : r.checks)
    rows.push_back({r.mode, c.id, c.applicable ? "true" : "false", std::to_string(c.checked),
                    std::to_string(c.violations), num(c.worst_ratio)});
  emit(a.common.report, render(spread_json(r), a.common.format, rows), out);

  out << "T(" << t.n() << "," << t.k() << "): |Aut| = " << r.automorphisms << ", |H| = " << r.copies << "\n";
  for (const auto& [key, value] : r.parameters) out << "  " << key << " = " << value << "\n";
  for (const auto& c : r.checks) {
    out << "  " << std::left << std::setw(26) << c.id;
    if (!c.applicable)
      out << " not applicable" << (c.note.empty() ? "" : ": " + c.note) << "\n";
    else
      out << " checked " << c.checked << ", violations " << c.violations << ", worst ratio " << num(c.worst_ratio)
          << "\n";
  }
  out << (r.passed ? "PASSED" : "FAILED") << "\n";
  return r.passed ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------

struct SimArgs {
  int n = 0, k = 0;
  std::string regime = "auto";
  double p = 0.5;
  std::uint64_t trials = 200;
  std::uint64_t seed = kDefaultSeed;
  double tol = 0.01;
  int rounds = 4;
  std::uint64_t search_budget = 0;
  Common common;
};

SimulationOptions sim_options(const SimArgs& a) {
  SimulationOptions o;
  o.workers = a.common.workers;
  o.search_budget = a.search_budget ? a.search_budget : default_budget(o.search_budget);
  return o;
}

int cmd_simulate(const SimArgs& a, std::ostream& out) {
  const Triangulation t = build(a.n, a.k, a.regime);
  const auto e = estimate_containment_prob(t, a.p, a.trials, a.seed, sim_options(a));
  Json j = {{"n", t.n()},
            {"k", t.k()},
            {"regime", regime_name(t.regime())},
            {"p", e.p},
            {"trials", e.trials},
            {"successes", e.successes},
            {"p_hat", e.p_hat},
            {"ci", {{"method", "Wilson"}, {"level", 0.95}, {"lo", e.ci.lo}, {"hi", e.ci.hi}}},
            {"inconclusive", e.inconclusive},
            {"dropped", e.dropped},
            {"unreliable", e.unreliable},
            {"seed", a.seed}};
  std::vector<std::vector<std::string>> rows = {
      {"n", "k", "p", "trials", "successes", "p_hat", "ci_lo", "ci_hi", "inconclusive", "seed"},
      {std::to_string(t.n()), std::to_string(t.k()), num(e.p), std::to_string(e.trials), std::to_string(e.successes),
       num(e.p_hat), num(e.ci.lo), num(e.ci.hi), std::to_string(e.inconclusive), std::to_string(a.seed)}};
  emit(a.common.report, render(j, a.common.format, rows), out);
  out << "T(" << t.n() << "," << t.k() << ") " << regime_name(t.regime()) << " in G(n, " << num(a.p)
      << "): " << e.successes << "/" << e.trials - e.dropped << " = " << num(e.p_hat) << ", 95% CI [" << num(e.ci.lo)
      << ", " << num(e.ci.hi) << "]\n";
  if (e.unreliable) {
    out << "UNRELIABLE: " << e.inconclusive << " searches hit the budget\n";
    return kExitInconclusive;
  }
  return kExitOk;
}

Json threshold_json(const ThresholdEstimate& e) {
  Json probes = Json::array();
  for (const auto& p : e.probes)
    probes.push_back({{"p", p.p},
                      {"trials", p.trials},
                      {"successes", p.successes},
                      {"p_hat", p.p_hat},
                      {"ci_lo", p.ci.lo},
                      {"ci_hi", p.ci.hi},
                      {"inconclusive", p.inconclusive}});
  return {{"n", e.n},
          {"k", e.k},
          {"alpha", e.alpha},
          {"regime", e.regime},
          {"p_hat_c", e.p_c},
          {"ci", {{"method", e.ci_method}, {"level", e.ci_level}, {"lo", e.ci.lo}, {"hi", e.ci.hi}}},
          {"bracket", {e.bracket.lo, e.bracket.hi}},
          {"tol", e.tol},
          {"trials_per_probe", e.trials_per_probe},
          {"trials_total", e.trials_total},
          {"theory_exponent", -1.0 / (3.0 - e.alpha)},
          {"seed", e.seed},
          {"unreliable", e.unreliable},
          {"probes", probes}};
}

ThresholdOptions threshold_options(const SimArgs& a) {
  ThresholdOptions o;
  o.trials = a.trials;
  o.tol = a.tol;
  o.max_rounds = a.rounds;
  o.sim = sim_options(a);
  return o;
}

int cmd_threshold(const SimArgs& a, std::ostream& out) {
  const Triangulation t = build(a.n, a.k, a.regime);
  const auto e = estimate_threshold(t, a.seed, threshold_options(a));
  SweepResult single;
  single.rows.push_back({e.n, e.k, e, -1.0 / (3.0 - e.alpha), ""});
  const std::string csv = sweep_csv(single, a.seed);
  std::vector<std::vector<std::string>> rows;
  {
    std::istringstream is(csv);
    std::string line;
    while (std::getline(is, line)) rows.push_back({line});
  }
  emit(a.common.report, render(threshold_json(e), a.common.format, rows), out);
  out << "T(" << e.n << "," << e.k << ") " << e.regime << ": p_c ~ " << num(e.p_c) << ", 95% CI [" << num(e.ci.lo)
      << ", " << num(e.ci.hi) << "], " << e.probes.size() << " probes, " << e.trials_total << " trials\n";
  if (e.unreliable) {
    out << "UNRELIABLE: some probes had more than 1% inconclusive searches\n";
    return kExitInconclusive;
  }
  return kExitOk;
}

struct SweepArgs {
  SimArgs sim;
  double alpha = 0;
  int fixed_k = 0;
  bool k_equals_n = false;
  int n_min = 0, n_max = 0, n_step = 1;
  std::string out_path;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const int rules = (a.alpha > 0 ? 1 : 0) + (a.fixed_k > 0 ? 1 : 0) + (a.k_equals_n ? 1 : 0);
  if (rules != 1) throw ParameterError("give exactly one of --alpha, --k, --k-equals-n");
  const KRule rule = a.k_equals_n ? KRule::all : a.fixed_k > 0 ? KRule::fixed : KRule::alpha;
  std::vector<int> ns;
  for (int n = a.n_min; n <= a.n_max; n += a.n_step) ns.push_back(n);
  const auto r = sweep(ns, rule, a.fixed_k, a.alpha, a.sim.seed, threshold_options(a.sim));
  const std::string csv = sweep_csv(r, a.sim.seed);
  if (!a.out_path.empty()) emit(a.out_path, csv, out);
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    if (row.estimate)
      rows.push_back(threshold_json(*row.estimate));
    else
      rows.push_back({{"n", row.n}, {"k", row.k}, {"error", row.error}});
  }
  Json fit = {{"fitted", r.fit.fitted}};
  if (r.fit.fitted) {
    fit["slope"] = r.fit.slope;
    fit["intercept"] = r.fit.intercept;
    fit["residuals"] = r.fit.residuals;
  }
  Json j = {{"rows", rows}, {"fit", fit}, {"seed", a.sim.seed}};
  std::vector<std::vector<std::string>> csv_rows;
  {
    std::istringstream is(csv);
    std::string line;
    while (std::getline(is, line)) csv_rows.push_back({line});
  }
  emit(a.sim.common.report, render(j, a.sim.common.format, csv_rows), out);
  for (const auto& row : r.rows) {
    out << "n=" << row.n << " k=" << row.k << ": ";
    if (row.estimate)
      out << "p_c ~ " << num(row.estimate->p_c) << " [" << num(row.estimate->ci.lo) << ", "
          << num(row.estimate->ci.hi) << "]\n";
    else
      out << "error: " << row.error << "\n";
  }
  if (r.fit.fitted)
    out << "fit: log p_c = " << num(r.fit.intercept) << " + " << num(r.fit.slope) << " log n\n";
  else
    out << "fit skipped (needs at least 3 rows)\n";
  bool any_error = false, unreliable = false;
  for (const auto& row : r.rows) {
    any_error = any_error || !row.error.empty();
    unreliable = unreliable || (row.estimate && row.estimate->unreliable);
  }
  if (unreliable) return kExitInconclusive;
  return any_error ? kExitFailed : kExitOk;
}

struct LowerBoundArgs {
  int n = 0, k = 0;
  int n_min = 0, n_max = 0;
  Common common;
};

Json certificate_json(const LowerBoundCertificate& c) {
  return {{"n", c.n},
          {"k", c.k},
          {"m", c.m},
          {"alpha", c.alpha},
          {"p", c.p},
          {"log_exact_bound", c.log_exact_bound},
          {"log_union_bound", c.log_union_bound},
          {"negative", c.negative}};
}

int cmd_lowerbound(const LowerBoundArgs& a, std::ostream& out) {
  const std::vector<std::string> header = {"n", "k", "m", "alpha", "p", "log_exact_bound", "log_union_bound", "negative"};
  auto row_of = [](const LowerBoundCertificate& c) {
    return std::vector<std::string>{std::to_string(c.n), std::to_string(c.k), std::to_string(c.m), num(c.alpha),
                                    num(c.p), num(c.log_exact_bound), num(c.log_union_bound),
                                    c.negative ? "true" : "false"};
  };
  if (a.n_max > 0) {
    if (a.n_min < 3 || a.n_min > a.n_max) throw ParameterError("need 3 <= n-min <= n-max");
    std::vector<std::vector<std::string>> rows = {header};
    Json failures = Json::array();
    std::uint64_t checked = 0;
    for (int n = a.n_min; n <= a.n_max; ++n)
      for (int k = 3; k <= n; ++k) {
        const auto c = lower_bound_certificate(n, k);
        ++checked;
        if (!c.negative) {
          failures.push_back(certificate_json(c));
          rows.push_back(row_of(c));
        }
      }
    Json j = {{"n_min", a.n_min}, {"n_max", a.n_max}, {"checked", checked},
              {"non_negative", failures.size()}, {"failures", failures}, {"passed", failures.empty()}};
    emit(a.common.report, render(j, a.common.format, rows), out);
    out << "grid n in [" << a.n_min << ", " << a.n_max << "], 3 <= k <= n: " << checked << " pairs, "
        << failures.size() << " with a non-negative bound\n";
    for (const auto& f : failures)
      out << "  n=" << f["n"].get<int>() << " k=" << f["k"].get<int>() << " log bound " << num(f["log_exact_bound"].get<double>())
          << "\n";
    return failures.empty() ? kExitOk : kExitFailed;
  }
  const auto c = lower_bound_certificate(a.n, a.k);
  emit(a.common.report, render(certificate_json(c), a.common.format, {header, row_of(c)}), out);
  out << "n=" << c.n << " k=" << c.k << " m=" << c.m << " p=" << num(c.p) << ": ln(n! 16^m p^m) = "
      << num(c.log_exact_bound) << ", ln(e n (n/e)^n (16p)^m) = " << num(c.log_union_bound) << " -> "
      << (c.negative ? "negative" : "NOT negative") << "\n";
  return c.negative ? kExitOk : kExitFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spanning triangulations: constructions, exhaustive checks, spread oracle, simulation"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "build an (n,k)-triangulation");
  construct->add_option("--n", ca.n)->required();
  construct->add_option("--k", ca.k)->required();
  construct->add_option("--regime", ca.regime)->check(CLI::IsMember(kRegimes));
  construct->add_option("--out", ca.out_path, "triangulation JSON (standard output if absent)");
  construct->add_option("--dot", ca.dot_path, "Graphviz output");
  add_common(construct, ca.common);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "check the inequalities of one regime");
  verify->add_option("--in", va.in)->required();
  verify->add_option("--suite", va.suite)->required()->check(CLI::IsMember({"nested", "two-ring", "k4", "wheel", "density"}));
  verify->add_option("--max-edges", va.max_edges, "fragment edge cap")->check(CLI::Range(1, 64));
  verify->add_option("--mode", va.mode)->check(CLI::IsMember({"reduced", "direct"}));
  verify->add_option("--q", va.q, "density: q");
  verify->add_option("--eps", va.eps, "density: epsilon");
  verify->add_option("--delta", va.delta, "density: delta");
  verify->add_option("--budget", va.budget, "enumeration node budget")->check(CLI::PositiveNumber);
  add_common(verify, va.common);

  FragmentsArgs fa;
  auto* fragments = app.add_subcommand("fragments", "fragment parameter histogram and rooted counts");
  fragments->add_option("--in", fa.in)->required();
  fragments->add_option("--max-edges", fa.max_edges)->check(CLI::Range(1, 32));
  fragments->add_option("--rooted-edges", fa.rooted_edges)->check(CLI::Range(1, 32));
  fragments->add_option("--hist", fa.hist, "histogram CSV");
  fragments->add_option("--budget", fa.budget)->check(CLI::PositiveNumber);
  add_common(fragments, fa.common);

  SpreadArgs sa;
  auto* spread = app.add_subcommand("spread", "exact spread quantities (n <= 10)");
  spread->add_option("--in", sa.in)->required();
  spread->add_option("--mode", sa.mode)->check(CLI::IsMember({"qspread", "superspread", "spiro", "bounds"}));
  spread->add_option("--q", sa.q);
  spread->add_option("--beta", sa.beta);
  spread->add_option("--delta", sa.delta);
  spread->add_option("--max-frag", sa.max_frag)->check(CLI::Range(1, 64));
  spread->add_option("--levels", sa.levels, "spiro levels, strictly decreasing")->delimiter(',');
  add_common(spread, sa.common);

  SimArgs sim;
  auto* simulate = app.add_subcommand("simulate", "containment probability at one p");
  simulate->add_option("--n", sim.n)->required();
  simulate->add_option("--k", sim.k)->required();
  simulate->add_option("--regime", sim.regime)->check(CLI::IsMember(kRegimes));
  simulate->add_option("--p", sim.p)->required()->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--trials", sim.trials)->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--search-budget", sim.search_budget)->check(CLI::PositiveNumber);
  add_common(simulate, sim.common);

  SimArgs th;
  auto* threshold = app.add_subcommand("threshold", "bisection for the containment threshold");
  threshold->add_option("--n", th.n)->required();
  threshold->add_option("--k", th.k)->required();
  threshold->add_option("--regime", th.regime)->check(CLI::IsMember(kRegimes));
  threshold->add_option("--tol", th.tol)->check(CLI::PositiveNumber);
  threshold->add_option("--trials", th.trials, "trials per probe and round")->check(CLI::PositiveNumber);
  threshold->add_option("--rounds", th.rounds, "max rounds at an undecided probe")->check(CLI::Range(1, 64));
  threshold->add_option("--seed", th.seed);
  threshold->add_option("--search-budget", th.search_budget)->check(CLI::PositiveNumber);
  add_common(threshold, th.common);

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "threshold estimates over a range of n");
  sweep_cmd->add_option("--alpha", sw.alpha, "k = ceil(alpha n)")->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--k", sw.fixed_k, "fixed k");
  sweep_cmd->add_flag("--k-equals-n", sw.k_equals_n);
  sweep_cmd->add_option("--n-min", sw.n_min)->required();
  sweep_cmd->add_option("--n-max", sw.n_max)->required();
  sweep_cmd->add_option("--n-step", sw.n_step)->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", sw.out_path, "CSV rows");
  sweep_cmd->add_option("--tol", sw.sim.tol)->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--trials", sw.sim.trials)->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--rounds", sw.sim.rounds)->check(CLI::Range(1, 64));
  sweep_cmd->add_option("--seed", sw.sim.seed);
  sweep_cmd->add_option("--search-budget", sw.sim.search_budget)->check(CLI::PositiveNumber);
  add_common(sweep_cmd, sw.sim.common);

  LowerBoundArgs lb;
  auto* lower = app.add_subcommand("lowerbound", "first-moment certificate");
  lower->add_option("--n", lb.n);
  lower->add_option("--k", lb.k);
  lower->add_option("--n-min", lb.n_min, "grid mode: every n in range, every 3 <= k <= n");
  lower->add_option("--n-max", lb.n_max);
  add_common(lower, lb.common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*construct) return cmd_construct(ca, out);
    if (*verify) return cmd_verify(va, out);
    if (*fragments) return cmd_fragments(fa, out);
    if (*spread) return cmd_spread(sa, out);
    if (*simulate) return cmd_simulate(sim, out);
    if (*threshold) return cmd_threshold(th, out);
    if (*sweep_cmd) return cmd_sweep(sw, out);
    if (*lower) {
      if (lb.n_max == 0 && (lb.n == 0 || lb.k == 0)) throw ParameterError("give --n and --k, or --n-min and --n-max");
      return cmd_lowerbound(lb, out);
    }
  } catch (const BudgetExceeded& e) {
    err << "inconclusive: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConstructionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const StructuralError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitFailed;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int j = 1; j < argc; ++j) args.emplace_back(argv[j]);
  return run(args, std::cout, std::cerr);
}

}  // namespace spantri
