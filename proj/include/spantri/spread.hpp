#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spantri/exact.hpp"
#include "spantri/fragments.hpp"
#include "spantri/triangulation.hpp"

namespace spantri {

/// Order of Aut(T) as an abstract graph, by degree-filtered backtracking.
/// Throws BudgetExceeded after `budget` search nodes.
BigInt automorphism_count(const Triangulation& t, std::uint64_t budget = 50'000'000);

/// Same quantity by testing all n! permutations (n <= 10).
BigInt automorphism_count_bruteforce(const Triangulation& t);

/// Index of the pair {a, b} in the lexicographic list of pairs of [n].
int pair_index(int n, int a, int b);

/// Exact copy counts of T inside K_n. Holds the table of all copies as edge
/// masks over the C(n,2) pairs, so n <= 10.
class SpreadOracle {
 public:
  explicit SpreadOracle(const Triangulation& t);

  const Triangulation& triangulation() const { return t_; }
  int n() const { return n_; }
  const BigInt& automorphisms() const { return aut_; }
  /// |H| = n!/|Aut(T)|.
  std::uint64_t copies() const { return copies_.size(); }
  const std::vector<std::uint64_t>& copy_masks() const { return copies_; }

  std::uint64_t mask_of(const std::vector<Edge>& pairs) const;
  std::uint64_t identity_mask() const { return identity_; }

  /// Copies containing I, by scanning the copy table.
  std::uint64_t count_by_copies(std::uint64_t mask) const;
  /// Copies containing I, by counting injective placements of V(I) into T
  /// that carry I-edges onto T-edges, times (n - v(I))! / |Aut(T)|.
  BigInt count_by_embedding(const std::vector<Edge>& pairs) const;
  /// Both methods; throws ConsistencyError if they differ.
  std::uint64_t count_extensions(const std::vector<Edge>& pairs) const;

  /// M_i(A) = number of copies meeting A in at least i pairs.
  std::uint64_t copies_meeting(std::uint64_t a_mask, int i) const;

 private:
  Triangulation t_;
  int n_;
  BigInt aut_;
  std::uint64_t identity_ = 0;
  std::vector<std::uint64_t> copies_;
  std::vector<std::vector<char>> adjacent_;
};

struct SpreadCheck {
  std::string id;
  std::string statement;
  bool applicable = true;
  std::string note;               // why not applicable, or context
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  double worst_ratio = 0.0;       // largest count/bound seen
  std::string worst;              // fragment attaining worst_ratio
};

struct ExtensionRow {
  Fragment params;
  std::uint64_t fragments = 0;    // fragments of T with these parameters
  std::uint64_t max_count = 0;    // largest |H ∩ <I>| among them
};

struct SpreadReport {
  std::string mode;
  int n = 0;
  int m = 0;
  BigInt automorphisms;
  std::uint64_t copies = 0;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<SpreadCheck> checks;
  std::vector<ExtensionRow> rows;
  bool passed = false;
};

struct SpreadOptions {
  Rational q{1, 2};
  Rational beta{1, 2};
  Rational delta{1, 2};
  int max_fragment_edges = 6;
  std::vector<int> levels;        // empty: m, m/n^(1/5), ..., m/n, 1 rounded down, deduplicated
};

/// q-spread over every fragment I of T with 1..max edges, reporting the
/// measured spread constant max (|H ∩ <I>|/|H|)^(1/|I|).
SpreadReport check_qspread(const SpreadOracle& oracle, const SpreadOptions& opts);

/// q-spread plus |H ∩ <I>| <= q^|I| m^(-beta c_I) |H| for |I| <= delta m.
SpreadReport check_superspread(const SpreadOracle& oracle, const SpreadOptions& opts);

/// M_i(A) <= q^i |H| for A in a copy with l_{t'} >= |A| >= l_{t'+1} and i >= l_{t'+1}.
SpreadReport check_spiro_spread(const SpreadOracle& oracle, const SpreadOptions& opts);

/// Exact extension counts against the analytic bounds that apply to T.
SpreadReport check_extension_bounds(const SpreadOracle& oracle, const SpreadOptions& opts);

/// The default level list for m edges on n vertices.
std::vector<int> default_spiro_levels(int m, int n);

/// Lower and upper rational brackets of x! = Gamma(x + 1) for x = half / 2 >= 0.
std::pair<Rational, Rational> half_factorial_bounds(int half);

}  // namespace spantri
