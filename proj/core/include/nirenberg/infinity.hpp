#pragma once

#include <map>
#include <optional>
#include <vector>

#include "nirenberg/curvature.hpp"

namespace nirenberg {

/// A critical point at infinity: an unordered tuple of distinct I^+ points,
/// its Morse index p - 1 + sum (n - ind(K, y)), and its critical level
/// S^{2g/n} (sum K(y)^{-(n-2g)/(2g)})^{2g/n}.
struct InfinityPoint {
  std::vector<int> members;  // indices into the I^+ list
  int p = 0;
  long morse_index = 0;
  double critical_level = 0.0;
};

long morse_index_infinity(const std::vector<CriticalPointRecord>& members, int n);

double critical_level_infinity(const ProblemParams& params,
                               const std::vector<CriticalPointRecord>& members,
                               double sharp_constant);

/// Enumerates one InfinityPoint per unordered subset of I^+ of size
/// 1..min(p_max, |I^+|), sorted by (p, critical_level). p_max <= 0 means all.
/// Throws CombinatorialOverflow when 2^{|I^+|} > 10^6 without an explicit
/// p_max.
std::vector<InfinityPoint> enumerate_Finfinity(
    const ProblemParams& params, const std::vector<CriticalPointRecord>& Iplus,
    double sharp_constant, int p_max = 0);

struct H1Result {
  long sum = 0;
  bool holds = false;    // sum != 1
  bool vacuous = false;  // empty subset; flagged since (H2) is not checked
};

/// Evaluates the signed index count sum (-1)^{ind} over a chosen subset of
/// the catalog; the existence hypothesis holds when the sum differs from 1.
H1Result check_H1(const std::vector<InfinityPoint>& X);

enum class CriterionConclusion { ExistsWithIndexBound, Inconclusive };

struct CriterionReport {
  std::vector<int> excluded_k;      // k in [0, n+1] outside the admissible set
  std::map<int, long> per_k_sums;   // k -> signed partial index count
  std::optional<int> k0;            // smallest maximizer, when criterion != 0
  std::vector<int> maximizers;
  long criterion_value = 0;
  CriterionConclusion conclusion = CriterionConclusion::Inconclusive;
  int index_bound = -1;             // k0 + 1 when existence is concluded
  bool vacuous_Iplus = false;
};

/// Euler-Hopf-type existence criterion over the admissible k-range
/// {0..n+1} (sums stabilize for k >= n since n - ind lies in [0, n]):
/// criterion = max_k |1 - sum_{y in I^+, n-ind(y) <= k} (-1)^{n-ind(y)}|.
CriterionReport theorem12_criterion(const std::vector<CriticalPointRecord>& Iplus,
                                    int n);

}  // namespace nirenberg
