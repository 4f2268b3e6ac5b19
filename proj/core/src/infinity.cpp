#include "nirenberg/infinity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace nirenberg {

long morse_index_infinity(const std::vector<CriticalPointRecord>& members,
                          int n) {
  if (members.empty())
    throw DomainError("morse_index_infinity: empty member set");
  long idx = static_cast<long>(members.size()) - 1;
  for (const CriticalPointRecord& r : members) idx += n - r.morse_index;
  return idx;
}

double critical_level_infinity(const ProblemParams& params,
                               const std::vector<CriticalPointRecord>& members,
                               double sharp_constant) {
  if (members.empty())
    throw DomainError("critical_level_infinity: empty member set");
  const double inner_exp = params.nm2g() / (2.0 * params.gamma);
  const double outer_exp = 2.0 * params.gamma / params.n;
  double sum = 0.0;
  for (const CriticalPointRecord& r : members) {
    if (!(r.K_value > 0.0))
      throw DomainError("critical_level_infinity: K must be positive");
    sum += std::pow(r.K_value, -inner_exp);
  }
  return std::pow(sharp_constant, outer_exp) * std::pow(sum, outer_exp);
}

std::vector<InfinityPoint> enumerate_Finfinity(
    const ProblemParams& params, const std::vector<CriticalPointRecord>& Iplus,
    double sharp_constant, int p_max) {
  const int m = static_cast<int>(Iplus.size());
  if (p_max <= 0 && m > 20)
    throw CombinatorialOverflow(
        "enumerate_Finfinity: 2^" + std::to_string(m) +
        " subsets exceed the limit; pass an explicit p_max");
  const int pcap = p_max <= 0 ? m : std::min(p_max, m);

  std::vector<InfinityPoint> catalog;
  if (m == 0) return catalog;
  std::vector<int> subset;
  // lexicographic subset enumeration by size
  const std::function<void(int, int)> recurse = [&](int start, int remaining) {
    if (remaining == 0) {
      std::vector<CriticalPointRecord> members;
      for (int idx : subset) members.push_back(Iplus[idx]);
      InfinityPoint pt;
      pt.members = subset;
      pt.p = static_cast<int>(subset.size());
      pt.morse_index = morse_index_infinity(members, params.n);
      pt.critical_level =
          critical_level_infinity(params, members, sharp_constant);
      catalog.push_back(std::move(pt));
      return;
    }
    for (int i = start; i <= m - remaining; ++i) {
      subset.push_back(i);
      recurse(i + 1, remaining - 1);
      subset.pop_back();
    }
  };
  for (int p = 1; p <= pcap; ++p) recurse(0, p);

  std::sort(catalog.begin(), catalog.end(),
            [](const InfinityPoint& a, const InfinityPoint& b) {
              if (a.p != b.p) return a.p < b.p;
              if (a.critical_level != b.critical_level)
                return a.critical_level < b.critical_level;
              return a.members < b.members;
            });
  return catalog;
}

H1Result check_H1(const std::vector<InfinityPoint>& X) {
  H1Result res;
  for (const InfinityPoint& pt : X)
    res.sum += (pt.morse_index % 2 == 0) ? 1 : -1;
  res.holds = res.sum != 1;
  res.vacuous = X.empty();
  return res;
}

CriterionReport theorem12_criterion(const std::vector<CriticalPointRecord>& Iplus,
                                    int n) {
  CriterionReport rep;
  rep.vacuous_Iplus = Iplus.empty();

  // admissible k: no point has n - ind = k + 1
  std::vector<bool> excluded(n + 2, false);
  for (const CriticalPointRecord& r : Iplus) {
    const int co = n - r.morse_index;
    if (co - 1 >= 0 && co - 1 <= n + 1) excluded[co - 1] = true;
  }
  for (int k = 0; k <= n + 1; ++k)
    if (excluded[k]) rep.excluded_k.push_back(k);

  long best = -1;
  for (int k = 0; k <= n + 1; ++k) {
    if (excluded[k]) continue;
    long sum = 0;
    for (const CriticalPointRecord& r : Iplus) {
      const int co = n - r.morse_index;
      if (co <= k) sum += (co % 2 == 0) ? 1 : -1;
    }
    rep.per_k_sums[k] = sum;
    const long value = std::labs(1 - sum);
    if (value > best) {
      best = value;
      rep.maximizers.clear();
    }
    if (value == best) rep.maximizers.push_back(k);
  }
  rep.criterion_value = std::max(best, 0L);
  if (rep.criterion_value != 0 && !rep.maximizers.empty()) {
    rep.k0 = rep.maximizers.front();
    rep.conclusion = CriterionConclusion::ExistsWithIndexBound;
    rep.index_bound = *rep.k0 + 1;
  } else {
    rep.conclusion = CriterionConclusion::Inconclusive;
  }
  return rep;
}

}  // namespace nirenberg
