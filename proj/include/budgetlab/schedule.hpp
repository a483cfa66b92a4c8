#pragma once

#include <vector>

namespace budgetlab {

// How the per-item budget shares are shaped across an ordered list of steps.
enum class ScheduleKind {
    uniform,      // equal shares, complexity scores ignored
    weighted,     // shares proportional to complexity scores
    linear,       // scores shaded by the prior m - j
    polynomial,   // scores shaded by (m - j)^p
    exponential,  // scores shaded by gamma^j
    cosine,       // scores shaded by 0.5*(1 + cos(pi*j/(m-1))) + epsilon
};

struct ScheduleParams {
    ScheduleKind kind = ScheduleKind::uniform;
    double p = 2.0;         // polynomial exponent
    double gamma = 0.9;     // exponential ratio, in (0, 1)
    double epsilon = 0.01;  // cosine floor, > 0
    int min_budget = 1;     // smallest integer budget any item may receive
};

// Positive scores -> weights summing to 1.
std::vector<double> normalize_weights(const std::vector<double>& scores);

// Position-dependent decay factors rho_j for j = 0..m-1 (earlier steps first).
// uniform/weighted have a flat prior of ones; cosine with m == 1 is defined as {1}.
std::vector<double> decay_prior(ScheduleKind kind, int m, const ScheduleParams& params);

struct BudgetAllocation {
    std::vector<int> budgets;
    int total = 0;  // always equals the sum of budgets
};

// Integer split of `total_budget` proportional to weights[j] * prior[j]:
// floor the real shares, hand the remainder to the largest fractional parts
// (ties to the lower index), then lift any item below `min_budget` by taking
// from the currently largest item. Throws InfeasibleError when
// m * min_budget > total_budget.
BudgetAllocation allocate(int total_budget, const std::vector<double>& weights,
                          const std::vector<double>& prior, int min_budget);

// Convenience: normalize scores (equal weights for uniform), build the decay
// prior, and allocate.
BudgetAllocation schedule_and_allocate(int total_budget, const std::vector<double>& scores,
                                       const ScheduleParams& params);

}  // namespace budgetlab
