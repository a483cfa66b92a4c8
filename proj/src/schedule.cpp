#include "budgetlab/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "budgetlab/errors.hpp"

namespace budgetlab {

std::vector<double> normalize_weights(const std::vector<double>& scores) {
    if (scores.empty()) throw DomainError("normalize_weights: scores must be nonempty");
    double sum = 0.0;
    for (double s : scores) {
        if (!(s > 0.0)) throw DomainError("normalize_weights: scores must be positive");
        sum += s;
    }
    std::vector<double> weights(scores.size());
    for (size_t j = 0; j < scores.size(); ++j) weights[j] = scores[j] / sum;
    return weights;
}

std::vector<double> decay_prior(ScheduleKind kind, int m, const ScheduleParams& params) {
    if (m < 1) throw DomainError("decay_prior: m must be at least 1");
    std::vector<double> prior(static_cast<size_t>(m), 1.0);
    switch (kind) {
        case ScheduleKind::uniform:
        case ScheduleKind::weighted:
            break;
        case ScheduleKind::linear:
            for (int j = 0; j < m; ++j) prior[j] = static_cast<double>(m - j);
            break;
        case ScheduleKind::polynomial:
            if (!(params.p > 0.0)) throw DomainError("decay_prior: p must be positive");
            for (int j = 0; j < m; ++j)
                prior[j] = std::pow(static_cast<double>(m - j), params.p);
            break;
        case ScheduleKind::exponential:
            if (!(params.gamma > 0.0 && params.gamma < 1.0))
                throw DomainError("decay_prior: gamma must lie in (0, 1)");
            for (int j = 0; j < m; ++j) prior[j] = std::pow(params.gamma, j);
            break;
        case ScheduleKind::cosine:
            if (!(params.epsilon > 0.0))
                throw DomainError("decay_prior: epsilon must be positive");
            if (m == 1) break;  // the formula divides by m - 1
            for (int j = 0; j < m; ++j)
                prior[j] = 0.5 * (1.0 + std::cos(M_PI * j / (m - 1))) + params.epsilon;
            break;
    }
    return prior;
}

BudgetAllocation allocate(int total_budget, const std::vector<double>& weights,
                          const std::vector<double>& prior, int min_budget) {
    if (total_budget < 1) throw DomainError("allocate: total budget must be at least 1");
    if (weights.empty()) throw DomainError("allocate: weights must be nonempty");
    if (weights.size() != prior.size())
        throw DomainError("allocate: weights and prior must have the same length");
    if (min_budget < 0) throw DomainError("allocate: min_budget must be nonnegative");
    const int m = static_cast<int>(weights.size());
    if (static_cast<long long>(m) * min_budget > total_budget)
        throw InfeasibleError("allocate: m * min_budget exceeds the total budget");

    double mass = 0.0;
    for (int j = 0; j < m; ++j) {
        if (!(weights[j] > 0.0)) throw DomainError("allocate: weights must be positive");
        if (!(prior[j] > 0.0)) throw DomainError("allocate: prior must be positive");
        mass += weights[j] * prior[j];
    }

    // Real shares -> floors; remainder goes to the largest fractional parts,
    // ties broken toward the lower index.
    std::vector<double> share(m);
    std::vector<int> budget(m);
    int floored = 0;
    for (int j = 0; j < m; ++j) {
        share[j] = total_budget * weights[j] * prior[j] / mass;
        budget[j] = static_cast<int>(std::floor(share[j]));
        floored += budget[j];
    }
    int remainder = total_budget - floored;
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return share[a] - std::floor(share[a]) > share[b] - std::floor(share[b]);
    });
    for (int r = 0; r < remainder; ++r) ++budget[order[r]];

    // Lift any item below the minimum, paying from the currently largest item
    // (never dragging a donor below the minimum itself).
    for (int j = 0; j < m; ++j) {
        while (budget[j] < min_budget) {
            int need = min_budget - budget[j];
            budget[j] = min_budget;
            while (need > 0) {
                int donor = 0;
                for (int k = 1; k < m; ++k)
                    if (budget[k] > budget[donor]) donor = k;
                const int take = std::min(need, budget[donor] - min_budget);
                budget[donor] -= take;
                need -= take;
            }
        }
    }

    BudgetAllocation result;
    result.budgets = std::move(budget);
    result.total = std::accumulate(result.budgets.begin(), result.budgets.end(), 0);
    return result;
}

BudgetAllocation schedule_and_allocate(int total_budget, const std::vector<double>& scores,
                                       const ScheduleParams& params) {
    if (scores.empty()) throw DomainError("schedule_and_allocate: scores must be nonempty");
    const int m = static_cast<int>(scores.size());
    std::vector<double> weights;
    if (params.kind == ScheduleKind::uniform)
        weights.assign(static_cast<size_t>(m), 1.0 / m);
    else
        weights = normalize_weights(scores);
    const std::vector<double> prior = decay_prior(params.kind, m, params);
    return allocate(total_budget, weights, prior, params.min_budget);
}

}  // namespace budgetlab
