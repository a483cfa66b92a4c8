#include "budgetlab/bam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "budgetlab/errors.hpp"

namespace budgetlab {

namespace {

void check_params(const UtilityParams& params) {
    if (!(params.alpha > 0.0)) throw DomainError("utility: alpha must be positive");
    if (!(params.c > 0.0)) throw DomainError("utility: c must be positive");
    if (!(params.beta > 0.0)) throw DomainError("utility: beta must be positive");
    if (!(params.aleatoric >= 0.0 && params.aleatoric < 1.0))
        throw DomainError("utility: aleatoric must lie in [0, 1)");
}

void check_instance(const AllocationInstance& instance) {
    if (!(instance.total_budget > 0.0))
        throw DomainError("allocation: total budget must be positive");
    if (instance.items.empty()) throw DomainError("allocation: need at least one item");
    for (const auto& item : instance.items) {
        if (!(item.c > 0.0)) throw DomainError("allocation: every c must be positive");
        if (!(item.beta > 0.0)) throw DomainError("allocation: every beta must be positive");
    }
}

// sum_j (c_j*beta_j / lambda)^(1/(beta_j+1)); strictly decreasing in lambda.
double budget_sum_at(const AllocationInstance& instance, double lambda) {
    double sum = 0.0;
    for (const auto& item : instance.items)
        sum += std::pow(item.c * item.beta / lambda, 1.0 / (item.beta + 1.0));
    return sum;
}

}  // namespace

double utility(const UtilityParams& params, double budget) {
    check_params(params);
    if (!(budget > 0.0)) throw DomainError("utility: budget must be positive");
    return params.alpha * (1.0 - params.c / std::pow(budget, params.beta) - params.aleatoric);
}

std::vector<double> allocate_closed_form(const AllocationInstance& instance) {
    check_instance(instance);
    const auto& items = instance.items;
    std::vector<double> weight(items.size());
    double total_weight = 0.0;
    for (size_t j = 0; j < items.size(); ++j) {
        weight[j] = std::pow(items[j].c * items[j].beta, 1.0 / (items[j].beta + 1.0));
        total_weight += weight[j];
    }
    std::vector<double> budgets(items.size());
    for (size_t j = 0; j < items.size(); ++j)
        budgets[j] = instance.total_budget * weight[j] / total_weight;
    return budgets;
}

LagrangeSolution allocate_kkt(const AllocationInstance& instance, double tolerance) {
    check_instance(instance);
    if (!(tolerance > 0.0)) throw DomainError("allocate_kkt: tolerance must be positive");

    const auto& items = instance.items;
    const double B = instance.total_budget;
    LagrangeSolution solution;

    if (items.size() == 1) {
        const auto& item = items[0];
        solution.budgets = {B};
        solution.lambda = item.c * item.beta * std::pow(B, -(item.beta + 1.0));
        solution.objective = item.c / std::pow(B, item.beta);
        solution.kkt_residual = 0.0;
        return solution;
    }

    constexpr int kMaxIterations = 200;

    // Bracket: small lambda inflates the sum, large lambda shrinks it.
    double lambda_lo = 1.0;
    for (int i = 0; budget_sum_at(instance, lambda_lo) < B; ++i) {
        if (i >= kMaxIterations)
            throw SolverError("allocate_kkt: failed to bracket lambda from below",
                              budget_sum_at(instance, lambda_lo) - B);
        lambda_lo *= 0.5;
    }
    double lambda_hi = 1.0;
    for (int i = 0; budget_sum_at(instance, lambda_hi) > B; ++i) {
        if (i >= kMaxIterations)
            throw SolverError("allocate_kkt: failed to bracket lambda from above",
                              budget_sum_at(instance, lambda_hi) - B);
        lambda_hi *= 2.0;
    }

    double lambda = 0.5 * (lambda_lo + lambda_hi);
    double residual = budget_sum_at(instance, lambda) - B;
    bool converged = std::abs(residual) <= tolerance * B;
    for (int i = 0; i < kMaxIterations && !converged; ++i) {
        lambda = 0.5 * (lambda_lo + lambda_hi);
        const double sum = budget_sum_at(instance, lambda);
        residual = sum - B;
        if (std::abs(residual) <= tolerance * B) {
            converged = true;
            break;
        }
        if (sum > B)
            lambda_lo = lambda;
        else
            lambda_hi = lambda;
    }
    if (!converged)
        throw SolverError("allocate_kkt: bisection did not reach tolerance in 200 iterations",
                          residual);

    solution.lambda = lambda;
    solution.budgets.resize(items.size());
    double multiplier_min = std::numeric_limits<double>::infinity();
    double multiplier_max = 0.0;
    for (size_t j = 0; j < items.size(); ++j) {
        const auto& item = items[j];
        solution.budgets[j] = std::pow(item.c * item.beta / lambda, 1.0 / (item.beta + 1.0));
        solution.objective += item.c / std::pow(solution.budgets[j], item.beta);
        const double q = item.c * item.beta * std::pow(solution.budgets[j], -(item.beta + 1.0));
        multiplier_min = std::min(multiplier_min, q);
        multiplier_max = std::max(multiplier_max, q);
    }
    solution.kkt_residual = (multiplier_max - multiplier_min) / multiplier_max;
    return solution;
}

UnimodalScan unimodal_argmax(double c, double lo, double hi, double step) {
    if (!(c > 0.0)) throw DomainError("unimodal_argmax: c must be positive");
    if (!(lo > 0.0)) throw DomainError("unimodal_argmax: range must be positive");
    if (!(hi > lo)) throw DomainError("unimodal_argmax: empty range");
    if (!(step > 0.0)) throw DomainError("unimodal_argmax: step must be positive");

    const auto f = [c](double beta) { return std::pow(beta * c, 1.0 / (beta + 1.0)); };

    std::vector<double> values;
    values.reserve(static_cast<size_t>((hi - lo) / step) + 2);
    std::vector<double> grid;
    for (long long i = 0;; ++i) {
        const double beta = lo + static_cast<double>(i) * step;
        if (beta > hi + 0.5 * step) break;
        grid.push_back(std::min(beta, hi));
        values.push_back(f(grid.back()));
        if (beta >= hi) break;
    }
    if (values.size() < 3) throw DomainError("unimodal_argmax: grid needs at least 3 points");

    UnimodalScan scan;
    size_t best = 0;
    for (size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    scan.beta_star = grid[best];
    scan.f_star = values[best];

    // Single peak: once the sequence starts descending it must never rise again.
    bool descending = false;
    bool unimodal = true;
    for (size_t i = 1; i < values.size(); ++i) {
        const double diff = values[i] - values[i - 1];
        if (diff < 0.0) {
            descending = true;
        } else if (diff > 0.0 && descending) {
            unimodal = false;
            break;
        }
    }
    scan.is_unimodal = unimodal;

    for (size_t i = 1; i + 1 < values.size(); ++i)
        if (values[i] > values[i - 1] && values[i] > values[i + 1]) ++scan.interior_maxima;

    return scan;
}

}  // namespace budgetlab
