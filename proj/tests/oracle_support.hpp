#pragma once

// Slow-but-independent reference implementations used only by the acceptance
// binary. Nothing here shares code with the library under test: the optimizer
// below is a pairwise-transfer coordinate descent over the budget simplex and
// the peak locator is a plain bracketing bisection, so agreement with the
// library is meaningful evidence rather than an identity.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline double objective(const std::vector<double>& c, const std::vector<double>& beta,
                        const std::vector<double>& budgets) {
    double sum = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) sum += c[j] / std::pow(budgets[j], beta[j]);
    return sum;
}

// Minimizes sum_j c_j / b_j^beta_j over { b > 0 : sum b = total } by repeated
// two-coordinate transfers. For each pair (i, j) the optimal transfer t solves
//   c_i*beta_i / (b_i + t)^(beta_i + 1) == c_j*beta_j / (b_j - t)^(beta_j + 1),
// whose left-minus-right difference is strictly decreasing in t, so bisection
// nails it. Each transfer is an exact minimization over its pair, and cycling
// over all pairs converges to the unique constrained optimum of this strictly
// convex separable objective.
inline std::vector<double> minimize(const std::vector<double>& c,
                                    const std::vector<double>& beta, double total) {
    const std::size_t m = c.size();
    std::vector<double> b(m, total / static_cast<double>(m));
    if (m < 2) return b;
    const double floor = 1e-12 * total;
    const auto marginal = [&](std::size_t j, double bj) {
        return c[j] * beta[j] / std::pow(bj, beta[j] + 1.0);
    };
    for (int sweep = 0; sweep < 400; ++sweep) {
        double largest_move = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                double lo = -(b[i] - floor);
                double hi = b[j] - floor;
                const auto diff = [&](double t) {
                    return marginal(i, b[i] + t) - marginal(j, b[j] - t);
                };
                double t = 0.0;
                if (diff(lo) <= 0.0) {
                    t = lo;  // optimum wants b_i below the floor; clamp
                } else if (diff(hi) >= 0.0) {
                    t = hi;  // optimum wants b_j below the floor; clamp
                } else {
                    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        (diff(mid) > 0.0 ? lo : hi) = mid;
                    }
                    t = 0.5 * (lo + hi);
                }
                b[i] += t;
                b[j] -= t;
                largest_move = std::max(largest_move, std::fabs(t));
            }
        }
        if (largest_move < 1e-15 * total) break;
    }
    return b;
}

// True when no transfer of exactly `step` tokens between any ordered pair of
// coordinates lowers the objective: the point is a local minimum of the
// lattice search with that step.
inline bool grid_stationary(const std::vector<double>& c, const std::vector<double>& beta,
                            const std::vector<double>& budgets, double step) {
    const double base = objective(c, beta, budgets);
    const double slack = 1e-12 * std::fabs(base);
    std::vector<double> probe = budgets;
    for (std::size_t i = 0; i < budgets.size(); ++i) {
        for (std::size_t j = 0; j < budgets.size(); ++j) {
            if (i == j || budgets[j] <= step) continue;
            probe[i] = budgets[i] + step;
            probe[j] = budgets[j] - step;
            const bool improves = objective(c, beta, probe) < base - slack;
            probe[i] = budgets[i];
            probe[j] = budgets[j];
            if (improves) return false;
        }
    }
    return true;
}

// Stationary point of f(beta) = (beta*c)^(1/(beta+1)): the root of
//   g(beta) = ln(beta*c) - 1 - 1/beta,
// which is strictly increasing, so a doubling/halving bracket plus bisection
// finds the unique root. (For small c the root can sit far to the right.)
inline double beta_peak(double c) {
    const auto g = [c](double beta) { return std::log(beta * c) - 1.0 - 1.0 / beta; };
    double lo = 1.0, hi = 1.0;
    for (int it = 0; it < 200 && g(lo) >= 0.0; ++it) lo *= 0.5;
    for (int it = 0; it < 200 && g(hi) <= 0.0; ++it) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle
