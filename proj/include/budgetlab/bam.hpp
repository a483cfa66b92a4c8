#pragma once

#include <vector>

namespace budgetlab {

// Scalar utility of spending `budget` tokens on one reasoning step:
//   alpha * (1 - c / budget^beta - aleatoric)
// c scales the reducible (epistemic) part, beta is the diminishing-returns
// exponent, aleatoric is the irreducible floor.
struct UtilityParams {
    double alpha = 1.0;
    double c = 1.0;
    double beta = 1.0;
    double aleatoric = 0.0;
};

double utility(const UtilityParams& params, double budget);

// One item of a continuous budget split: minimize sum_j c_j / b_j^beta_j
// subject to sum_j b_j = total_budget, b_j > 0.
struct AllocationItem {
    double c;
    double beta;
};

struct AllocationInstance {
    double total_budget = 0.0;
    std::vector<AllocationItem> items;
};

// Proportional rule b_j = B * (c_j*beta_j)^(1/(beta_j+1)) / sum_k (c_k*beta_k)^(1/(beta_k+1)).
// Coincides with the constrained optimum exactly when all beta_j are equal;
// kept as its own operation because the two rules genuinely differ otherwise.
std::vector<double> allocate_closed_form(const AllocationInstance& instance);

struct LagrangeSolution {
    std::vector<double> budgets;
    double lambda = 0.0;        // shared multiplier c_j*beta_j*b_j^-(beta_j+1)
    double objective = 0.0;     // sum_j c_j / b_j^beta_j at the solution
    double kkt_residual = 0.0;  // max relative spread of the per-item multipliers
};

// Exact stationarity solve: bisection on lambda -> sum_j (c_j*beta_j/lambda)^(1/(beta_j+1)),
// which is strictly decreasing in lambda. Stops when |sum - B| <= tolerance * B.
LagrangeSolution allocate_kkt(const AllocationInstance& instance, double tolerance = 1e-9);

struct UnimodalScan {
    double beta_star = 0.0;  // grid argmax of f
    double f_star = 0.0;
    bool is_unimodal = false;  // successive differences change sign at most once, + to -
    int interior_maxima = 0;   // count of strict interior local maxima on the grid
};

// Scans f(beta) = (beta*c)^(1/(beta+1)) on the uniform grid lo, lo+step, ... <= hi.
UnimodalScan unimodal_argmax(double c, double lo, double hi, double step);

}  // namespace budgetlab
