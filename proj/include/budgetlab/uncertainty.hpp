#pragma once

#include <vector>

namespace budgetlab {

enum class LogBase { natural, bits };

// M sampled predictive distributions over one shared support of size K.
struct PredictiveEnsemble {
    std::vector<std::vector<double>> members;
};

// Shannon entropy of one distribution; entries must be nonnegative and sum to 1
// within 1e-9. The 0 * log 0 terms contribute nothing.
double entropy(const std::vector<double>& dist, LogBase base);

struct UncertaintyReport {
    double total = 0.0;      // entropy of the ensemble mean
    double aleatoric = 0.0;  // mean entropy of the members
    double epistemic = 0.0;  // total - aleatoric (mutual information), >= -1e-12
    LogBase base = LogBase::natural;
};

// Splits predictive uncertainty into an irreducible part (aleatoric) and the
// part that more samples would remove (epistemic). The identity
// total == aleatoric + epistemic holds exactly by construction.
UncertaintyReport decompose(const PredictiveEnsemble& ensemble, LogBase base);

}  // namespace budgetlab
