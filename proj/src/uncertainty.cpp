#include "budgetlab/uncertainty.hpp"

#include <cmath>
#include <string>

#include "budgetlab/errors.hpp"

namespace budgetlab {

namespace {

constexpr double kNormalizationTolerance = 1e-9;

void check_distribution(const std::vector<double>& dist) {
    if (dist.empty()) throw DomainError("entropy: distribution must be nonempty");
    double sum = 0.0;
    for (double p : dist) {
        if (!(p >= 0.0)) throw DomainError("entropy: probabilities must be nonnegative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kNormalizationTolerance)
        throw DomainError("entropy: distribution must sum to 1 within 1e-9, got " +
                          std::to_string(sum));
}

double entropy_nats(const std::vector<double>& dist) {
    double h = 0.0;
    for (double p : dist)
        if (p > 0.0) h -= p * std::log(p);
    return h;
}

}  // namespace

double entropy(const std::vector<double>& dist, LogBase base) {
    check_distribution(dist);
    const double nats = entropy_nats(dist);
    return base == LogBase::bits ? nats / std::log(2.0) : nats;
}

UncertaintyReport decompose(const PredictiveEnsemble& ensemble, LogBase base) {
    const auto& members = ensemble.members;
    if (members.empty()) throw DomainError("decompose: ensemble must have at least one member");
    const size_t support = members[0].size();
    for (const auto& member : members) {
        if (member.size() != support)
            throw DomainError("decompose: members must share one support");
        check_distribution(member);
    }

    std::vector<double> mixture(support, 0.0);
    double aleatoric_nats = 0.0;
    for (const auto& member : members) {
        for (size_t k = 0; k < support; ++k) mixture[k] += member[k];
        aleatoric_nats += entropy_nats(member);
    }
    for (size_t k = 0; k < support; ++k) mixture[k] /= static_cast<double>(members.size());
    aleatoric_nats /= static_cast<double>(members.size());

    const double total_nats = entropy_nats(mixture);
    // Divide rather than multiply by a reciprocal so that x/x collapses to
    // exactly 1.0 in the clean textbook cases.
    const double div = base == LogBase::bits ? std::log(2.0) : 1.0;

    UncertaintyReport report;
    report.base = base;
    report.total = total_nats / div;
    report.aleatoric = aleatoric_nats / div;
    report.epistemic = report.total - report.aleatoric;
    return report;
}

}  // namespace budgetlab
