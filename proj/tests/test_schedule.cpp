#include <cmath>
#include <numeric>
#include <vector>

#include <doctest.h>

#include "budgetlab/errors.hpp"
#include "budgetlab/schedule.hpp"

using namespace budgetlab;

namespace {

ScheduleParams params_for(ScheduleKind kind, int min_budget = 1) {
    ScheduleParams params;
    params.kind = kind;
    params.min_budget = min_budget;
    return params;
}

std::vector<int> split(int total, ScheduleKind kind, int m = 5, int min_budget = 1) {
    const std::vector<double> scores(static_cast<size_t>(m), 1.0);
    return schedule_and_allocate(total, scores, params_for(kind, min_budget)).budgets;
}

}  // namespace

TEST_CASE("normalize_weights scales positive scores to a unit sum") {
    const auto weights = normalize_weights({60.0, 40.0});
    CHECK(weights[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(weights[1] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK_THROWS_AS(normalize_weights({}), DomainError);
    CHECK_THROWS_AS(normalize_weights({1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(normalize_weights({1.0, -2.0}), DomainError);
}

TEST_CASE("decay priors take their documented shapes") {
    const ScheduleParams defaults;

    const auto flat = decay_prior(ScheduleKind::uniform, 4, defaults);
    CHECK(flat == std::vector<double>{1.0, 1.0, 1.0, 1.0});
    CHECK(decay_prior(ScheduleKind::weighted, 3, defaults) ==
          std::vector<double>{1.0, 1.0, 1.0});

    CHECK(decay_prior(ScheduleKind::linear, 5, defaults) ==
          std::vector<double>{5.0, 4.0, 3.0, 2.0, 1.0});

    const auto poly = decay_prior(ScheduleKind::polynomial, 5, defaults);  // p = 2
    CHECK(poly == std::vector<double>{25.0, 16.0, 9.0, 4.0, 1.0});

    const auto expo = decay_prior(ScheduleKind::exponential, 5, defaults);  // gamma = 0.9
    for (int j = 0; j < 5; ++j) CHECK(expo[j] == doctest::Approx(std::pow(0.9, j)).epsilon(1e-12));

    const auto cosine = decay_prior(ScheduleKind::cosine, 5, defaults);  // epsilon = 0.01
    CHECK(cosine[0] == doctest::Approx(1.01).epsilon(1e-12));
    CHECK(cosine[1] == doctest::Approx(0.8635533905932737).epsilon(1e-12));
    CHECK(cosine[2] == doctest::Approx(0.51).epsilon(1e-12));
    CHECK(cosine[3] == doctest::Approx(0.15644660940672628).epsilon(1e-9));
    CHECK(cosine[4] == doctest::Approx(0.01).epsilon(1e-9));

    // One single step: the cosine formula would divide by zero, so it is pinned to {1}.
    CHECK(decay_prior(ScheduleKind::cosine, 1, defaults) == std::vector<double>{1.0});
}

TEST_CASE("decay priors validate their parameters") {
    ScheduleParams params;
    CHECK_THROWS_AS(decay_prior(ScheduleKind::linear, 0, params), DomainError);
    params.p = 0.0;
    CHECK_THROWS_AS(decay_prior(ScheduleKind::polynomial, 3, params), DomainError);
    params = ScheduleParams{};
    params.gamma = 1.0;
    CHECK_THROWS_AS(decay_prior(ScheduleKind::exponential, 3, params), DomainError);
    params = ScheduleParams{};
    params.epsilon = 0.0;
    CHECK_THROWS_AS(decay_prior(ScheduleKind::cosine, 3, params), DomainError);
}

TEST_CASE("integer allocation reproduces the reference splits for B=100, m=5") {
    CHECK(split(100, ScheduleKind::uniform) == std::vector<int>{20, 20, 20, 20, 20});
    CHECK(split(100, ScheduleKind::linear) == std::vector<int>{33, 27, 20, 13, 7});
    CHECK(split(100, ScheduleKind::polynomial) == std::vector<int>{46, 29, 16, 7, 2});
    CHECK(split(100, ScheduleKind::exponential) == std::vector<int>{24, 22, 20, 18, 16});
    CHECK(split(100, ScheduleKind::cosine) == std::vector<int>{39, 34, 20, 6, 1});
    // Without the floor the cosine tail legitimately hits zero.
    CHECK(split(100, ScheduleKind::cosine, 5, 0) == std::vector<int>{40, 34, 20, 6, 0});
}

TEST_CASE("weighted allocation splits by score mass") {
    const auto result = schedule_and_allocate(10, {60.0, 40.0}, params_for(ScheduleKind::weighted));
    CHECK(result.budgets == std::vector<int>{6, 4});
    CHECK(result.total == 10);

    // Scores interact with the positional prior: later-but-heavier items still
    // lose budget to the front-loading.
    const auto shaped =
        schedule_and_allocate(100, {30.0, 30.0, 40.0}, params_for(ScheduleKind::linear));
    CHECK(shaped.budgets == std::vector<int>{47, 32, 21});
}

TEST_CASE("uniform scheduling ignores the scores entirely") {
    const auto result = schedule_and_allocate(10, {1.0, 100.0}, params_for(ScheduleKind::uniform));
    CHECK(result.budgets == std::vector<int>{5, 5});
}

TEST_CASE("remainder goes to the largest fractional part, ties to the lower index") {
    // Equal shares 2.5/2.5: the single leftover token goes to the first item.
    const auto result = allocate(5, {0.5, 0.5}, {1.0, 1.0}, 0);
    CHECK(result.budgets == std::vector<int>{3, 2});
}

TEST_CASE("minimum budget is lifted from the largest donor") {
    // Extreme skew: shares are 99.0.., 0.9.., the floor pulls item 2 up to 5.
    const auto result = allocate(100, {0.99, 0.01}, {1.0, 1.0}, 5);
    CHECK(result.budgets == std::vector<int>{95, 5});
    CHECK(result.total == 100);
}

TEST_CASE("allocation conserves the total and rejects infeasible floors") {
    const auto result = allocate(17, {0.2, 0.3, 0.5}, {3.0, 2.0, 1.0}, 2);
    CHECK(std::accumulate(result.budgets.begin(), result.budgets.end(), 0) == 17);
    for (int b : result.budgets) CHECK(b >= 2);

    CHECK_THROWS_AS(allocate(5, {0.5, 0.5}, {1.0, 1.0}, 3), InfeasibleError);
    CHECK_THROWS_AS(allocate(0, {1.0}, {1.0}, 0), DomainError);
    CHECK_THROWS_AS(allocate(10, {}, {}, 0), DomainError);
    CHECK_THROWS_AS(allocate(10, {0.5, 0.5}, {1.0}, 0), DomainError);
    CHECK_THROWS_AS(allocate(10, {0.5, -0.5}, {1.0, 1.0}, 0), DomainError);
    CHECK_THROWS_AS(schedule_and_allocate(10, {}, ScheduleParams{}), DomainError);
}

TEST_CASE("single-step schedules hand the whole budget to the one step") {
    for (const ScheduleKind kind :
         {ScheduleKind::uniform, ScheduleKind::weighted, ScheduleKind::linear,
          ScheduleKind::polynomial, ScheduleKind::exponential, ScheduleKind::cosine}) {
        const auto result = schedule_and_allocate(37, {4.0}, params_for(kind));
        CHECK(result.budgets == std::vector<int>{37});
    }
}
