#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace budgetlab {

// Accuracy-per-compute measures. `accuracy_pct` is on the 0..100 scale and
// `tokens` is the mean billed completion-token count; both results keep the
// conventional x100 presentation so published tables can be reproduced.
double e3(double accuracy_pct, double tokens);        // accuracy^2 / tokens
double a_over_t(double accuracy_pct, double tokens);  // accuracy / tokens * 100

// Canonical answer form: innermost boxed expression when a \boxed{...} marker
// is present, whitespace runs collapsed, trailing periods stripped. Applied to
// both sides of exact_match; idempotent.
std::string normalize_answer(std::string_view raw);

// 100 when the normalized strings are equal (case-sensitive), else 0.
double exact_match(std::string_view prediction, std::string_view gold);

// Longest-common-subsequence F1 over lowercased whitespace tokens, in [0, 1].
// Zero when either side has no tokens or nothing overlaps.
double rouge_l(std::string_view hypothesis, std::string_view reference);

// One scored (query, run) cell of an experiment.
struct RunOutcome {
    std::string query_id;
    int run_index = 0;
    double score = 0.0;  // 0..100
    long long completion_tokens = 0;
};

struct EvalReport {
    std::string method;
    std::string model;
    std::string dataset;
    double score_mean = 0.0;
    double score_std = 0.0;
    double tokens_mean = 0.0;
    double tokens_std = 0.0;
    double e3 = 0.0;
    double a_over_t = 0.0;
    int n_runs = 0;
};

// Per-run means over queries, then mean and sample standard deviation over
// runs (std is 0 when n_runs == 1). e3 / a_over_t come from the means; both
// are 0 when tokens_mean is 0. Every run in [0, n_runs) must be covered and
// no (query, run) cell may repeat.
EvalReport aggregate(const std::vector<RunOutcome>& outcomes, int n_runs);

// Deterministic single-row emission used by the experiment reports.
std::string report_to_csv(const EvalReport& report);
std::string report_to_json(const EvalReport& report);

}  // namespace budgetlab
