#include "budgetlab/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <utility>

#include <json.hpp>

#include "budgetlab/errors.hpp"

namespace budgetlab {

namespace {

void check_accuracy_tokens(double accuracy_pct, double tokens, const char* who) {
    if (!(accuracy_pct >= 0.0 && accuracy_pct <= 100.0))
        throw DomainError(std::string(who) + ": accuracy must lie in [0, 100]");
    if (!(tokens > 0.0)) throw DomainError(std::string(who) + ": tokens must be positive");
}

// Returns the content of the first \boxed{...} group, brace-balanced; empty
// optional when no marker exists. Unbalanced input degrades to "rest of text".
bool extract_boxed(std::string_view text, std::string& inner) {
    static constexpr std::string_view kMarker = "\\boxed{";
    const size_t at = text.find(kMarker);
    if (at == std::string_view::npos) return false;
    size_t i = at + kMarker.size();
    int depth = 1;
    std::string content;
    for (; i < text.size(); ++i) {
        const char ch = text[i];
        if (ch == '{') ++depth;
        if (ch == '}') {
            --depth;
            if (depth == 0) break;
        }
        content.push_back(ch);
    }
    inner = std::move(content);
    return true;
}

std::vector<std::string> lowercase_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!current.empty()) tokens.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::string format_fixed(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6f", value);
    return buffer;
}

}  // namespace

double e3(double accuracy_pct, double tokens) {
    check_accuracy_tokens(accuracy_pct, tokens, "e3");
    return accuracy_pct * accuracy_pct / tokens;
}

double a_over_t(double accuracy_pct, double tokens) {
    check_accuracy_tokens(accuracy_pct, tokens, "a_over_t");
    return accuracy_pct / tokens * 100.0;
}

std::string normalize_answer(std::string_view raw) {
    // Drill into nested \boxed{...} markers until none remain.
    std::string text(raw);
    std::string inner;
    while (extract_boxed(text, inner)) text = inner;

    // Collapse every whitespace run to one space; trims both ends as a side effect.
    std::string collapsed;
    bool pending_space = false;
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            pending_space = !collapsed.empty();
        } else {
            if (pending_space) collapsed.push_back(' ');
            pending_space = false;
            collapsed.push_back(ch);
        }
    }

    // Fixpoint strip so the result carries neither trailing periods nor the
    // whitespace they expose; keeps the function idempotent.
    while (!collapsed.empty() && (collapsed.back() == '.' || collapsed.back() == ' '))
        collapsed.pop_back();
    return collapsed;
}

double exact_match(std::string_view prediction, std::string_view gold) {
    return normalize_answer(prediction) == normalize_answer(gold) ? 100.0 : 0.0;
}

double rouge_l(std::string_view hypothesis, std::string_view reference) {
    const std::vector<std::string> hyp = lowercase_tokens(hypothesis);
    const std::vector<std::string> ref = lowercase_tokens(reference);
    if (hyp.empty() || ref.empty()) return 0.0;

    // Two-row LCS table.
    std::vector<int> prev(ref.size() + 1, 0);
    std::vector<int> curr(ref.size() + 1, 0);
    for (size_t i = 1; i <= hyp.size(); ++i) {
        for (size_t j = 1; j <= ref.size(); ++j) {
            if (hyp[i - 1] == ref[j - 1])
                curr[j] = prev[j - 1] + 1;
            else
                curr[j] = std::max(prev[j], curr[j - 1]);
        }
        std::swap(prev, curr);
    }
    const int lcs = prev[ref.size()];
    if (lcs == 0) return 0.0;

    const double precision = static_cast<double>(lcs) / static_cast<double>(hyp.size());
    const double recall = static_cast<double>(lcs) / static_cast<double>(ref.size());
    return 2.0 * precision * recall / (precision + recall);
}

EvalReport aggregate(const std::vector<RunOutcome>& outcomes, int n_runs) {
    if (n_runs < 1) throw DomainError("aggregate: n_runs must be at least 1");
    if (outcomes.empty()) throw DomainError("aggregate: no outcomes to aggregate");

    std::set<std::pair<std::string, int>> seen;
    std::vector<double> run_score_sum(static_cast<size_t>(n_runs), 0.0);
    std::vector<double> run_token_sum(static_cast<size_t>(n_runs), 0.0);
    std::vector<int> run_count(static_cast<size_t>(n_runs), 0);
    for (const auto& outcome : outcomes) {
        if (outcome.run_index < 0 || outcome.run_index >= n_runs)
            throw DomainError("aggregate: run_index out of range for " + outcome.query_id);
        if (!(outcome.score >= 0.0 && outcome.score <= 100.0))
            throw DomainError("aggregate: score out of [0, 100] for " + outcome.query_id);
        if (outcome.completion_tokens < 0)
            throw DomainError("aggregate: negative token count for " + outcome.query_id);
        if (!seen.emplace(outcome.query_id, outcome.run_index).second)
            throw DomainError("aggregate: duplicate cell " + outcome.query_id + "/run " +
                              std::to_string(outcome.run_index));
        run_score_sum[outcome.run_index] += outcome.score;
        run_token_sum[outcome.run_index] += static_cast<double>(outcome.completion_tokens);
        ++run_count[outcome.run_index];
    }

    std::vector<double> run_score(static_cast<size_t>(n_runs));
    std::vector<double> run_tokens(static_cast<size_t>(n_runs));
    for (int r = 0; r < n_runs; ++r) {
        if (run_count[r] == 0)
            throw DomainError("aggregate: run " + std::to_string(r) + " has no outcomes");
        run_score[r] = run_score_sum[r] / run_count[r];
        run_tokens[r] = run_token_sum[r] / run_count[r];
    }

    const auto mean = [](const std::vector<double>& xs) {
        double sum = 0.0;
        for (double x : xs) sum += x;
        return sum / static_cast<double>(xs.size());
    };
    const auto sample_std = [](const std::vector<double>& xs, double mu) {
        if (xs.size() < 2) return 0.0;
        double ss = 0.0;
        for (double x : xs) ss += (x - mu) * (x - mu);
        return std::sqrt(ss / static_cast<double>(xs.size() - 1));
    };

    EvalReport report;
    report.n_runs = n_runs;
    report.score_mean = mean(run_score);
    report.score_std = sample_std(run_score, report.score_mean);
    report.tokens_mean = mean(run_tokens);
    report.tokens_std = sample_std(run_tokens, report.tokens_mean);
    if (report.tokens_mean > 0.0) {
        report.e3 = e3(report.score_mean, report.tokens_mean);
        report.a_over_t = a_over_t(report.score_mean, report.tokens_mean);
    }
    return report;
}

std::string report_to_csv(const EvalReport& report) {
    std::string csv =
        "method,model,dataset,score_mean,score_std,tokens_mean,tokens_std,e3,a_over_t,n_runs\n";
    csv += report.method + "," + report.model + "," + report.dataset + "," +
           format_fixed(report.score_mean) + "," + format_fixed(report.score_std) + "," +
           format_fixed(report.tokens_mean) + "," + format_fixed(report.tokens_std) + "," +
           format_fixed(report.e3) + "," + format_fixed(report.a_over_t) + "," +
           std::to_string(report.n_runs) + "\n";
    return csv;
}

std::string report_to_json(const EvalReport& report) {
    nlohmann::json j{
        {"method", report.method},
        {"model", report.model},
        {"dataset", report.dataset},
        {"score_mean", report.score_mean},
        {"score_std", report.score_std},
        {"tokens_mean", report.tokens_mean},
        {"tokens_std", report.tokens_std},
        {"e3", report.e3},
        {"a_over_t", report.a_over_t},
        {"n_runs", report.n_runs},
    };
    return j.dump(2) + "\n";
}

}  // namespace budgetlab
