#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "budgetlab/config.hpp"
#include "budgetlab/gateway.hpp"
#include "budgetlab/metrics.hpp"
#include "budgetlab/prompts.hpp"

namespace budgetlab {

// Full record of one (query, run) cell: prompts, responses, plan, budgets,
// token counts, per-phase latency, and the final score.
struct QueryExecution {
    std::string query_id;
    int run_index = 0;
    int level = 0;
    int total_budget = 0;

    std::optional<DecompositionPlan> plan;
    std::vector<int> credits;        // per-sub-question credit split, planned methods
    std::vector<int> credit_levels;  // per-sub-question difficulty judgments
    std::optional<int> problem_level;
    std::vector<int> allocation;     // integer token budgets, plan_and_budget only

    // Phases are "decompose", "credit", "reason".
    std::map<std::string, std::string> prompts;
    std::map<std::string, std::string> responses;
    std::map<std::string, long long> latency_ms;

    long long planner_tokens = 0;
    long long reasoner_tokens = 0;
    long long reasoning_tokens = 0;  // provider-reported hidden reasoning share

    double score = 0.0;
    bool failed = false;
    std::string failure_reason;

    long long completion_tokens() const { return planner_tokens + reasoner_tokens; }
};

// Runs the full pipeline for one record: plan/credit phases when the method
// needs them (each parse retried once on failure), then the reasoning call
// with max_tokens = hard_cutoff, then scoring. Gateway or parse failures mark
// the execution failed with score 0; tokens spent before the failure still
// count. Only programming errors propagate.
QueryExecution execute_query(const QueryRecord& record, const ExperimentConfig& config,
                             Gateway& planner, Gateway& reasoner, int run_index);

struct ExperimentResult {
    EvalReport report;
    std::vector<QueryExecution> executions;  // sorted by (query_id, run_index)
};

// Every (query, run) cell through a bounded worker pool, then aggregation and
// deterministic report/trace writing to the configured paths. Tasks are
// enumerated run-major, so with concurrency 1 execution order is exactly
// (run 0: all queries, run 1: ...).
ExperimentResult run_experiment(const ExperimentConfig& config, Gateway& planner,
                                Gateway& reasoner);

// One JSONL trace line for an execution (keys sorted, no volatile content
// besides latency_ms).
std::string execution_to_trace_line(const QueryExecution& execution, const std::string& method,
                                    const std::string& model, const std::string& dataset);

struct TraceSummary {
    std::vector<RunOutcome> outcomes;
    std::string method;
    std::string model;
    std::string dataset;
    int n_runs = 0;  // max run_index + 1 seen in the file
};

// Reads a trace back for re-aggregation.
TraceSummary read_trace(const std::string& path);

// Scores one prediction under the configured evaluator.
double score_prediction(const ExperimentConfig& config, const QueryRecord& record,
                        const std::string& prediction);

}  // namespace budgetlab
