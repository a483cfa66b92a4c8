#pragma once

#include <optional>
#include <string>

#include "budgetlab/gateway.hpp"
#include "budgetlab/prompts.hpp"
#include "budgetlab/schedule.hpp"

namespace budgetlab {

enum class Method { vanilla, global_budget, planned_vanilla, planned_global, plan_and_budget };

enum class Evaluator { exact_match, rouge_l, external_pass_fail };

// Everything one experiment needs: method, budgeting knobs, backends, dataset,
// scoring, and output paths. Loaded from a JSON document.
struct ExperimentConfig {
    Method method = Method::vanilla;
    ScheduleParams schedule;

    int budget_init = 50;       // B for a level-0 query
    int budget_per_level = 50;  // additional B per difficulty level
    int hard_cutoff = 8192;     // max_tokens sent with every reasoning request
    int n_runs = 5;
    int concurrency = 4;
    int default_level = 3;      // difficulty assumed when a record has none
    std::string default_domain = "general reasoning";

    BackendConfig planner_backend;
    BackendConfig reasoner_backend;

    std::string dataset_path;
    Evaluator evaluator = Evaluator::exact_match;
    std::optional<std::string> external_eval_command;

    std::string instruction;    // dataset-specific task framing
    std::string output_format;  // dataset-specific answer shape
    std::string benchmarks = "(no benchmark examples provided)";

    std::string report_csv_path = "report.csv";
    std::string report_json_path = "report.json";
    std::string trace_path = "trace.jsonl";

    std::string model_label;    // reported in the model column
    std::string dataset_label;  // reported in the dataset column
};

Method method_from_string(const std::string& name);
std::string method_to_string(Method method);
ScheduleKind schedule_kind_from_string(const std::string& name);
std::string schedule_kind_to_string(ScheduleKind kind);
Evaluator evaluator_from_string(const std::string& name);
std::string evaluator_to_string(Evaluator evaluator);

// Parses and validates a config JSON document / file. Unknown keys are
// rejected so typos fail loudly.
ExperimentConfig config_from_json(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// Query budget rule: budget_init + budget_per_level * level.
int compute_query_budget(const ExperimentConfig& config, const QueryRecord& record);

// The PromptKind this method renders with.
PromptKind prompt_kind_for(Method method);

}  // namespace budgetlab
