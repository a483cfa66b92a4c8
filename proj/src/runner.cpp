#include "budgetlab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <unistd.h>

#include <json.hpp>

#include "budgetlab/dataset.hpp"
#include "budgetlab/errors.hpp"

namespace budgetlab {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

long long elapsed_ms(Clock::time_point since) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - since).count();
}

// Runs the external pass/fail command with one JSON object on stdin; the
// command's stdout decides: first token "1" passes, anything else fails.
double external_score(const std::string& command, const QueryRecord& record,
                      const std::string& prediction) {
    json payload{{"id", record.id},
                 {"prediction", prediction},
                 {"gold", record.answer},
                 {"reference", record.reference.has_value() ? json(*record.reference) : json()}};
    const std::string path =
        (std::filesystem::temp_directory_path() /
         ("blab_eval_" + std::to_string(std::hash<std::string>{}(record.id + prediction)) + "_" +
          std::to_string(::getpid())))
            .string();
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) return 0.0;
        out << payload.dump() << "\n";
    }
    std::string stdout_text;
    FILE* pipe = ::popen((command + " < " + path).c_str(), "r");
    if (pipe) {
        char buffer[256];
        while (fgets(buffer, sizeof(buffer), pipe)) stdout_text += buffer;
        ::pclose(pipe);
    }
    std::filesystem::remove(path);
    size_t start = stdout_text.find_first_not_of(" \t\r\n");
    if (start == std::string::npos) return 0.0;
    size_t end = stdout_text.find_first_of(" \t\r\n", start);
    const std::string token = stdout_text.substr(start, end == std::string::npos ? std::string::npos
                                                                                 : end - start);
    return token == "1" ? 100.0 : 0.0;
}

GenerationRequest make_request(const BackendConfig& backend, const std::string& prompt,
                               int max_tokens, const std::string& request_id) {
    GenerationRequest request;
    request.model = backend.model;
    request.messages.push_back({Role::user, prompt});
    request.max_tokens = max_tokens;
    request.request_id = request_id;
    return request;
}

}  // namespace

double score_prediction(const ExperimentConfig& config, const QueryRecord& record,
                        const std::string& prediction) {
    switch (config.evaluator) {
        case Evaluator::exact_match:
            return exact_match(prediction, record.answer);
        case Evaluator::rouge_l:
            return rouge_l(prediction, record.answer) * 100.0;
        case Evaluator::external_pass_fail:
            return external_score(config.external_eval_command.value_or(""), record, prediction);
    }
    return 0.0;
}

QueryExecution execute_query(const QueryRecord& record, const ExperimentConfig& config,
                             Gateway& planner, Gateway& reasoner, int run_index) {
    QueryExecution execution;
    execution.query_id = record.id;
    execution.run_index = run_index;

    QueryRecord query = record;
    if (!query.level.has_value()) query.level = config.default_level;
    if (query.domain.empty()) query.domain = config.default_domain;
    execution.level = *query.level;
    execution.total_budget = compute_query_budget(config, record);

    const Method method = config.method;
    const bool planned = method != Method::vanilla && method != Method::global_budget;

    const auto call = [&](Gateway& gateway, const BackendConfig& backend,
                          const std::string& phase, const std::string& prompt,
                          long long& token_sink) -> GenerationResponse {
        execution.prompts[phase] = prompt;
        const auto t0 = Clock::now();
        GenerationResponse response = gateway.generate(make_request(
            backend, prompt, config.hard_cutoff,
            record.id + "/r" + std::to_string(run_index) + "/" + phase));
        execution.latency_ms[phase] = elapsed_ms(t0);
        execution.responses[phase] = response.text;
        token_sink += response.completion_tokens;
        execution.reasoning_tokens += response.reasoning_tokens;
        return response;
    };

    const auto fail = [&](const std::string& reason) -> QueryExecution& {
        execution.failed = true;
        execution.failure_reason = reason;
        execution.score = 0.0;
        return execution;
    };

    try {
        DecompositionPlan plan;
        std::vector<int> budgets;

        if (planned) {
            // Decompose; one retry with the identical prompt on a parse miss.
            const std::string decompose_prompt = render_decomposition_prompt(query);
            bool parsed = false;
            for (int attempt = 0; attempt < 2 && !parsed; ++attempt) {
                const GenerationResponse response = call(planner, config.planner_backend,
                                                         "decompose", decompose_prompt,
                                                         execution.planner_tokens);
                try {
                    plan = parse_decomposition(response.text);
                    parsed = true;
                } catch (const ParseError&) {
                }
            }
            if (!parsed) return fail("planner response did not parse as a sub-question list");
            execution.plan = plan;

            const int m = static_cast<int>(plan.subquestions.size());
            if (m < 2 || m > 5)
                std::fprintf(stderr, "warning: query %s decomposed into %d sub-questions\n",
                             record.id.c_str(), m);

            // Credit split; same retry contract.
            const std::string credit_prompt =
                render_difficulty_prompt(query, plan, config.benchmarks);
            CreditAssessment assessment;
            parsed = false;
            for (int attempt = 0; attempt < 2 && !parsed; ++attempt) {
                const GenerationResponse response = call(planner, config.planner_backend,
                                                         "credit", credit_prompt,
                                                         execution.planner_tokens);
                try {
                    assessment = parse_credits(response.text, m);
                    parsed = true;
                } catch (const ParseError&) {
                }
            }
            if (!parsed) return fail("planner response did not parse as a credit split");
            execution.credits = assessment.credits;
            execution.credit_levels = assessment.levels;
            execution.problem_level = assessment.problem_level;

            if (method == Method::plan_and_budget) {
                std::vector<double> scores(assessment.credits.begin(), assessment.credits.end());
                const BudgetAllocation allocation =
                    schedule_and_allocate(execution.total_budget, scores, config.schedule);
                execution.allocation = allocation.budgets;
                budgets = allocation.budgets;
            }
        }

        PromptVariant variant;
        variant.kind = prompt_kind_for(method);
        variant.instruction = config.instruction;
        variant.output_format = config.output_format;

        std::optional<int> global_budget;
        if (method == Method::global_budget || method == Method::planned_global)
            global_budget = execution.total_budget;

        const std::string reasoning_prompt = render_reasoning_prompt(
            variant, query, planned ? &plan : nullptr,
            method == Method::plan_and_budget ? &budgets : nullptr, global_budget);
        const GenerationResponse response = call(reasoner, config.reasoner_backend, "reason",
                                                 reasoning_prompt, execution.reasoner_tokens);
        execution.score = score_prediction(config, record, response.text);
    } catch (const Error& e) {
        return fail(e.what());
    }
    return execution;
}

std::string execution_to_trace_line(const QueryExecution& execution, const std::string& method,
                                    const std::string& model, const std::string& dataset) {
    json line{
        {"query_id", execution.query_id},
        {"run_index", execution.run_index},
        {"method", method},
        {"model", model},
        {"dataset", dataset},
        {"level", execution.level},
        {"total_budget", execution.total_budget},
        {"score", execution.score},
        {"failed", execution.failed},
        {"failure_reason", execution.failure_reason},
        {"planner_tokens", execution.planner_tokens},
        {"reasoner_tokens", execution.reasoner_tokens},
        {"completion_tokens", execution.completion_tokens()},
        {"reasoning_tokens", execution.reasoning_tokens},
        {"prompts", execution.prompts},
        {"responses", execution.responses},
        {"latency_ms", execution.latency_ms},
    };
    if (execution.plan.has_value()) {
        json subquestions = json::array();
        for (const auto& sq : execution.plan->subquestions)
            subquestions.push_back(
                {{"index", sq.index}, {"text", sq.text}, {"hint", sq.hint}});
        line["plan"] = std::move(subquestions);
    } else {
        line["plan"] = nullptr;
    }
    line["credits"] = execution.credits.empty() ? json() : json(execution.credits);
    line["credit_levels"] =
        execution.credit_levels.empty() ? json() : json(execution.credit_levels);
    line["problem_level"] =
        execution.problem_level.has_value() ? json(*execution.problem_level) : json();
    line["allocation"] = execution.allocation.empty() ? json() : json(execution.allocation);
    return line.dump();
}

ExperimentResult run_experiment(const ExperimentConfig& config, Gateway& planner,
                                Gateway& reasoner) {
    if (config.dataset_path.empty())
        throw DomainError("run_experiment: config has no dataset_path");
    const std::vector<QueryRecord> records =
        load_dataset(config.dataset_path, config.default_domain);

    struct Task {
        const QueryRecord* record;
        int run_index;
    };
    std::vector<Task> tasks;
    tasks.reserve(records.size() * static_cast<size_t>(config.n_runs));
    for (int run = 0; run < config.n_runs; ++run)
        for (const auto& record : records) tasks.push_back({&record, run});

    std::vector<QueryExecution> executions(tasks.size());
    std::atomic<size_t> next{0};
    const int worker_count =
        static_cast<int>(std::min<size_t>(config.concurrency, tasks.size()));

    const auto worker = [&] {
        for (;;) {
            const size_t index = next.fetch_add(1);
            if (index >= tasks.size()) return;
            const Task& task = tasks[index];
            try {
                executions[index] =
                    execute_query(*task.record, config, planner, reasoner, task.run_index);
            } catch (const std::exception& e) {
                QueryExecution failed;
                failed.query_id = task.record->id;
                failed.run_index = task.run_index;
                failed.failed = true;
                failed.failure_reason = e.what();
                executions[index] = std::move(failed);
            }
        }
    };
    if (worker_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(worker_count);
        for (int i = 0; i < worker_count; ++i) pool.emplace_back(worker);
        for (auto& thread : pool) thread.join();
    }

    std::sort(executions.begin(), executions.end(),
              [](const QueryExecution& a, const QueryExecution& b) {
                  if (a.query_id != b.query_id) return a.query_id < b.query_id;
                  return a.run_index < b.run_index;
              });

    std::vector<RunOutcome> outcomes;
    outcomes.reserve(executions.size());
    for (const auto& execution : executions)
        outcomes.push_back({execution.query_id, execution.run_index, execution.score,
                            execution.completion_tokens()});

    ExperimentResult result;
    result.report = aggregate(outcomes, config.n_runs);
    result.report.method = method_to_string(config.method);
    result.report.model = config.model_label;
    result.report.dataset = config.dataset_label;
    result.executions = std::move(executions);

    const auto write_file = [](const std::string& path, const std::string& content) {
        if (path.empty()) return;
        const std::filesystem::path parent = std::filesystem::path(path).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DomainError("run_experiment: cannot write " + path);
        out << content;
    };

    write_file(config.report_csv_path, report_to_csv(result.report));
    write_file(config.report_json_path, report_to_json(result.report));

    std::string trace;
    for (const auto& execution : result.executions)
        trace += execution_to_trace_line(execution, result.report.method, result.report.model,
                                         result.report.dataset) +
                 "\n";
    write_file(config.trace_path, trace);

    return result;
}

TraceSummary read_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("read_trace: cannot open " + path);
    TraceSummary summary;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::exception& e) {
            throw DomainError("read_trace: line " + std::to_string(line_no) +
                              " is not valid JSON: " + e.what());
        }
        try {
            RunOutcome outcome;
            outcome.query_id = doc.at("query_id").get<std::string>();
            outcome.run_index = doc.at("run_index").get<int>();
            outcome.score = doc.at("score").get<double>();
            outcome.completion_tokens = doc.at("completion_tokens").get<long long>();
            summary.outcomes.push_back(std::move(outcome));
            summary.n_runs = std::max(summary.n_runs, summary.outcomes.back().run_index + 1);
            if (summary.method.empty()) {
                summary.method = doc.value("method", "");
                summary.model = doc.value("model", "");
                summary.dataset = doc.value("dataset", "");
            }
        } catch (const json::exception& e) {
            throw DomainError("read_trace: line " + std::to_string(line_no) +
                              " misses required fields: " + e.what());
        }
    }
    if (summary.outcomes.empty()) throw DomainError("read_trace: " + path + " holds no lines");
    return summary;
}

}  // namespace budgetlab
