#include "budgetlab/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "budgetlab/errors.hpp"

namespace budgetlab {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool found = false;
        for (const char* k : known)
            if (key == k) {
                found = true;
                break;
            }
        if (!found) throw DomainError("config: unknown key \"" + key + "\" in " + where);
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw DomainError(std::string("config: key \"") + key + "\" has the wrong type");
    }
}

BackendConfig backend_from(const json& obj, const std::string& where) {
    reject_unknown_keys(obj,
                        {"base_url", "model", "api_key_env", "timeout_seconds", "max_attempts",
                         "backoff_base_ms", "backoff_factor", "jitter", "concurrency"},
                        where);
    BackendConfig backend;
    backend.base_url = get_or<std::string>(obj, "base_url", backend.base_url);
    backend.model = get_or<std::string>(obj, "model", backend.model);
    backend.api_key_env = get_or<std::string>(obj, "api_key_env", backend.api_key_env);
    backend.timeout_seconds = get_or<double>(obj, "timeout_seconds", backend.timeout_seconds);
    backend.max_attempts = get_or<int>(obj, "max_attempts", backend.max_attempts);
    backend.backoff_base_ms = get_or<int>(obj, "backoff_base_ms", backend.backoff_base_ms);
    backend.backoff_factor = get_or<double>(obj, "backoff_factor", backend.backoff_factor);
    backend.jitter = get_or<double>(obj, "jitter", backend.jitter);
    backend.concurrency = get_or<int>(obj, "concurrency", backend.concurrency);
    if (backend.max_attempts < 1)
        throw DomainError("config: " + where + ".max_attempts must be at least 1");
    if (backend.concurrency < 1)
        throw DomainError("config: " + where + ".concurrency must be at least 1");
    return backend;
}

}  // namespace

Method method_from_string(const std::string& name) {
    if (name == "vanilla") return Method::vanilla;
    if (name == "global_budget") return Method::global_budget;
    if (name == "planned_vanilla") return Method::planned_vanilla;
    if (name == "planned_global") return Method::planned_global;
    if (name == "plan_and_budget") return Method::plan_and_budget;
    throw DomainError("unknown method \"" + name + "\"");
}

std::string method_to_string(Method method) {
    switch (method) {
        case Method::vanilla: return "vanilla";
        case Method::global_budget: return "global_budget";
        case Method::planned_vanilla: return "planned_vanilla";
        case Method::planned_global: return "planned_global";
        case Method::plan_and_budget: return "plan_and_budget";
    }
    return "vanilla";
}

ScheduleKind schedule_kind_from_string(const std::string& name) {
    if (name == "uniform") return ScheduleKind::uniform;
    if (name == "weighted") return ScheduleKind::weighted;
    if (name == "linear") return ScheduleKind::linear;
    if (name == "polynomial") return ScheduleKind::polynomial;
    if (name == "exponential") return ScheduleKind::exponential;
    if (name == "cosine") return ScheduleKind::cosine;
    throw DomainError("unknown schedule kind \"" + name + "\"");
}

std::string schedule_kind_to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::uniform: return "uniform";
        case ScheduleKind::weighted: return "weighted";
        case ScheduleKind::linear: return "linear";
        case ScheduleKind::polynomial: return "polynomial";
        case ScheduleKind::exponential: return "exponential";
        case ScheduleKind::cosine: return "cosine";
    }
    return "uniform";
}

Evaluator evaluator_from_string(const std::string& name) {
    if (name == "exact_match") return Evaluator::exact_match;
    if (name == "rouge_l") return Evaluator::rouge_l;
    if (name == "external_pass_fail") return Evaluator::external_pass_fail;
    throw DomainError("unknown evaluator \"" + name + "\"");
}

std::string evaluator_to_string(Evaluator evaluator) {
    switch (evaluator) {
        case Evaluator::exact_match: return "exact_match";
        case Evaluator::rouge_l: return "rouge_l";
        case Evaluator::external_pass_fail: return "external_pass_fail";
    }
    return "exact_match";
}

ExperimentConfig config_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw DomainError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw DomainError("config: top level must be an object");
    reject_unknown_keys(doc,
                        {"method", "schedule", "budget_init", "budget_per_level", "hard_cutoff",
                         "n_runs", "concurrency", "default_level", "default_domain",
                         "planner_backend", "reasoner_backend", "dataset_path", "evaluator",
                         "external_eval_command", "prompt", "output", "labels"},
                        "the top level");

    ExperimentConfig config;
    config.method = method_from_string(get_or<std::string>(doc, "method", "vanilla"));

    if (doc.contains("schedule")) {
        const json& sched = doc["schedule"];
        reject_unknown_keys(sched, {"kind", "p", "gamma", "epsilon", "min_budget"}, "schedule");
        config.schedule.kind =
            schedule_kind_from_string(get_or<std::string>(sched, "kind", "uniform"));
        config.schedule.p = get_or<double>(sched, "p", config.schedule.p);
        config.schedule.gamma = get_or<double>(sched, "gamma", config.schedule.gamma);
        config.schedule.epsilon = get_or<double>(sched, "epsilon", config.schedule.epsilon);
        config.schedule.min_budget = get_or<int>(sched, "min_budget", config.schedule.min_budget);
    }

    config.budget_init = get_or<int>(doc, "budget_init", config.budget_init);
    config.budget_per_level = get_or<int>(doc, "budget_per_level", config.budget_per_level);
    config.hard_cutoff = get_or<int>(doc, "hard_cutoff", config.hard_cutoff);
    config.n_runs = get_or<int>(doc, "n_runs", config.n_runs);
    config.concurrency = get_or<int>(doc, "concurrency", config.concurrency);
    config.default_level = get_or<int>(doc, "default_level", config.default_level);
    config.default_domain = get_or<std::string>(doc, "default_domain", config.default_domain);

    if (doc.contains("planner_backend"))
        config.planner_backend = backend_from(doc["planner_backend"], "planner_backend");
    if (doc.contains("reasoner_backend"))
        config.reasoner_backend = backend_from(doc["reasoner_backend"], "reasoner_backend");

    config.dataset_path = get_or<std::string>(doc, "dataset_path", config.dataset_path);
    config.evaluator =
        evaluator_from_string(get_or<std::string>(doc, "evaluator", "exact_match"));
    if (doc.contains("external_eval_command"))
        config.external_eval_command = get_or<std::string>(doc, "external_eval_command", "");

    if (doc.contains("prompt")) {
        const json& prompt = doc["prompt"];
        reject_unknown_keys(prompt, {"instruction", "output_format", "benchmarks"}, "prompt");
        config.instruction = get_or<std::string>(prompt, "instruction", config.instruction);
        config.output_format = get_or<std::string>(prompt, "output_format", config.output_format);
        config.benchmarks = get_or<std::string>(prompt, "benchmarks", config.benchmarks);
    }

    if (doc.contains("output")) {
        const json& output = doc["output"];
        reject_unknown_keys(output, {"report_csv", "report_json", "trace"}, "output");
        config.report_csv_path = get_or<std::string>(output, "report_csv",
                                                     config.report_csv_path);
        config.report_json_path = get_or<std::string>(output, "report_json",
                                                      config.report_json_path);
        config.trace_path = get_or<std::string>(output, "trace", config.trace_path);
    }

    if (doc.contains("labels")) {
        const json& labels = doc["labels"];
        reject_unknown_keys(labels, {"model", "dataset"}, "labels");
        config.model_label = get_or<std::string>(labels, "model", config.model_label);
        config.dataset_label = get_or<std::string>(labels, "dataset", config.dataset_label);
    }
    if (config.model_label.empty()) config.model_label = config.reasoner_backend.model;
    if (config.dataset_label.empty()) config.dataset_label = config.dataset_path;

    if (config.budget_init < 1) throw DomainError("config: budget_init must be at least 1");
    if (config.budget_per_level < 0)
        throw DomainError("config: budget_per_level must be nonnegative");
    if (config.hard_cutoff < config.budget_init)
        throw DomainError("config: hard_cutoff must be at least budget_init");
    if (config.n_runs < 1) throw DomainError("config: n_runs must be at least 1");
    if (config.concurrency < 1) throw DomainError("config: concurrency must be at least 1");
    if (config.default_level < 1 || config.default_level > 5)
        throw DomainError("config: default_level must lie in 1..5");
    if (config.schedule.min_budget < 0)
        throw DomainError("config: schedule.min_budget must be nonnegative");
    if (config.evaluator == Evaluator::external_pass_fail &&
        (!config.external_eval_command.has_value() || config.external_eval_command->empty()))
        throw DomainError("config: external_pass_fail needs external_eval_command");
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("load_config: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return config_from_json(buffer.str());
}

int compute_query_budget(const ExperimentConfig& config, const QueryRecord& record) {
    const int level = record.level.value_or(config.default_level);
    return config.budget_init + config.budget_per_level * level;
}

PromptKind prompt_kind_for(Method method) {
    switch (method) {
        case Method::vanilla: return PromptKind::vanilla;
        case Method::global_budget: return PromptKind::global_budget;
        case Method::planned_vanilla: return PromptKind::planned_vanilla;
        case Method::planned_global: return PromptKind::planned_global;
        case Method::plan_and_budget: return PromptKind::plan_and_budget;
    }
    return PromptKind::vanilla;
}

}  // namespace budgetlab
