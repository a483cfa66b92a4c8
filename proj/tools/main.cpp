// Command-line front end: planning, allocation, and uncertainty debugging
// plus full experiment runs, trace re-aggregation, and fixture verification.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "budgetlab/bam.hpp"
#include "budgetlab/config.hpp"
#include "budgetlab/errors.hpp"
#include "budgetlab/gateway.hpp"
#include "budgetlab/metrics.hpp"
#include "budgetlab/prompts.hpp"
#include "budgetlab/runner.hpp"
#include "budgetlab/schedule.hpp"
#include "budgetlab/uncertainty.hpp"
#include "budgetlab/verify.hpp"

namespace {

using nlohmann::json;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw budgetlab::DomainError("cannot open input file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

json parse_json_input(const std::string& path) {
    try {
        return json::parse(read_input(path));
    } catch (const json::exception& e) {
        throw budgetlab::ParseError(std::string("input is not valid JSON: ") + e.what(), "");
    }
}

budgetlab::ScheduleParams schedule_from_input(const json& doc,
                                              const budgetlab::ScheduleParams& base) {
    budgetlab::ScheduleParams params = base;
    if (doc.contains("kind"))
        params.kind = budgetlab::schedule_kind_from_string(doc.at("kind").get<std::string>());
    if (doc.contains("p")) params.p = doc.at("p").get<double>();
    if (doc.contains("gamma")) params.gamma = doc.at("gamma").get<double>();
    if (doc.contains("epsilon")) params.epsilon = doc.at("epsilon").get<double>();
    if (doc.contains("min_budget")) params.min_budget = doc.at("min_budget").get<int>();
    return params;
}

int run_plan(const std::string& config_path, const std::string& question,
             std::optional<int> level, const std::string& domain, const std::string& reference) {
    const budgetlab::ExperimentConfig config = budgetlab::load_config(config_path);

    budgetlab::QueryRecord record;
    record.id = "cli";
    record.question = question;
    record.level = level.has_value() ? *level : config.default_level;
    record.domain = domain.empty() ? config.default_domain : domain;
    if (!reference.empty()) record.reference = reference;

    budgetlab::HttpBackend backend(config.planner_backend);
    budgetlab::Gateway planner(backend, budgetlab::retry_policy_from(config.planner_backend),
                               config.planner_backend.concurrency);

    budgetlab::GenerationRequest request;
    request.model = config.planner_backend.model;
    request.max_tokens = config.hard_cutoff;

    request.request_id = "cli/decompose";
    request.messages = {{budgetlab::Role::user, budgetlab::render_decomposition_prompt(record)}};
    const budgetlab::GenerationResponse decompose_response = planner.generate(request);
    const budgetlab::DecompositionPlan plan =
        budgetlab::parse_decomposition(decompose_response.text);

    request.request_id = "cli/credit";
    request.messages = {{budgetlab::Role::user,
                         budgetlab::render_difficulty_prompt(record, plan, config.benchmarks)}};
    const budgetlab::GenerationResponse credit_response = planner.generate(request);
    const budgetlab::CreditAssessment assessment = budgetlab::parse_credits(
        credit_response.text, static_cast<int>(plan.subquestions.size()));

    const int total_budget = budgetlab::compute_query_budget(config, record);
    std::vector<double> scores(assessment.credits.begin(), assessment.credits.end());
    const budgetlab::BudgetAllocation allocation =
        budgetlab::schedule_and_allocate(total_budget, scores, config.schedule);

    json output;
    output["plan"] = json::array();
    for (const auto& sq : plan.subquestions)
        output["plan"].push_back({{"index", sq.index}, {"text", sq.text}, {"hint", sq.hint}});
    output["credits"] = assessment.credits;
    output["credit_levels"] = assessment.levels;
    output["problem_level"] =
        assessment.problem_level.has_value() ? json(*assessment.problem_level) : json();
    output["total_budget"] = total_budget;
    output["allocation"] = allocation.budgets;
    output["planner_tokens"] = planner.total_completion_tokens();
    std::cout << output.dump(2) << "\n";
    return 0;
}

int run_allocate(const std::string& input_path) {
    const json doc = parse_json_input(input_path);
    const int total_budget = doc.at("total_budget").get<int>();
    const std::vector<double> scores = doc.at("scores").get<std::vector<double>>();
    const budgetlab::ScheduleParams params = schedule_from_input(doc, {});
    const budgetlab::BudgetAllocation allocation =
        budgetlab::schedule_and_allocate(total_budget, scores, params);
    std::cout << json{{"budgets", allocation.budgets}, {"total", allocation.total}}.dump(2)
              << "\n";
    return 0;
}

int run_bam(const std::string& input_path, double tolerance) {
    const json doc = parse_json_input(input_path);
    budgetlab::AllocationInstance instance;
    instance.total_budget = doc.at("total_budget").get<double>();
    for (const auto& item : doc.at("items"))
        instance.items.push_back({item.at("c").get<double>(), item.at("beta").get<double>()});
    const budgetlab::LagrangeSolution solution = budgetlab::allocate_kkt(instance, tolerance);
    std::cout << json{{"budgets", solution.budgets},
                      {"lambda", solution.lambda},
                      {"objective", solution.objective},
                      {"kkt_residual", solution.kkt_residual}}
                     .dump(2)
              << "\n";
    return 0;
}

int run_uq(const std::string& input_path) {
    const json doc = parse_json_input(input_path);
    budgetlab::PredictiveEnsemble ensemble;
    ensemble.members = doc.at("members").get<std::vector<std::vector<double>>>();
    budgetlab::LogBase base = budgetlab::LogBase::natural;
    if (doc.contains("base")) {
        const std::string name = doc.at("base").get<std::string>();
        if (name == "bits")
            base = budgetlab::LogBase::bits;
        else if (name != "natural")
            throw budgetlab::DomainError("base must be 'natural' or 'bits', got '" + name + "'");
    }
    const budgetlab::UncertaintyReport report = budgetlab::decompose(ensemble, base);
    std::cout << json{{"total", report.total},
                      {"aleatoric", report.aleatoric},
                      {"epistemic", report.epistemic},
                      {"base", report.base == budgetlab::LogBase::bits ? "bits" : "natural"}}
                     .dump(2)
              << "\n";
    return 0;
}

int run_experiment_cmd(const std::string& config_path) {
    const budgetlab::ExperimentConfig config = budgetlab::load_config(config_path);
    budgetlab::HttpBackend planner_backend(config.planner_backend);
    budgetlab::HttpBackend reasoner_backend(config.reasoner_backend);
    budgetlab::Gateway planner(planner_backend,
                               budgetlab::retry_policy_from(config.planner_backend),
                               config.planner_backend.concurrency);
    budgetlab::Gateway reasoner(reasoner_backend,
                                budgetlab::retry_policy_from(config.reasoner_backend),
                                config.reasoner_backend.concurrency);
    const budgetlab::ExperimentResult result =
        budgetlab::run_experiment(config, planner, reasoner);
    std::cout << budgetlab::report_to_csv(result.report);
    std::cerr << "wrote " << config.report_csv_path << ", " << config.report_json_path << ", "
              << config.trace_path << "\n";
    return 0;
}

int run_report(const std::string& trace_path, bool as_json) {
    const budgetlab::TraceSummary summary = budgetlab::read_trace(trace_path);
    budgetlab::EvalReport report = budgetlab::aggregate(summary.outcomes, summary.n_runs);
    report.method = summary.method;
    report.model = summary.model;
    report.dataset = summary.dataset;
    std::cout << (as_json ? budgetlab::report_to_json(report)
                          : budgetlab::report_to_csv(report));
    return 0;
}

int run_verify_tables(const std::string& fixture_path, double tolerance) {
    const budgetlab::VerifyResult result = budgetlab::verify_tables(fixture_path, tolerance);
    std::cout << budgetlab::verify_result_to_text(result);
    return result.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"plan-and-budget reasoning toolkit"};
    app.require_subcommand(1);

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "decompose and credit one query");
    std::string plan_config, plan_question, plan_domain, plan_reference;
    std::optional<int> plan_level;
    plan_cmd->add_option("--config", plan_config, "experiment config JSON")->required();
    plan_cmd->add_option("--question", plan_question, "query text")->required();
    plan_cmd->add_option("--level", plan_level, "difficulty level 1..5");
    plan_cmd->add_option("--domain", plan_domain, "problem domain");
    plan_cmd->add_option("--reference", plan_reference, "reference information");

    // allocate
    auto* allocate_cmd = app.add_subcommand("allocate", "integer budget split for a schedule");
    std::string allocate_input = "-";
    allocate_cmd->add_option("--input", allocate_input,
                             "JSON file with total_budget, scores, kind... ('-' = stdin)");

    // bam
    auto* bam_cmd = app.add_subcommand("bam", "continuous optimal budget split");
    std::string bam_input = "-";
    double bam_tolerance = 1e-9;
    bam_cmd->add_option("--input", bam_input,
                        "JSON file with total_budget and items [{c, beta}] ('-' = stdin)");
    bam_cmd->add_option("--tol", bam_tolerance, "relative budget-conservation tolerance");

    // uq
    auto* uq_cmd = app.add_subcommand("uq", "uncertainty decomposition of an ensemble");
    std::string uq_input = "-";
    uq_cmd->add_option("--input", uq_input,
                       "JSON file with members [[p...]...] and base ('-' = stdin)");

    // run
    auto* run_cmd = app.add_subcommand("run", "run a full experiment");
    std::string run_config;
    run_cmd->add_option("--config", run_config, "experiment config JSON")->required();

    // report
    auto* report_cmd = app.add_subcommand("report", "re-aggregate a trace file");
    std::string report_trace;
    bool report_json_flag = false;
    report_cmd->add_option("--trace", report_trace, "trace JSONL path")->required();
    report_cmd->add_flag("--json", report_json_flag, "emit JSON instead of CSV");

    // verify-tables
    auto* verify_cmd = app.add_subcommand("verify-tables", "recompute published table numbers");
    std::string verify_fixture;
    double verify_tolerance = 0.02;
    verify_cmd->add_option("--fixture", verify_fixture, "fixture CSV path")->required();
    verify_cmd->add_option("--tolerance", verify_tolerance, "allowed absolute deviation");

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan_cmd->parsed())
            return run_plan(plan_config, plan_question, plan_level, plan_domain, plan_reference);
        if (allocate_cmd->parsed()) return run_allocate(allocate_input);
        if (bam_cmd->parsed()) return run_bam(bam_input, bam_tolerance);
        if (uq_cmd->parsed()) return run_uq(uq_input);
        if (run_cmd->parsed()) return run_experiment_cmd(run_config);
        if (report_cmd->parsed()) return run_report(report_trace, report_json_flag);
        if (verify_cmd->parsed()) return run_verify_tables(verify_fixture, verify_tolerance);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
