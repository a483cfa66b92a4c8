#pragma once

#include <optional>
#include <string>
#include <vector>

namespace budgetlab {

// One evaluation item. `level` is a 1..5 difficulty when the dataset provides
// one; `reference` is extra grounding material some datasets attach.
struct QueryRecord {
    std::string id;
    std::string question;
    std::string answer;
    std::optional<int> level;
    std::optional<std::string> reference;
    std::string domain = "general reasoning";
};

struct SubQuestion {
    int index = 0;  // 1-based position in the plan
    std::string text;
    std::string hint;
};

struct DecompositionPlan {
    std::vector<SubQuestion> subquestions;
};

// Credit split and difficulty judgments parsed from the grader response.
struct CreditAssessment {
    std::vector<int> credits;          // one per sub-question, sums to exactly 100
    std::vector<int> levels;           // per-sub-question difficulty, clamped to 1..5
    std::optional<int> problem_level;  // whole-problem difficulty when reported
};

// The five reasoning-prompt shapes an experiment can run.
enum class PromptKind {
    vanilla,
    global_budget,
    planned_vanilla,
    planned_global,
    plan_and_budget,
};

// Dataset-specific blocks spliced into the reasoning templates.
struct PromptVariant {
    PromptKind kind = PromptKind::vanilla;
    std::string instruction;    // task framing shown first
    std::string output_format;  // required answer shape
};

// Raw template text for each prompt, with <placeholders> unfilled.
// Exposed so the literal wording can be audited and tested.
namespace templates {
extern const char* const kDecomposition;
extern const char* const kDifficulty;
extern const char* const kVanilla;
extern const char* const kGlobalBudget;
extern const char* const kPlannedVanilla;
extern const char* const kPlannedGlobal;
extern const char* const kPlanAndBudget;
extern const char* const kLocalBudgetPhrase;   // per-sub-question spend cue
extern const char* const kGlobalBudgetPhrase;  // whole-response spend cue
}  // namespace templates

std::string render_decomposition_prompt(const QueryRecord& record);

std::string render_difficulty_prompt(const QueryRecord& record, const DecompositionPlan& plan,
                                     const std::string& benchmarks);

// Serializes a plan in the numbered "N. text / Hint: ..." layout the templates
// use. With `budgets`, each sub-question carries its word-budget cue.
std::string format_subquestions(const DecompositionPlan& plan,
                                const std::vector<int>* budgets = nullptr);

// Reads a numbered sub-question list back out of model text. Tolerates bold
// markers, blank lines, and gap-ridden numbering (items are renumbered 1..m).
// Throws ParseError (carrying the raw text) when no items are found.
DecompositionPlan parse_decomposition(const std::string& text);

// Reads the structured credit JSON for a plan of `m` sub-questions. Repairs a
// credit vector that misses the 100 total by proportional rescale plus
// largest-fraction rounding (ties to the lower index).
CreditAssessment parse_credits(const std::string& json_text, int m);

// Fills the reasoning template for `variant`. `plan` is required for the three
// planned kinds, `budgets` for plan_and_budget (one per sub-question, summing
// to the query budget), `global_budget` for the two global kinds.
std::string render_reasoning_prompt(const PromptVariant& variant, const QueryRecord& record,
                                    const DecompositionPlan* plan = nullptr,
                                    const std::vector<int>* budgets = nullptr,
                                    std::optional<int> global_budget = std::nullopt);

// True when `text` still contains any of the named template placeholders.
bool has_residual_placeholder(const std::string& text);

}  // namespace budgetlab
