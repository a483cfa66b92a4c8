#include "budgetlab/prompts.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "budgetlab/errors.hpp"

namespace budgetlab {

namespace {

void replace_all(std::string& text, std::string_view needle, std::string_view value) {
    size_t at = 0;
    while ((at = text.find(needle, at)) != std::string::npos) {
        text.replace(at, needle.size(), value);
        at += value.size();
    }
}

// Removes every line that still contains `needle` (used to drop the optional
// Reference line when a record has none).
void drop_lines_containing(std::string& text, std::string_view needle) {
    std::string kept;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        const bool last = end == std::string::npos;
        const std::string_view line(text.data() + start, (last ? text.size() : end) - start);
        if (line.find(needle) == std::string_view::npos) {
            kept.append(line);
            if (!last) kept.push_back('\n');
        }
        if (last) break;
        start = end + 1;
    }
    text = std::move(kept);
}

void check_record(const QueryRecord& record, bool needs_level) {
    if (record.question.empty()) throw DomainError("prompt render: question must be nonempty");
    if (record.domain.empty()) throw DomainError("prompt render: domain must be nonempty");
    if (needs_level) {
        if (!record.level.has_value())
            throw DomainError("prompt render: record has no difficulty level");
        if (*record.level < 1 || *record.level > 5)
            throw DomainError("prompt render: level must lie in 1..5");
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Consumes "**" markers around list markup so bold variants parse the same.
void skip_bold(std::string_view& s) {
    while (s.size() >= 2 && s[0] == '*' && s[1] == '*') s.remove_prefix(2);
}

// "1. text", "2) text", "**3.** text" -> item text; nullopt otherwise.
std::optional<std::string> match_item_start(std::string_view line) {
    std::string_view s = trim(line);
    skip_bold(s);
    size_t digits = 0;
    while (digits < s.size() && std::isdigit(static_cast<unsigned char>(s[digits]))) ++digits;
    if (digits == 0) return std::nullopt;
    s.remove_prefix(digits);
    if (s.empty() || (s[0] != '.' && s[0] != ')')) return std::nullopt;
    s.remove_prefix(1);
    skip_bold(s);
    return std::string(trim(s));
}

// "Hint: text" and bold-marked variants -> hint text; nullopt otherwise.
std::optional<std::string> match_hint_start(std::string_view line) {
    std::string_view s = trim(line);
    skip_bold(s);
    static constexpr std::string_view kWord = "Hint";
    if (s.substr(0, kWord.size()) != kWord) return std::nullopt;
    s.remove_prefix(kWord.size());
    skip_bold(s);
    if (s.empty() || s[0] != ':') return std::nullopt;
    s.remove_prefix(1);
    skip_bold(s);
    return std::string(trim(s));
}

void append_with_space(std::string& target, std::string_view extra) {
    if (!target.empty()) target.push_back(' ');
    target.append(extra);
}

int credit_as_int(const nlohmann::json& value, const std::string& raw) {
    if (value.is_number_integer()) return value.get<int>();
    if (value.is_number_float()) {
        const double d = value.get<double>();
        if (std::abs(d - std::round(d)) < 1e-9) return static_cast<int>(std::llround(d));
    }
    throw ParseError("credit response: credit is not an integer", raw);
}

int clamp_level(int level) { return std::clamp(level, 1, 5); }

}  // namespace

std::string render_decomposition_prompt(const QueryRecord& record) {
    check_record(record, /*needs_level=*/true);
    std::string text = templates::kDecomposition;
    replace_all(text, "<domain>", record.domain);
    replace_all(text, "<problem>", record.question);
    replace_all(text, "<level>", std::to_string(*record.level));
    return text;
}

std::string render_difficulty_prompt(const QueryRecord& record, const DecompositionPlan& plan,
                                     const std::string& benchmarks) {
    check_record(record, /*needs_level=*/false);
    if (plan.subquestions.empty())
        throw DomainError("difficulty prompt: plan has no sub-questions");
    std::string text = templates::kDifficulty;
    replace_all(text, "<domain>", record.domain);
    replace_all(text, "<benchmarks>", benchmarks);
    replace_all(text, "<problem>", record.question);
    replace_all(text, "<steps>", format_subquestions(plan));
    return text;
}

std::string format_subquestions(const DecompositionPlan& plan, const std::vector<int>* budgets) {
    if (budgets && budgets->size() != plan.subquestions.size())
        throw DomainError("format_subquestions: budgets must match the sub-question count");
    std::string out;
    for (size_t i = 0; i < plan.subquestions.size(); ++i) {
        const SubQuestion& sq = plan.subquestions[i];
        if (i > 0) out += "\n\n";
        out += std::to_string(i + 1) + ". " + sq.text;
        if (!sq.hint.empty()) out += "\nHint: " + sq.hint;
        if (budgets) {
            std::string phrase = templates::kLocalBudgetPhrase;
            replace_all(phrase, "<budget>", std::to_string((*budgets)[i]));
            out += "\n" + phrase;
        }
    }
    return out;
}

DecompositionPlan parse_decomposition(const std::string& text) {
    DecompositionPlan plan;
    SubQuestion current;
    bool in_item = false;
    bool in_hint = false;

    const auto flush = [&] {
        if (in_item) plan.subquestions.push_back(std::move(current));
        current = SubQuestion{};
        in_hint = false;
    };

    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        const bool last = end == std::string::npos;
        std::string_view line(text.data() + start, (last ? text.size() : end) - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        if (auto item = match_item_start(line)) {
            flush();
            in_item = true;
            current.text = std::move(*item);
        } else if (in_item) {
            if (auto hint = match_hint_start(line)) {
                in_hint = true;
                current.hint = std::move(*hint);
            } else if (!trim(line).empty()) {
                // Continuation of whatever part we are in.
                append_with_space(in_hint ? current.hint : current.text, trim(line));
            }
        }
        if (last) break;
        start = end + 1;
    }
    flush();

    if (plan.subquestions.empty())
        throw ParseError("decomposition response: no numbered sub-questions found", text);
    for (size_t i = 0; i < plan.subquestions.size(); ++i)
        plan.subquestions[i].index = static_cast<int>(i + 1);
    return plan;
}

CreditAssessment parse_credits(const std::string& json_text, int m) {
    if (m < 1) throw DomainError("parse_credits: m must be at least 1");
    if (m > 100) throw ParseError("credit response: more sub-questions than credit points",
                                  json_text);

    // Tolerate fenced or chatty wrappers around the JSON object.
    const size_t first = json_text.find('{');
    const size_t last = json_text.rfind('}');
    if (first == std::string::npos || last == std::string::npos || last < first)
        throw ParseError("credit response: no JSON object found", json_text);

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text.substr(first, last - first + 1));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("credit response: invalid JSON: ") + e.what(), json_text);
    }
    if (!doc.is_object()) throw ParseError("credit response: top level is not an object",
                                           json_text);

    CreditAssessment assessment;
    for (int j = 1; j <= m; ++j) {
        const std::string key = std::to_string(j);
        if (!doc.contains(key))
            throw ParseError("credit response: missing entry for sub-question " + key, json_text);
        const nlohmann::json& entry = doc[key];
        if (!entry.is_object() || !entry.contains("credit"))
            throw ParseError("credit response: sub-question " + key + " has no credit",
                             json_text);
        const int credit = credit_as_int(entry["credit"], json_text);
        if (credit <= 0)
            throw ParseError("credit response: credit for sub-question " + key +
                                 " must be positive",
                             json_text);
        assessment.credits.push_back(credit);
        int level = 3;
        if (entry.contains("evaluated_level") && entry["evaluated_level"].is_number())
            level = clamp_level(credit_as_int(entry["evaluated_level"], json_text));
        assessment.levels.push_back(level);
    }
    if (doc.contains("problem") && doc["problem"].is_object() &&
        doc["problem"].contains("evaluated_level") &&
        doc["problem"]["evaluated_level"].is_number())
        assessment.problem_level =
            clamp_level(credit_as_int(doc["problem"]["evaluated_level"], json_text));

    const long long sum =
        std::accumulate(assessment.credits.begin(), assessment.credits.end(), 0LL);
    if (sum != 100) {
        // Proportional rescale, floors, remainder to the largest fractional
        // parts (ties to the lower index); then lift any zero to keep every
        // credit positive.
        std::vector<double> scaled(assessment.credits.size());
        std::vector<int> repaired(assessment.credits.size());
        int floored = 0;
        for (size_t j = 0; j < scaled.size(); ++j) {
            scaled[j] = 100.0 * assessment.credits[j] / static_cast<double>(sum);
            repaired[j] = static_cast<int>(std::floor(scaled[j]));
            floored += repaired[j];
        }
        std::vector<int> order(scaled.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return scaled[a] - std::floor(scaled[a]) > scaled[b] - std::floor(scaled[b]);
        });
        for (int r = 0; r < 100 - floored; ++r) ++repaired[order[r]];
        for (size_t j = 0; j < repaired.size(); ++j) {
            while (repaired[j] < 1) {
                int donor = 0;
                for (size_t k = 1; k < repaired.size(); ++k)
                    if (repaired[k] > repaired[donor]) donor = static_cast<int>(k);
                --repaired[donor];
                ++repaired[j];
            }
        }
        assessment.credits = std::move(repaired);
    }
    return assessment;
}

std::string render_reasoning_prompt(const PromptVariant& variant, const QueryRecord& record,
                                    const DecompositionPlan* plan,
                                    const std::vector<int>* budgets,
                                    std::optional<int> global_budget) {
    const bool planned = variant.kind == PromptKind::planned_vanilla ||
                         variant.kind == PromptKind::planned_global ||
                         variant.kind == PromptKind::plan_and_budget;
    const bool global = variant.kind == PromptKind::global_budget ||
                        variant.kind == PromptKind::planned_global;
    check_record(record, /*needs_level=*/planned);

    const char* tpl = nullptr;
    switch (variant.kind) {
        case PromptKind::vanilla: tpl = templates::kVanilla; break;
        case PromptKind::global_budget: tpl = templates::kGlobalBudget; break;
        case PromptKind::planned_vanilla: tpl = templates::kPlannedVanilla; break;
        case PromptKind::planned_global: tpl = templates::kPlannedGlobal; break;
        case PromptKind::plan_and_budget: tpl = templates::kPlanAndBudget; break;
    }

    std::string text = tpl;
    replace_all(text, "<instruction>", variant.instruction);
    replace_all(text, "<output_format>", variant.output_format);
    replace_all(text, "<query>", record.question);

    if (record.reference.has_value())
        replace_all(text, "<reference>", *record.reference);
    else
        drop_lines_containing(text, "<reference>");

    if (planned) {
        if (!plan || plan->subquestions.empty())
            throw DomainError("reasoning prompt: planned variants need a nonempty plan");
        replace_all(text, "<level>", std::to_string(*record.level));
        if (variant.kind == PromptKind::plan_and_budget) {
            if (!budgets || budgets->size() != plan->subquestions.size())
                throw DomainError(
                    "reasoning prompt: plan_and_budget needs one budget per sub-question");
            replace_all(text, "<decomposed>", format_subquestions(*plan, budgets));
        } else {
            replace_all(text, "<decomposed>", format_subquestions(*plan));
        }
    }

    if (global) {
        if (!global_budget.has_value() || *global_budget < 1)
            throw DomainError("reasoning prompt: global variants need a positive budget");
        replace_all(text, "<budget>", std::to_string(*global_budget));
    }

    return text;
}

bool has_residual_placeholder(const std::string& text) {
    static constexpr std::array<std::string_view, 11> kPlaceholders = {
        "<domain>",     "<problem>", "<level>",        "<query>",
        "<reference>",  "<decomposed>", "<budget>",    "<benchmarks>",
        "<steps>",      "<instruction>", "<output_format>",
    };
    return std::any_of(kPlaceholders.begin(), kPlaceholders.end(), [&](std::string_view p) {
        return text.find(p) != std::string::npos;
    });
}

}  // namespace budgetlab
