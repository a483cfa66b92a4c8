#pragma once

#include <optional>
#include <string>
#include <vector>

namespace budgetlab {

// One fixture row checked against a fresh recomputation from (score, tokens).
struct VerifyRow {
    std::string label;  // "dataset/model/method" from the fixture columns
    double score = 0.0;
    double tokens = 0.0;
    double printed_e3 = 0.0;
    double recomputed_e3 = 0.0;
    std::optional<double> printed_a_over_t;
    std::optional<double> recomputed_a_over_t;
    bool pass = false;  // every printed value within the tolerance
};

struct VerifyResult {
    std::vector<VerifyRow> rows;
    bool all_pass = false;
    double tolerance = 0.0;
};

// Reads a fixture CSV of published efficiency numbers and recomputes each one.
// Columns: dataset,model,method,score,tokens,e3[,a_over_t]; lines starting
// with '#' (and the optional header line) are skipped. A row passes when the
// recomputed value is within `tolerance` of the printed one, for e3 and, when
// present, a_over_t. Throws DomainError on unreadable or malformed input.
VerifyResult verify_tables(const std::string& fixture_path, double tolerance = 0.02);

// Human-readable listing, one line per row plus a trailing verdict line.
std::string verify_result_to_text(const VerifyResult& result);

}  // namespace budgetlab
