#include "budgetlab/verify.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "budgetlab/errors.hpp"
#include "budgetlab/metrics.hpp"

namespace budgetlab {

namespace {

std::string trim(const std::string& s) {
    const size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream stream(line);
    std::string field;
    while (std::getline(stream, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_number(const std::string& text, int line_no, const char* column) {
    try {
        size_t consumed = 0;
        const double value = std::stod(text, &consumed);
        if (consumed != text.size()) throw std::invalid_argument("trailing characters");
        return value;
    } catch (const std::exception&) {
        throw DomainError("verify_tables: line " + std::to_string(line_no) + ": column '" +
                          column + "' is not a number: '" + text + "'");
    }
}

}  // namespace

VerifyResult verify_tables(const std::string& fixture_path, double tolerance) {
    std::ifstream in(fixture_path);
    if (!in) throw DomainError("verify_tables: cannot open " + fixture_path);

    VerifyResult result;
    result.tolerance = tolerance;
    result.all_pass = true;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const std::vector<std::string> fields = split_csv_line(stripped);
        if (!fields.empty() && fields[0] == "dataset") continue;  // header
        if (fields.size() != 6 && fields.size() != 7)
            throw DomainError("verify_tables: line " + std::to_string(line_no) +
                              ": expected 6 or 7 columns, got " +
                              std::to_string(fields.size()));

        VerifyRow row;
        row.label = fields[0] + "/" + fields[1] + "/" + fields[2];
        row.score = parse_number(fields[3], line_no, "score");
        row.tokens = parse_number(fields[4], line_no, "tokens");
        row.printed_e3 = parse_number(fields[5], line_no, "e3");
        row.recomputed_e3 = e3(row.score, row.tokens);
        row.pass = std::fabs(row.recomputed_e3 - row.printed_e3) <= tolerance;
        if (fields.size() == 7 && !fields[6].empty()) {
            row.printed_a_over_t = parse_number(fields[6], line_no, "a_over_t");
            row.recomputed_a_over_t = a_over_t(row.score, row.tokens);
            row.pass = row.pass &&
                       std::fabs(*row.recomputed_a_over_t - *row.printed_a_over_t) <= tolerance;
        }
        result.all_pass = result.all_pass && row.pass;
        result.rows.push_back(std::move(row));
    }
    if (result.rows.empty())
        throw DomainError("verify_tables: " + fixture_path + " holds no data rows");
    return result;
}

std::string verify_result_to_text(const VerifyResult& result) {
    std::string text;
    char buffer[512];
    for (const auto& row : result.rows) {
        std::snprintf(buffer, sizeof(buffer),
                      "%s %-40s e3 printed=%g recomputed=%.4f delta=%+.4f",
                      row.pass ? "PASS" : "FAIL", row.label.c_str(), row.printed_e3,
                      row.recomputed_e3, row.recomputed_e3 - row.printed_e3);
        text += buffer;
        if (row.printed_a_over_t.has_value()) {
            std::snprintf(buffer, sizeof(buffer),
                          " | a/t printed=%g recomputed=%.4f delta=%+.4f",
                          *row.printed_a_over_t, *row.recomputed_a_over_t,
                          *row.recomputed_a_over_t - *row.printed_a_over_t);
            text += buffer;
        }
        text += "\n";
    }
    size_t passed = 0;
    for (const auto& row : result.rows) passed += row.pass ? 1 : 0;
    std::snprintf(buffer, sizeof(buffer), "%zu/%zu rows within +/-%.2f: %s\n", passed,
                  result.rows.size(), result.tolerance, result.all_pass ? "PASS" : "FAIL");
    text += buffer;
    return text;
}

}  // namespace budgetlab
