#include "budgetlab/dataset.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "budgetlab/errors.hpp"

namespace budgetlab {

std::vector<QueryRecord> load_dataset(const std::string& path,
                                      const std::string& default_domain) {
    std::ifstream in(path);
    if (!in) throw DomainError("load_dataset: cannot open " + path);

    std::vector<QueryRecord> records;
    std::vector<std::string> problems;
    std::set<std::string> ids;
    std::string line;
    int line_no = 0;

    const auto complain = [&](const std::string& why) {
        problems.push_back("line " + std::to_string(line_no) + ": " + why);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            complain(std::string("not valid JSON (") + e.what() + ")");
            continue;
        }
        if (!doc.is_object()) {
            complain("not a JSON object");
            continue;
        }

        QueryRecord record;
        record.domain = default_domain;
        bool ok = true;
        for (const char* field : {"id", "question", "answer"}) {
            if (!doc.contains(field) || !doc[field].is_string() ||
                doc[field].get<std::string>().empty()) {
                complain(std::string("missing or empty string field \"") + field + "\"");
                ok = false;
            }
        }
        if (!ok) continue;

        record.id = doc["id"].get<std::string>();
        record.question = doc["question"].get<std::string>();
        record.answer = doc["answer"].get<std::string>();
        if (doc.contains("level")) {
            if (!doc["level"].is_number_integer()) {
                complain("\"level\" must be an integer");
                continue;
            }
            const int level = doc["level"].get<int>();
            if (level < 1 || level > 5) {
                complain("\"level\" must lie in 1..5");
                continue;
            }
            record.level = level;
        }
        if (doc.contains("reference")) {
            if (!doc["reference"].is_string()) {
                complain("\"reference\" must be a string");
                continue;
            }
            record.reference = doc["reference"].get<std::string>();
        }
        if (doc.contains("domain")) {
            if (!doc["domain"].is_string() || doc["domain"].get<std::string>().empty()) {
                complain("\"domain\" must be a nonempty string");
                continue;
            }
            record.domain = doc["domain"].get<std::string>();
        }
        if (!ids.insert(record.id).second) {
            complain("duplicate id \"" + record.id + "\"");
            continue;
        }
        records.push_back(std::move(record));
    }

    if (!problems.empty()) {
        std::string message = "load_dataset: " + path + " has " +
                              std::to_string(problems.size()) + " invalid line(s):";
        for (const auto& p : problems) message += "\n  " + p;
        throw DomainError(message);
    }
    if (records.empty()) throw DomainError("load_dataset: " + path + " holds no records");
    return records;
}

}  // namespace budgetlab
