#pragma once

#include <string>
#include <vector>

#include "budgetlab/prompts.hpp"

namespace budgetlab {

// Reads a JSONL dataset: one object per line with string "id", "question",
// "answer", optional integer "level" (1..5), optional string "reference" and
// "domain". Validates every line and throws DomainError listing all offending
// line numbers at once. `default_domain` fills records that carry none.
std::vector<QueryRecord> load_dataset(const std::string& path,
                                      const std::string& default_domain = "general reasoning");

}  // namespace budgetlab
