#pragma once

#include <string>
#include <vector>

#include "corpus_forge/document.hpp"

namespace corpus_forge {

struct OutcomeRecord {
    std::string id;
    FilterOutcome outcome;
};

// Result of one stage over a batch: surviving documents and one outcome per
// input document, both in ascending id order.
struct StageOutput {
    std::vector<Document> docs;
    std::vector<OutcomeRecord> outcomes;
};

}  // namespace corpus_forge
