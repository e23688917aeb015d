#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "corpus_forge/config.hpp"
#include "corpus_forge/document.hpp"
#include "corpus_forge/jsonl.hpp"
#include "corpus_forge/parallel.hpp"
#include "corpus_forge/sentences.hpp"
#include "corpus_forge/stage.hpp"
#include "corpus_forge/unicode.hpp"

namespace corpus_forge::chunker {

struct Chunk {
    std::string parent_id;
    std::size_t index = 0;
    std::string text;
    std::size_t word_count = 0;
    bool oversized = false;  // a single sentence longer than the budget

    friend bool operator==(const Chunk&, const Chunk&) = default;
};

// Greedy packing of whole sentences under config.chunk_max_words. Chunks
// partition the text byte-for-byte; each chunk carries the whitespace that
// follows its last sentence.
inline std::vector<Chunk> chunk_document(const Document& doc, const PipelineConfig& config) {
    const std::size_t budget = config.chunk_max_words;
    std::vector<Chunk> chunks;
    const auto pieces = sentences::split_pieces(doc.text);
    if (pieces.empty()) {
        chunks.push_back({doc.id, 0, doc.text, 0, false});
        return chunks;
    }

    Chunk current{doc.id, 0, {}, 0, false};
    bool open = false;
    for (const auto piece : pieces) {
        const std::size_t words = text::count_words(piece);
        if (open && current.word_count + words > budget) {
            chunks.push_back(std::move(current));
            current = Chunk{doc.id, chunks.size(), {}, 0, false};
            open = false;
        }
        current.text.append(piece);
        current.word_count += words;
        open = true;
        if (current.word_count > budget) current.oversized = true;
    }
    if (open) chunks.push_back(std::move(current));
    return chunks;
}

inline std::string child_id(const std::string& parent_id, std::size_t index) {
    return parent_id + "#" + std::to_string(index);
}

// Chunks document-kind texts; everything else passes through. Documents
// that fit in one chunk keep their id. Outcome per parent: Keep, or
// Transformed(Chunked) when split.
inline StageOutput chunk_stage(std::vector<Document> docs, const PipelineConfig& config) {
    sort_by_id(docs);
    std::vector<std::vector<Chunk>> chunked(docs.size());
    parallel_for(docs.size(), config.worker_count, [&](std::size_t i) {
        if (docs[i].source_kind == SourceKind::Document) chunked[i] = chunk_document(docs[i], config);
    });

    StageOutput out;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        Document& doc = docs[i];
        auto& chunks = chunked[i];
        if (chunks.size() <= 1) {
            if (chunks.size() == 1 && chunks.front().oversized) doc.meta["oversized_sentence"] = true;
            out.outcomes.push_back({doc.id, FilterOutcome::keep()});
            out.docs.push_back(std::move(doc));
            continue;
        }
        out.outcomes.push_back(
            {doc.id, FilterOutcome::transformed(Reason::Chunked, "chunks=" + std::to_string(chunks.size()))});
        for (auto& c : chunks) {
            Document child;
            child.id = child_id(doc.id, c.index);
            child.source = doc.source;
            child.source_kind = doc.source_kind;
            child.lang_confidence = doc.lang_confidence;
            child.meta = doc.meta;
            child.meta["parent_id"] = doc.id;
            child.meta["chunk_index"] = c.index;
            if (c.oversized) child.meta["oversized_sentence"] = true;
            child.text = std::move(c.text);
            out.docs.push_back(std::move(child));
        }
    }
    sort_by_id(out.docs);
    return out;
}

}  // namespace corpus_forge::chunker
