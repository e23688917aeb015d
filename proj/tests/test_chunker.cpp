#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "corpus_forge/chunker.hpp"
#include "corpus_forge/rng.hpp"
#include "corpus_forge/sentences.hpp"
#include "support/fixtures.hpp"

using namespace corpus_forge;
using fixtures::make_doc;

namespace {

std::string five_word_sentences(std::size_t words) {
    std::string t;
    for (std::size_t i = 0; i < words / 5; ++i) {
        if (i) t += ' ';
        t += "Ова е реченица број " + std::to_string(i) + ".";
    }
    return t;
}

Document document_kind(std::string id, std::string text) {
    return make_doc(std::move(id), std::move(text), "documents", SourceKind::Document);
}

}  // namespace

TEST(Chunker, TenThousandWordsThreeChunks) {
    PipelineConfig c;
    const Document d = document_kind("book", five_word_sentences(10'000));
    const auto chunks = chunker::chunk_document(d, c);
    ASSERT_EQ(chunks.size(), 3u);
    std::size_t total = 0;
    for (const auto& ch : chunks) {
        EXPECT_LE(ch.word_count, 4000u);
        EXPECT_EQ(ch.word_count, text::count_words(ch.text));
        EXPECT_FALSE(ch.oversized);
        total += ch.word_count;
    }
    EXPECT_EQ(chunks[0].word_count, 4000u);
    EXPECT_EQ(chunks[1].word_count, 4000u);
    EXPECT_EQ(total, 10'000u);
}

TEST(Chunker, ShortDocumentOneChunk) {
    PipelineConfig c;
    const auto chunks = chunker::chunk_document(document_kind("d", five_word_sentences(100)), c);
    ASSERT_EQ(chunks.size(), 1u);
    EXPECT_EQ(chunks[0].word_count, 100u);
}

TEST(Chunker, OversizedSentenceFlagged) {
    PipelineConfig c;
    std::string huge;
    for (int i = 0; i < 4500; ++i) huge += "збор ";
    huge += "крај.";
    const std::string text = "Кратка реченица пред тоа. " + huge + " Кратка реченица потоа.";
    const auto chunks = chunker::chunk_document(document_kind("d", text), c);
    ASSERT_EQ(chunks.size(), 3u);
    EXPECT_FALSE(chunks[0].oversized);
    EXPECT_TRUE(chunks[1].oversized);
    EXPECT_EQ(chunks[1].word_count, 4501u);
    EXPECT_FALSE(chunks[2].oversized);
}

TEST(Chunker, EmptyTextSingleEmptyChunk) {
    PipelineConfig c;
    const auto chunks = chunker::chunk_document(document_kind("d", ""), c);
    ASSERT_EQ(chunks.size(), 1u);
    EXPECT_EQ(chunks[0].word_count, 0u);
}

TEST(ChunkStage, ChildIdsAndMetadata) {
    PipelineConfig c;
    c.chunk_max_words = 50;
    Document d = document_kind("law", five_word_sentences(120));
    d.meta["title"] = "Закон";
    d.lang_confidence = 0.9;
    const auto out = chunker::chunk_stage({d, make_doc("web", five_word_sentences(120))}, c);
    ASSERT_EQ(out.outcomes.size(), 2u);
    EXPECT_EQ(out.outcomes[0].outcome.reason(), Reason::Chunked);
    EXPECT_EQ(out.outcomes[0].outcome.detail(), "chunks=3");
    EXPECT_TRUE(out.outcomes[1].outcome.is_keep());
    ASSERT_EQ(out.docs.size(), 4u);
    EXPECT_EQ(out.docs[0].id, "law#0");
    EXPECT_EQ(out.docs[2].id, "law#2");
    EXPECT_EQ(out.docs[3].id, "web");
    EXPECT_EQ(out.docs[1].meta["parent_id"], "law");
    EXPECT_EQ(out.docs[1].meta["chunk_index"], 1);
    EXPECT_EQ(out.docs[1].meta["title"], "Закон");
    EXPECT_EQ(out.docs[1].lang_confidence, 0.9);
    EXPECT_EQ(out.docs[1].source_kind, SourceKind::Document);
}

TEST(ChunkStage, SingleChunkKeepsId) {
    PipelineConfig c;
    const auto out = chunker::chunk_stage({document_kind("short", five_word_sentences(40))}, c);
    ASSERT_EQ(out.docs.size(), 1u);
    EXPECT_EQ(out.docs[0].id, "short");
    EXPECT_TRUE(out.outcomes[0].outcome.is_keep());
}

// Concatenation restores the text, every chunk is within budget unless it
// is one oversized sentence, and no chunk could have taken the next
// sentence without going over.
TEST(ChunkerProperty, PartitionBudgetAndGreedy) {
    fixtures::MacedonianText gen(51);
    std::uint64_t serial = 0;
    for (int trial = 0; trial < 300; ++trial) {
        PipelineConfig c;
        c.chunk_max_words = 5 + gen.rng().uniform(200);
        std::string t = gen.words_text(1 + gen.rng().uniform(2000), serial);
        if (gen.rng().uniform(4) == 0) t += "\n\n" + gen.paragraph_text(3, serial) + "\n";
        const auto chunks = chunker::chunk_document(document_kind("p", t), c);

        std::string joined;
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            const auto& ch = chunks[i];
            joined += ch.text;
            ASSERT_EQ(ch.index, i);
            ASSERT_EQ(ch.word_count, text::count_words(ch.text));
            const auto pieces = sentences::split_pieces(ch.text);
            if (ch.word_count > c.chunk_max_words) {
                ASSERT_TRUE(ch.oversized);
                ASSERT_EQ(pieces.size(), 1u);
            }
            if (i + 1 < chunks.size()) {
                const auto next = sentences::split_pieces(chunks[i + 1].text);
                ASSERT_GT(ch.word_count + text::count_words(next.front()), c.chunk_max_words);
            }
        }
        ASSERT_EQ(joined, t);
    }
}

TEST(ChunkerProperty, WorkerInvariant) {
    auto docs = fixtures::mixed_corpus(80'000, 12);
    PipelineConfig one;
    one.chunk_max_words = 150;
    PipelineConfig many = one;
    many.worker_count = 5;
    EXPECT_EQ(chunker::chunk_stage(docs, one).docs, chunker::chunk_stage(docs, many).docs);
}
