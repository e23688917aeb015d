#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "corpus_forge/config.hpp"
#include "corpus_forge/document.hpp"
#include "corpus_forge/hashing.hpp"
#include "corpus_forge/jsonl.hpp"
#include "corpus_forge/parallel.hpp"
#include "corpus_forge/sentences.hpp"
#include "corpus_forge/stage.hpp"
#include "corpus_forge/unicode.hpp"

namespace corpus_forge::dedup {

// ---------------------------------------------------------------------------
// Sentence-level exact dedup
// ---------------------------------------------------------------------------

using SentenceKey = std::uint64_t;

inline SentenceKey sentence_key(std::string_view sentence) {
    return hashing::murmur64(text::normalize_for_key(sentence));
}

// Global exact sentence dedup. Documents are visited in ascending id order
// and sentences in position order; the first occurrence of a key survives.
// Sentences shorter than config.min_sentence_chars (after normalization)
// are never removed.
inline StageOutput sentence_dedup(std::vector<Document> docs, const PipelineConfig& config) {
    sort_by_id(docs);

    struct Keyed {
        std::vector<std::string_view> pieces;
        std::vector<SentenceKey> keys;
        std::vector<bool> eligible;
    };
    std::vector<Keyed> keyed(docs.size());
    parallel_for(docs.size(), config.worker_count, [&](std::size_t i) {
        auto& k = keyed[i];
        k.pieces = sentences::split_pieces(docs[i].text);
        k.keys.resize(k.pieces.size());
        k.eligible.resize(k.pieces.size());
        for (std::size_t p = 0; p < k.pieces.size(); ++p) {
            const std::string norm = text::normalize_for_key(k.pieces[p]);
            k.keys[p] = hashing::murmur64(norm);
            k.eligible[p] = text::count_code_points(norm) >= config.min_sentence_chars;
        }
    });

    std::unordered_set<SentenceKey> seen;
    StageOutput out;
    out.outcomes.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        auto& k = keyed[i];
        std::vector<bool> keep(k.pieces.size(), true);
        std::size_t removed = 0;
        for (std::size_t p = 0; p < k.pieces.size(); ++p) {
            if (!k.eligible[p]) continue;
            if (!seen.insert(k.keys[p]).second) {
                keep[p] = false;
                ++removed;
            }
        }
        Document& doc = docs[i];
        if (removed == 0) {
            out.outcomes.push_back({doc.id, FilterOutcome::keep()});
            out.docs.push_back(std::move(doc));
            continue;
        }
        std::string rebuilt;
        rebuilt.reserve(doc.text.size());
        for (std::size_t p = 0; p < k.pieces.size(); ++p) {
            if (keep[p]) rebuilt.append(k.pieces[p]);
        }
        const std::string detail = "removed_sentences=" + std::to_string(removed);
        if (text::is_blank(rebuilt)) {
            out.outcomes.push_back({doc.id, FilterOutcome::drop(Reason::DuplicateSentence, detail)});
            continue;
        }
        doc.text = std::move(rebuilt);
        out.outcomes.push_back({doc.id, FilterOutcome::transformed(Reason::DuplicateSentence, detail)});
        out.docs.push_back(std::move(doc));
    }
    return out;
}

// ---------------------------------------------------------------------------
// MinHash
// ---------------------------------------------------------------------------

struct MinHashSignature {
    std::string doc_id;
    std::vector<std::uint64_t> values;

    friend bool operator==(const MinHashSignature&, const MinHashSignature&) = default;
};

// Word k-shingles of the lowercased text, hashed to 64 bits. Texts with
// fewer than k words yield one shingle covering the whole text.
inline std::vector<std::uint64_t> shingle_hashes(std::string_view text_in, std::size_t k) {
    const std::string norm = text::normalize_for_key(text_in);
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < norm.size(); ++i) {
        if (i == 0 || norm[i - 1] == ' ') starts.push_back(i);
    }
    std::vector<std::uint64_t> out;
    if (starts.size() < k) {
        out.push_back(hashing::murmur64(norm));
        return out;
    }
    out.reserve(starts.size() - k + 1);
    for (std::size_t w = 0; w + k <= starts.size(); ++w) {
        const std::size_t b = starts[w];
        const std::size_t e = w + k < starts.size() ? starts[w + k] - 1 : norm.size();
        out.push_back(hashing::murmur64(std::string_view(norm).substr(b, e - b)));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Permutation family h_i(x) = (a_i x + b_i) mod (2^61 - 1), coefficients
// drawn from a splitmix64 stream seeded with `seed`.
class MinHasher {
public:
    MinHasher(std::size_t permutations, std::uint64_t seed) {
        a_.reserve(permutations);
        b_.reserve(permutations);
        std::uint64_t state = seed;
        for (std::size_t i = 0; i < permutations; ++i) {
            state = hashing::splitmix64(state);
            a_.push_back(1 + state % (hashing::kMersenne61 - 1));
            state = hashing::splitmix64(state);
            b_.push_back(state % hashing::kMersenne61);
        }
    }

    explicit MinHasher(const PipelineConfig& config) : MinHasher(config.minhash_permutations, config.seed) {}

    std::size_t permutations() const noexcept { return a_.size(); }

    std::vector<std::uint64_t> sign_shingles(const std::vector<std::uint64_t>& shingles) const {
        std::vector<std::uint64_t> sig(a_.size(), std::numeric_limits<std::uint64_t>::max());
        for (const std::uint64_t x : shingles) {
            const std::uint64_t xr = x % hashing::kMersenne61;
            for (std::size_t i = 0; i < a_.size(); ++i) {
                const std::uint64_t h = hashing::affine_mod_mersenne61(a_[i], xr, b_[i]);
                if (h < sig[i]) sig[i] = h;
            }
        }
        return sig;
    }

    MinHashSignature sign(const Document& doc, std::size_t shingle_size) const {
        return {doc.id, sign_shingles(shingle_hashes(doc.text, shingle_size))};
    }

private:
    std::vector<std::uint64_t> a_;
    std::vector<std::uint64_t> b_;
};

inline MinHashSignature minhash_signature(const Document& doc, const PipelineConfig& config) {
    return MinHasher(config).sign(doc, config.shingle_size);
}

// Fraction of matching slots.
inline double estimate_similarity(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    if (a.empty() || a.size() != b.size()) return 0.0;
    std::size_t same = 0;
    for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i];
    return static_cast<double>(same) / static_cast<double>(a.size());
}

inline double estimate_similarity(const MinHashSignature& a, const MinHashSignature& b) {
    return estimate_similarity(a.values, b.values);
}

// Similarity where the collision probability of a b-band, r-row scheme
// crosses its steepest point: (1/b)^(1/r).
inline double band_threshold(std::size_t bands, std::size_t rows) {
    return std::pow(1.0 / static_cast<double>(bands), 1.0 / static_cast<double>(rows));
}

// ---------------------------------------------------------------------------
// LSH banding
// ---------------------------------------------------------------------------

inline std::uint64_t band_hash(const std::vector<std::uint64_t>& sig, std::size_t band, std::size_t rows) {
    std::uint64_t h = hashing::splitmix64(band);
    for (std::size_t r = 0; r < rows; ++r) h = hashing::splitmix64(h ^ sig[band * rows + r]);
    return h;
}

// One table per band: band hash -> ascending document indices.
class LshIndex {
public:
    LshIndex(std::size_t bands, std::size_t rows) : rows_(rows), tables_(bands) {}

    std::size_t bands() const noexcept { return tables_.size(); }
    std::size_t rows() const noexcept { return rows_; }

    void insert(std::uint32_t doc_index, const std::vector<std::uint64_t>& sig) {
        for (std::size_t b = 0; b < tables_.size(); ++b) {
            auto& bucket = tables_[b][band_hash(sig, b, rows_)];
            if (bucket.empty() || bucket.back() != doc_index) bucket.push_back(doc_index);
        }
    }

    // Appends `other`'s buckets. Keeps buckets ascending when `other` holds
    // only indices greater than everything already inserted.
    void merge(const LshIndex& other) {
        for (std::size_t b = 0; b < tables_.size(); ++b) {
            for (const auto& [key, ids] : other.tables_[b]) {
                auto& bucket = tables_[b][key];
                bucket.insert(bucket.end(), ids.begin(), ids.end());
            }
        }
    }

    const std::vector<std::uint32_t>* bucket(std::size_t band, std::uint64_t key) const {
        const auto it = tables_[band].find(key);
        return it == tables_[band].end() ? nullptr : &it->second;
    }

    // Indices sharing at least one band with `sig`, ascending, deduplicated.
    std::vector<std::uint32_t> candidates(const std::vector<std::uint64_t>& sig) const {
        std::vector<std::uint32_t> out;
        for (std::size_t b = 0; b < tables_.size(); ++b) {
            if (const auto* ids = bucket(b, band_hash(sig, b, rows_))) out.insert(out.end(), ids->begin(), ids->end());
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

private:
    std::size_t rows_;
    std::vector<std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>> tables_;
};

struct DedupReportEntry {
    std::string dropped_id;
    std::string kept_id;
    double estimated_similarity = 0.0;

    friend bool operator==(const DedupReportEntry&, const DedupReportEntry&) = default;
};

struct LshDedupOutput {
    StageOutput stage;
    std::vector<DedupReportEntry> report;
};

inline void write_dedup_report(const std::vector<DedupReportEntry>& report, std::ostream& out) {
    for (const auto& e : report) {
        nlohmann::ordered_json j;
        j["dropped_id"] = e.dropped_id;
        j["kept_id"] = e.kept_id;
        j["estimated_similarity"] = e.estimated_similarity;
        out << j.dump() << '\n';
    }
}

// Two passes over documents sorted by id. Pass 1 builds the band index
// (sharded per worker, merged in shard order). Pass 2 reads the frozen
// index: a document is dropped when it shares a band with an earlier kept
// document whose signature similarity reaches the band threshold.
inline LshDedupOutput lsh_dedup(std::vector<Document> docs, const PipelineConfig& config) {
    sort_by_id(docs);
    const std::size_t n = docs.size();
    const MinHasher hasher(config);

    std::vector<std::vector<std::uint64_t>> sigs(n);
    parallel_for(n, config.worker_count,
                 [&](std::size_t i) { sigs[i] = hasher.sign_shingles(shingle_hashes(docs[i].text, config.shingle_size)); });

    const std::size_t shards = std::max<std::size_t>(1, std::min(config.worker_count, n));
    std::vector<LshIndex> partial(shards, LshIndex(config.lsh_bands, config.lsh_rows));
    parallel_for(shards, shards, [&](std::size_t s) {
        const std::size_t begin = n * s / shards;
        const std::size_t end = n * (s + 1) / shards;
        for (std::size_t i = begin; i < end; ++i) partial[s].insert(static_cast<std::uint32_t>(i), sigs[i]);
    });
    LshIndex index(config.lsh_bands, config.lsh_rows);
    for (const auto& p : partial) index.merge(p);

    const double threshold = band_threshold(config.lsh_bands, config.lsh_rows);
    struct Match {
        std::uint32_t index;
        double similarity;
    };
    std::vector<std::vector<Match>> verified(n);
    parallel_for(n, config.worker_count, [&](std::size_t i) {
        for (const std::uint32_t j : index.candidates(sigs[i])) {
            if (j >= i) break;
            const double sim = estimate_similarity(sigs[i], sigs[j]);
            if (sim >= threshold) verified[i].push_back({j, sim});
        }
    });

    LshDedupOutput out;
    std::vector<bool> kept(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const Match* best = nullptr;
        for (const auto& m : verified[i]) {
            if (!kept[m.index]) continue;
            if (best == nullptr || m.similarity > best->similarity) best = &m;
        }
        if (best == nullptr) {
            kept[i] = true;
            out.stage.outcomes.push_back({docs[i].id, FilterOutcome::keep()});
            continue;
        }
        out.report.push_back({docs[i].id, docs[best->index].id, best->similarity});
        out.stage.outcomes.push_back(
            {docs[i].id, FilterOutcome::drop(Reason::NearDuplicateDoc, "kept_id=" + docs[best->index].id)});
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (kept[i]) out.stage.docs.push_back(std::move(docs[i]));
    }
    return out;
}

}  // namespace corpus_forge::dedup
