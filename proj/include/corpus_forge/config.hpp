#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "corpus_forge/error.hpp"

namespace corpus_forge {

struct PipelineConfig {
    // langid
    double langid_threshold = 0.65;
    std::string langid_target = "mk";
    std::size_t langid_max_chars = 4096;

    // quality
    std::size_t min_line_words = 3;
    double bullet_ratio_max = 0.90;
    double ellipsis_ratio_max = 0.30;
    // Extra repetition rules, off unless set.
    std::optional<double> dup_line_frac_max;
    std::optional<double> top_2gram_frac_max;

    // chunking
    std::size_t chunk_max_words = 4000;

    // dedup
    std::size_t minhash_permutations = 128;
    std::size_t lsh_bands = 16;
    std::size_t lsh_rows = 8;
    std::size_t shingle_size = 5;
    std::size_t min_sentence_chars = 15;

    std::uint64_t seed = 42;
    std::size_t worker_count = 1;

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

namespace detail {

inline void require_fraction(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ConfigError(std::string(name) + " must lie in [0,1], got " + std::to_string(v));
    }
}

inline void require_count(std::size_t v, const char* name) {
    if (v < 1) throw ConfigError(std::string(name) + " must be >= 1");
}

}  // namespace detail

// Returns `config` unchanged when every invariant holds, throws ConfigError otherwise.
inline PipelineConfig validate_config(PipelineConfig config) {
    detail::require_fraction(config.langid_threshold, "langid_threshold");
    detail::require_fraction(config.bullet_ratio_max, "bullet_ratio_max");
    detail::require_fraction(config.ellipsis_ratio_max, "ellipsis_ratio_max");
    if (config.dup_line_frac_max) detail::require_fraction(*config.dup_line_frac_max, "dup_line_frac_max");
    if (config.top_2gram_frac_max) detail::require_fraction(*config.top_2gram_frac_max, "top_2gram_frac_max");

    detail::require_count(config.min_line_words, "min_line_words");
    detail::require_count(config.chunk_max_words, "chunk_max_words");
    detail::require_count(config.minhash_permutations, "minhash_permutations");
    detail::require_count(config.lsh_bands, "lsh_bands");
    detail::require_count(config.lsh_rows, "lsh_rows");
    detail::require_count(config.shingle_size, "shingle_size");
    detail::require_count(config.min_sentence_chars, "min_sentence_chars");
    detail::require_count(config.worker_count, "worker_count");
    detail::require_count(config.langid_max_chars, "langid_max_chars");

    if (config.lsh_bands * config.lsh_rows != config.minhash_permutations) {
        throw ConfigError("lsh_bands x lsh_rows (" + std::to_string(config.lsh_bands) + " x " +
                          std::to_string(config.lsh_rows) + ") must equal minhash_permutations (" +
                          std::to_string(config.minhash_permutations) + ")");
    }
    if (config.langid_target.empty()) throw ConfigError("langid_target must be non-empty");
    return config;
}

}  // namespace corpus_forge
