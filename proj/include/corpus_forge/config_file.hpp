#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "corpus_forge/config.hpp"
#include "corpus_forge/error.hpp"
#include "corpus_forge/pii.hpp"

namespace corpus_forge {

inline constexpr const char* kWorkersEnv = "CORPUS_FORGE_WORKERS";

// Everything a config file can set. Pipeline knobs live in `pipeline`; the
// rest are orchestration settings the CLI may also override.
struct FileConfig {
    PipelineConfig pipeline;
    std::optional<std::vector<std::string>> stages;
    bool allow_reorder = false;
    std::optional<std::string> langid_model;
    std::optional<pii::PiiRuleSet> pii_rules;
};

namespace detail {

template <typename T>
std::optional<T> toml_get(const toml::table& t, std::string_view section, std::string_view key) {
    const auto node = t[section][key];
    if (!node) return std::nullopt;
    if constexpr (std::is_same_v<T, double>) {
        if (auto v = node.value<double>()) return *v;
    } else if constexpr (std::is_same_v<T, bool>) {
        if (auto v = node.as_boolean()) return v->get();
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (auto v = node.as_string()) return v->get();
    } else {
        if (auto v = node.as_integer()) {
            if (v->get() < 0) {
                throw ConfigError("[" + std::string(section) + "] " + std::string(key) + " must be non-negative");
            }
            return static_cast<T>(v->get());
        }
    }
    throw ConfigError("[" + std::string(section) + "] " + std::string(key) + " has the wrong type");
}

template <typename T>
void assign(T& dst, const toml::table& t, std::string_view section, std::string_view key) {
    if (auto v = toml_get<T>(t, section, key)) dst = *v;
}

template <typename T>
void assign(std::optional<T>& dst, const toml::table& t, std::string_view section, std::string_view key) {
    if (auto v = toml_get<T>(t, section, key)) dst = *v;
}

inline std::vector<std::string> string_array(const toml::table& t, std::string_view section, std::string_view key) {
    const auto* arr = t[section][key].as_array();
    if (arr == nullptr) throw ConfigError("[" + std::string(section) + "] " + std::string(key) + " must be an array");
    std::vector<std::string> out;
    for (const auto& el : *arr) {
        const auto* s = el.as_string();
        if (s == nullptr) throw ConfigError("[" + std::string(section) + "] " + std::string(key) + " must hold strings");
        out.push_back(s->get());
    }
    return out;
}

}  // namespace detail

inline FileConfig parse_config(const toml::table& t) {
    FileConfig fc;
    auto& c = fc.pipeline;
    using detail::assign;

    assign(c.seed, t, "pipeline", "seed");
    assign(c.worker_count, t, "pipeline", "worker_count");
    if (t["pipeline"]["stages"]) fc.stages = detail::string_array(t, "pipeline", "stages");
    assign(fc.allow_reorder, t, "pipeline", "allow_reorder");

    assign(c.min_line_words, t, "quality", "min_line_words");
    assign(c.bullet_ratio_max, t, "quality", "bullet_ratio_max");
    assign(c.ellipsis_ratio_max, t, "quality", "ellipsis_ratio_max");
    assign(c.dup_line_frac_max, t, "quality", "dup_line_frac_max");
    assign(c.top_2gram_frac_max, t, "quality", "top_2gram_frac_max");

    assign(c.langid_threshold, t, "langid", "threshold");
    assign(c.langid_target, t, "langid", "target");
    assign(c.langid_max_chars, t, "langid", "max_chars");
    assign(fc.langid_model, t, "langid", "model");

    assign(c.minhash_permutations, t, "dedup", "permutations");
    assign(c.lsh_bands, t, "dedup", "bands");
    assign(c.lsh_rows, t, "dedup", "rows");
    assign(c.shingle_size, t, "dedup", "shingle_size");
    assign(c.min_sentence_chars, t, "dedup", "min_sentence_chars");

    assign(c.chunk_max_words, t, "chunk", "max_words");

    // [pii] email = "[EMAIL]" ... ; listing a kind replaces the default set.
    if (const auto* pii_table = t["pii"].as_table()) {
        std::vector<pii::Rule> rules;
        for (const char* kind : {"email", "ipv6", "ipv4", "phone"}) {
            if (auto token = detail::toml_get<std::string>(t, "pii", kind)) {
                rules.push_back({pii::parse_pattern_kind(kind), *token});
            }
        }
        for (const auto& [key, _] : *pii_table) {
            const std::string_view k = key.str();
            if (k != "email" && k != "ipv6" && k != "ipv4" && k != "phone") {
                throw ConfigError("[pii] unknown pattern '" + std::string(k) + "'");
            }
        }
        if (!rules.empty()) fc.pii_rules = pii::PiiRuleSet(std::move(rules));
    }
    return fc;
}

inline FileConfig load_config_string(std::string_view toml_text, std::string_view source = "config") {
    try {
        return parse_config(toml::parse(toml_text, source));
    } catch (const toml::parse_error& e) {
        throw ConfigError(std::string(source) + ": " + std::string(e.description()));
    }
}

inline FileConfig load_config_file(const std::filesystem::path& path) {
    try {
        return parse_config(toml::parse_file(path.string()));
    } catch (const toml::parse_error& e) {
        throw ConfigError(path.string() + ": " + std::string(e.description()));
    }
}

// Reads CORPUS_FORGE_WORKERS; unset or empty means no override.
inline std::optional<std::size_t> workers_from_env() {
    const char* v = std::getenv(kWorkersEnv);
    if (v == nullptr || *v == '\0') return std::nullopt;
    char* end = nullptr;
    const long long n = std::strtoll(v, &end, 10);
    if (*end != '\0' || n < 1) throw ConfigError(std::string(kWorkersEnv) + " must be a positive integer");
    return static_cast<std::size_t>(n);
}

}  // namespace corpus_forge
