#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "corpus_forge/chunker.hpp"
#include "corpus_forge/config.hpp"
#include "corpus_forge/dedup.hpp"
#include "corpus_forge/document.hpp"
#include "corpus_forge/error.hpp"
#include "corpus_forge/jsonl.hpp"
#include "corpus_forge/langid.hpp"
#include "corpus_forge/parallel.hpp"
#include "corpus_forge/pii.hpp"
#include "corpus_forge/quality.hpp"
#include "corpus_forge/stage.hpp"
#include "corpus_forge/stats.hpp"

namespace corpus_forge::pipeline {

enum class StageId { Pii, C4, Gopher, LangId, SentenceDedup, Chunk, MinhashDedup };

inline constexpr std::array<std::pair<StageId, std::string_view>, 7> kStageNames{{
    {StageId::Pii, "pii"},
    {StageId::C4, "c4"},
    {StageId::Gopher, "gopher"},
    {StageId::LangId, "langid"},
    {StageId::SentenceDedup, "sentence-dedup"},
    {StageId::Chunk, "chunk"},
    {StageId::MinhashDedup, "minhash-dedup"},
}};

inline std::string_view to_string(StageId id) {
    for (const auto& [s, name] : kStageNames) {
        if (s == id) return name;
    }
    return "?";
}

inline StageId parse_stage(std::string_view name) {
    for (const auto& [s, n] : kStageNames) {
        if (n == name) return s;
    }
    throw ConfigError("unknown stage '" + std::string(name) + "'");
}

struct StagePlan {
    std::vector<StageId> stages;

    static StagePlan defaults() {
        StagePlan p;
        for (const auto& [s, _] : kStageNames) p.stages.push_back(s);
        return p;
    }

    // Any subset of the stages. Order must follow the default sequence unless
    // allow_reorder is set.
    static StagePlan from_names(const std::vector<std::string>& names, bool allow_reorder) {
        StagePlan p;
        std::set<StageId> seen;
        for (const auto& n : names) {
            const StageId s = parse_stage(n);
            if (!seen.insert(s).second) throw ConfigError("stage '" + n + "' listed twice");
            p.stages.push_back(s);
        }
        if (p.stages.empty()) throw ConfigError("stage list is empty");
        if (!allow_reorder && !std::is_sorted(p.stages.begin(), p.stages.end())) {
            throw ConfigError("stage order differs from the default sequence; pass --allow-reorder to override");
        }
        return p;
    }

    bool contains(StageId s) const { return std::find(stages.begin(), stages.end(), s) != stages.end(); }
};

inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto end = comma == std::string_view::npos ? s.size() : comma;
        const auto item = text::trim(s.substr(start, end - start));
        if (!item.empty()) out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

struct RunContext {
    PipelineConfig config;
    pii::PiiRuleSet pii_rules = pii::PiiRuleSet::defaults();
    std::shared_ptr<const langid::LanguageClassifier> classifier;  // bundled profiles when null
};

struct RunResult {
    std::vector<Document> docs;
    stats::FunnelReport report;
    std::vector<dedup::DedupReportEntry> dedup_report;
    std::vector<nlohmann::ordered_json> events;  // one per non-Keep outcome, in stage then id order
};

// Thrown when a stage fails; carries everything completed before it.
class StageFailure : public Error {
public:
    StageFailure(std::string stage, const std::string& what, RunResult partial)
        : Error("stage '" + stage + "' failed: " + what), stage_(std::move(stage)), partial_(std::move(partial)) {}

    const std::string& stage() const noexcept { return stage_; }
    const RunResult& partial() const noexcept { return partial_; }

private:
    std::string stage_;
    RunResult partial_;
};

namespace detail {

template <typename Fn>
StageOutput per_document(std::vector<Document> docs, std::size_t workers, Fn&& fn) {
    std::vector<FilterOutcome> outcomes(docs.size(), FilterOutcome::keep());
    parallel_for(docs.size(), workers, [&](std::size_t i) { outcomes[i] = fn(docs[i]); });
    StageOutput out;
    out.outcomes.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        out.outcomes.push_back({docs[i].id, outcomes[i]});
        if (!outcomes[i].is_drop()) out.docs.push_back(std::move(docs[i]));
    }
    return out;
}

inline nlohmann::ordered_json event(std::string_view stage, const OutcomeRecord& r) {
    nlohmann::ordered_json j;
    j["stage"] = stage;
    j["id"] = r.id;
    j["decision"] = to_string(r.outcome.decision());
    j["reason"] = to_string(r.outcome.reason());
    if (!r.outcome.detail().empty()) j["detail"] = r.outcome.detail();
    return j;
}

}  // namespace detail

inline StageOutput run_stage(StageId stage, std::vector<Document> docs, const RunContext& ctx,
                             std::vector<dedup::DedupReportEntry>* dedup_report = nullptr) {
    const auto& cfg = ctx.config;
    sort_by_id(docs);
    switch (stage) {
        case StageId::Pii:
            return detail::per_document(std::move(docs), cfg.worker_count, [&](Document& d) {
                auto r = pii::scrub(std::move(d), ctx.pii_rules);
                d = std::move(r.doc);
                return r.outcome;
            });
        case StageId::C4:
            return detail::per_document(std::move(docs), cfg.worker_count, [&](Document& d) {
                auto r = quality::c4_line_filter(std::move(d), cfg);
                d = std::move(r.doc);
                return r.outcome;
            });
        case StageId::Gopher:
            return detail::per_document(std::move(docs), cfg.worker_count,
                                        [&](Document& d) { return quality::gopher_doc_filter(d, cfg); });
        case StageId::LangId: {
            const langid::LanguageClassifier& clf =
                ctx.classifier ? *ctx.classifier : langid::bundled_classifier();
            return detail::per_document(std::move(docs), cfg.worker_count,
                                        [&](Document& d) { return langid::gate(d, clf, cfg); });
        }
        case StageId::SentenceDedup:
            return dedup::sentence_dedup(std::move(docs), cfg);
        case StageId::Chunk:
            return chunker::chunk_stage(std::move(docs), cfg);
        case StageId::MinhashDedup: {
            auto r = dedup::lsh_dedup(std::move(docs), cfg);
            if (dedup_report != nullptr) {
                dedup_report->insert(dedup_report->end(), r.report.begin(), r.report.end());
            }
            return std::move(r.stage);
        }
    }
    throw std::logic_error("unhandled stage");
}

// Runs the plan in order with a barrier between stages.
inline RunResult run(const StagePlan& plan, const RunContext& ctx, std::vector<Document> input) {
    validate_config(ctx.config);
    RunResult result;
    sort_by_id(input);
    result.report.sources_input = stats::source_distribution(input);
    result.docs = std::move(input);
    for (const StageId stage : plan.stages) {
        const std::string name(to_string(stage));
        try {
            StageOutput out = run_stage(stage, result.docs, ctx, &result.dedup_report);
            result.report.stages.push_back(stats::tally(result.docs, out.docs, out.outcomes, name));
            for (const auto& o : out.outcomes) {
                if (!o.outcome.is_keep()) result.events.push_back(detail::event(name, o));
            }
            result.docs = std::move(out.docs);
        } catch (const std::exception& e) {
            result.report.sources = stats::source_distribution(result.docs);
            throw StageFailure(name, e.what(), std::move(result));
        }
    }
    result.report.sources = stats::source_distribution(result.docs);
    return result;
}

// --- file-level driver ----------------------------------------------------

struct InputSpec {
    std::filesystem::path path;  // JSONL file or directory of text files
    std::string source;          // source label for directories; defaults to the directory name
};

struct OutputPaths {
    std::filesystem::path corpus;
    std::optional<std::filesystem::path> dedup_report;
    std::optional<std::filesystem::path> funnel_report;
    std::optional<std::filesystem::path> log;
    std::optional<std::filesystem::path> errors;  // malformed input records
};

// Reads every input in order. A later document whose id was already seen is
// reported to the sidecar and skipped.
inline std::vector<Document> read_inputs(const std::vector<InputSpec>& inputs, ErrorSidecar& sidecar) {
    auto shared = std::make_shared<ErrorSidecar>();
    std::vector<Document> docs;
    std::unordered_set<std::string> ids;
    for (const auto& in : inputs) {
        ReadOptions opts;
        opts.sidecar = shared;
        const bool is_dir = std::filesystem::is_directory(in.path);
        std::string source = in.source;
        if (is_dir && source.empty()) source = std::filesystem::absolute(in.path).lexically_normal().filename().string();
        if (is_dir && source.empty()) source = "documents";
        CorpusStream stream = is_dir ? read_text_dir(in.path, source, opts) : read_jsonl(in.path, opts);
        while (auto d = stream.next()) {
            if (!ids.insert(d->id).second) {
                shared->add(in.path.string(), 0, "duplicate id '" + d->id + "'");
                continue;
            }
            docs.push_back(std::move(*d));
        }
    }
    for (const auto& e : shared->entries()) sidecar.add(e.path, e.line, e.error);
    return docs;
}

namespace detail {

inline std::filesystem::path partial_path(const std::filesystem::path& p) {
    return std::filesystem::path(p.string() + ".partial");
}

inline void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

inline std::string events_jsonl(const std::vector<nlohmann::ordered_json>& events) {
    std::string s;
    for (const auto& e : events) s += e.dump() + "\n";
    return s;
}

inline std::string dedup_jsonl(const std::vector<dedup::DedupReportEntry>& report) {
    std::ostringstream out;
    dedup::write_dedup_report(report, out);
    return out.str();
}

// Writes every requested artifact to "<name>.partial". On success they are
// renamed into place; on failure they stay as .partial.
inline std::vector<std::filesystem::path> write_outputs(const RunResult& r, const OutputPaths& paths) {
    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::filesystem::path& final_path, const std::string& content) {
        const auto p = partial_path(final_path);
        write_text(p, content);
        written.push_back(final_path);
    };
    std::string corpus;
    for (const auto& d : r.docs) corpus += to_jsonl_line(d) + "\n";
    emit(paths.corpus, corpus);
    if (paths.dedup_report) emit(*paths.dedup_report, dedup_jsonl(r.dedup_report));
    if (paths.funnel_report) emit(*paths.funnel_report, stats::to_json(r.report).dump(2) + "\n");
    if (paths.log) emit(*paths.log, events_jsonl(r.events));
    return written;
}

}  // namespace detail

struct FileRunSummary {
    stats::FunnelReport report;
    std::size_t docs_written = 0;
    std::size_t input_errors = 0;
};

inline FileRunSummary run_files(const StagePlan& plan, const RunContext& ctx, const std::vector<InputSpec>& inputs,
                                const OutputPaths& paths) {
    ErrorSidecar sidecar;
    std::vector<Document> docs = read_inputs(inputs, sidecar);
    if (paths.errors && !sidecar.entries().empty()) sidecar.write(*paths.errors);

    RunResult result;
    try {
        result = run(plan, ctx, std::move(docs));
    } catch (const StageFailure& f) {
        detail::write_outputs(f.partial(), paths);
        throw;
    }
    for (const auto& p : detail::write_outputs(result, paths)) {
        std::filesystem::rename(detail::partial_path(p), p);
    }
    return {result.report, result.docs.size(), sidecar.entries().size()};
}

}  // namespace corpus_forge::pipeline
