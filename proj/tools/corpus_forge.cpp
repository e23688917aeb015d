#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "corpus_forge.hpp"

namespace fs = std::filesystem;
using namespace corpus_forge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Thrown for bad flag values detected after CLI11 parsing.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string path_with_suffix(const fs::path& p, const std::string& suffix) { return p.string() + suffix; }

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out.flush()) throw IoError("failed writing " + path.string());
}

void emit(const std::optional<std::string>& output, const std::string& content) {
    if (output) {
        write_file(*output, content);
    } else {
        std::cout << content;
    }
}

template <typename Fn>
void for_each_json_line(const fs::path& path, Fn&& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::is_blank(line)) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        try {
            fn(j, line_no);
        } catch (const Error& e) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

// --- shared pipeline options -----------------------------------------------

struct PipelineFlags {
    std::optional<std::string> config_path;
    std::optional<std::size_t> workers;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> permutations;
    std::optional<std::size_t> bands;
    std::optional<std::size_t> rows;
    std::optional<std::size_t> shingle_size;
    std::optional<double> langid_threshold;
    std::optional<std::string> langid_model;
    std::optional<std::size_t> chunk_max_words;
    std::optional<std::size_t> min_line_words;
    std::optional<std::string> stages;
    bool allow_reorder = false;
};

void add_pipeline_flags(CLI::App& cmd, PipelineFlags& f) {
    cmd.add_option("--config", f.config_path, "TOML config file")->check(CLI::ExistingFile);
    cmd.add_option("--workers", f.workers, "Worker threads (overrides CORPUS_FORGE_WORKERS)")->check(CLI::PositiveNumber);
    cmd.add_option("--seed", f.seed, "Seed for MinHash permutations");
    cmd.add_option("--permutations", f.permutations, "MinHash permutations")->check(CLI::PositiveNumber);
    cmd.add_option("--bands", f.bands, "LSH bands")->check(CLI::PositiveNumber);
    cmd.add_option("--rows", f.rows, "LSH rows per band")->check(CLI::PositiveNumber);
    cmd.add_option("--shingle-size", f.shingle_size, "Words per shingle")->check(CLI::PositiveNumber);
    cmd.add_option("--langid-threshold", f.langid_threshold, "Keep documents with confidence above this");
    cmd.add_option("--langid-model", f.langid_model, "bundled | <model file> | external:<command>");
    cmd.add_option("--chunk-max-words", f.chunk_max_words, "Word budget per chunk")->check(CLI::PositiveNumber);
    cmd.add_option("--min-line-words", f.min_line_words, "Minimum words per kept line")->check(CLI::PositiveNumber);
    cmd.add_option("--stages", f.stages, "Comma-separated stage list (default: all, in order)");
    cmd.add_flag("--allow-reorder", f.allow_reorder, "Permit a stage order other than the default");
}

struct ResolvedSettings {
    FileConfig file;
    pipeline::StagePlan plan = pipeline::StagePlan::defaults();
};

// defaults < config file < CORPUS_FORGE_WORKERS < flags
ResolvedSettings resolve(const PipelineFlags& f) {
    ResolvedSettings s;
    if (f.config_path) s.file = load_config_file(*f.config_path);
    auto& c = s.file.pipeline;
    if (auto w = workers_from_env()) c.worker_count = *w;
    if (f.workers) c.worker_count = *f.workers;
    if (f.seed) c.seed = *f.seed;
    if (f.permutations) c.minhash_permutations = *f.permutations;
    if (f.bands) c.lsh_bands = *f.bands;
    if (f.rows) c.lsh_rows = *f.rows;
    if (f.shingle_size) c.shingle_size = *f.shingle_size;
    if (f.langid_threshold) c.langid_threshold = *f.langid_threshold;
    if (f.chunk_max_words) c.chunk_max_words = *f.chunk_max_words;
    if (f.min_line_words) c.min_line_words = *f.min_line_words;
    if (f.langid_model) s.file.langid_model = f.langid_model;
    if (f.allow_reorder) s.file.allow_reorder = true;
    if (f.stages) s.file.stages = pipeline::split_list(*f.stages);
    c = validate_config(c);
    if (s.file.stages) s.plan = pipeline::StagePlan::from_names(*s.file.stages, s.file.allow_reorder);
    return s;
}

langid::NgramProfileClassifier load_profile_model(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("cannot open language-ID model " + path.string());
    return langid::NgramProfileClassifier::load(in);
}

std::shared_ptr<const langid::LanguageClassifier> make_classifier(const std::optional<std::string>& spec) {
    if (!spec || *spec == "bundled") return nullptr;
    constexpr std::string_view external = "external:";
    if (spec->starts_with(external)) return std::make_shared<langid::ProcessClassifier>(spec->substr(external.size()));
    return std::make_shared<langid::NgramProfileClassifier>(load_profile_model(*spec));
}

// --- filter ----------------------------------------------------------------

struct FilterArgs {
    PipelineFlags flags;
    std::vector<std::string> inputs;
    std::string source;
    std::string output;
    std::optional<std::string> dedup_report;
    std::optional<std::string> report;
    std::optional<std::string> log;
    std::optional<std::string> errors;
    std::string report_format = "markdown";
    bool quiet = false;
};

stats::TableFormat table_format(const std::string& name) {
    try {
        return stats::parse_table_format(name);
    } catch (const FormatError& e) {
        throw UsageError(e.what());
    }
}

int run_filter(const FilterArgs& a) {
    const auto settings = resolve(a.flags);
    const auto format = table_format(a.report_format);
    pipeline::RunContext ctx;
    ctx.config = settings.file.pipeline;
    if (settings.file.pii_rules) ctx.pii_rules = *settings.file.pii_rules;
    ctx.classifier = make_classifier(settings.file.langid_model);

    std::vector<pipeline::InputSpec> inputs;
    for (const auto& in : a.inputs) inputs.push_back({in, a.source});
    pipeline::OutputPaths paths;
    paths.corpus = a.output;
    paths.dedup_report = a.dedup_report.value_or(path_with_suffix(a.output, ".dedup.jsonl"));
    paths.funnel_report = a.report.value_or(path_with_suffix(a.output, ".funnel.json"));
    paths.log = a.log.value_or(path_with_suffix(a.output, ".log.jsonl"));
    paths.errors = a.errors.value_or(path_with_suffix(a.output, ".errors.jsonl"));

    const auto start = std::chrono::steady_clock::now();
    const auto summary = pipeline::run_files(settings.plan, ctx, inputs, paths);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (!a.quiet) {
        std::cout << stats::render_table(summary.report, format);
        if (format == stats::TableFormat::Markdown) std::cout << "\n" << stats::render_funnel(summary.report);
    }
    std::fprintf(stderr, "wrote %zu documents to %s in %.2fs", summary.docs_written, a.output.c_str(), seconds);
    if (summary.input_errors > 0) {
        std::fprintf(stderr, " (%zu malformed input records in %s)", summary.input_errors, paths.errors->c_str());
    }
    std::fprintf(stderr, "\n");
    return kExitOk;
}

// --- stats -----------------------------------------------------------------

struct StatsArgs {
    std::vector<std::string> inputs;
    std::optional<std::string> report;
    std::string report_format = "markdown";
    std::optional<std::string> output;
};

int run_stats(const StatsArgs& a) {
    const auto format = table_format(a.report_format);
    if (a.inputs.empty() == !a.report.has_value()) throw UsageError("stats needs exactly one of --input or --report");
    stats::FunnelReport report;
    if (a.report) {
        std::ifstream in(*a.report, std::ios::binary);
        if (!in) throw IoError("cannot open " + *a.report);
        try {
            report = stats::report_from_json(nlohmann::json::parse(in));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(*a.report + ": " + e.what());
        }
    } else {
        std::vector<pipeline::InputSpec> inputs;
        for (const auto& in : a.inputs) inputs.push_back({in, ""});
        ErrorSidecar sidecar;
        const auto docs = pipeline::read_inputs(inputs, sidecar);
        for (const auto& e : sidecar.entries()) {
            std::fprintf(stderr, "%s:%zu: %s\n", e.path.c_str(), e.line, e.error.c_str());
        }
        report.sources = stats::source_distribution(docs);
        report.sources_input = report.sources;
    }
    std::string out = stats::render_table(report, format);
    if (format == stats::TableFormat::Markdown && !report.stages.empty()) out += "\n" + stats::render_funnel(report);
    emit(a.output, out);
    return kExitOk;
}

// --- assemble-sft ----------------------------------------------------------

struct SftArgs {
    std::vector<std::string> inputs;
    std::optional<std::string> output;
    std::string ratio = "2:1";
    std::size_t max_tokens = 4096;
    std::optional<std::size_t> count;
    std::uint64_t seed = 42;
    std::string mode = "records";
    std::optional<std::string> favored_sources;
    std::optional<std::string> system_prompt_file;
    bool chat = false;
};

int run_assemble_sft(const SftArgs& a) {
    const auto ratio = sft::parse_ratio(a.ratio);
    if (a.mode != "records" && a.mode != "words") throw UsageError("--mode must be records or words");
    if (a.max_tokens < 1) throw UsageError("--max-tokens must be >= 1");
    std::set<std::string> favored = sft::default_favored_sources();
    if (a.favored_sources) {
        const auto list = pipeline::split_list(*a.favored_sources);
        favored = std::set<std::string>(list.begin(), list.end());
    }
    std::string prompt(sft::kDefaultSystemPrompt);
    if (a.system_prompt_file) {
        std::ifstream in(*a.system_prompt_file, std::ios::binary);
        if (!in) throw IoError("cannot open " + *a.system_prompt_file);
        prompt.assign(std::istreambuf_iterator<char>(in), {});
        prompt = text::normalize_nfc(text::trim(prompt));
    }
    const auto counter = sft::default_token_counter();

    std::vector<sft::SftRecord> all;
    for (const auto& path : a.inputs) {
        for_each_json_line(path, [&](const nlohmann::json& j, std::size_t line_no) {
            auto r = sft::record_from_json(j, favored);
            if (r.id.empty()) r.id = fs::path(path).filename().string() + ":" + std::to_string(line_no);
            r.turns = sft::ensure_system_turn(std::move(r.turns), prompt);
            all.push_back(std::move(r));
        });
    }
    const auto profile = sft::length_profile(all, counter, a.max_tokens);

    std::vector<sft::SftRecord> favored_pool;
    std::vector<sft::SftRecord> other_pool;
    std::size_t truncated = 0;
    std::size_t dropped = 0;
    for (auto& r : all) {
        auto res = sft::apply_cutoff(std::move(r), a.max_tokens, counter);
        if (res.outcome.is_drop()) {
            ++dropped;
            continue;
        }
        if (res.outcome.is_transformed()) ++truncated;
        (res.record->favored ? favored_pool : other_pool).push_back(std::move(*res.record));
    }

    sft::MixOptions opts;
    opts.ratio = ratio;
    opts.seed = a.seed;
    opts.mode = a.mode == "words" ? sft::MixMode::Words : sft::MixMode::Records;
    opts.target_count = a.count.value_or(favored_pool.size() + other_pool.size());
    const auto mix = sft::sample_mix(favored_pool, other_pool, opts);

    std::string out;
    for (const auto& r : mix.records) {
        auto j = sft::to_json(r);
        if (a.chat) j["text"] = sft::format_chat(r, prompt);
        out += j.dump() + "\n";
    }
    emit(a.output, out);

    for (const auto& line : mix.log) std::fprintf(stderr, "%s\n", line.c_str());
    const double fav_frac = mix.records.empty() ? 0.0
                                                : static_cast<double>(mix.favored_draws) /
                                                      static_cast<double>(mix.records.size());
    std::fprintf(stderr,
                 "records=%zu favored=%zu translated=%zu favored_fraction=%.4f truncated=%zu dropped=%zu "
                 "coverage@%zu=%.4f\n",
                 mix.records.size(), mix.favored_draws, mix.other_draws, fav_frac, truncated, dropped, a.max_tokens,
                 profile.coverage_at_cutoff);
    return kExitOk;
}

// --- template-mcq ----------------------------------------------------------

struct McqArgs {
    std::string input;
    std::optional<std::string> output;
    std::optional<std::string> review;
    std::string translator = "identity";
    std::string placeholder = std::string(bench::kPlaceholder);
    std::size_t workers = 1;
};

bench::Translator make_translator(const std::string& spec) {
    if (spec == "identity") return bench::identity_translator;
    constexpr std::string_view cmd = "cmd:";
    if (spec.starts_with(cmd) && spec.size() > cmd.size()) {
        return bench::ProcessTranslator(spec.substr(cmd.size()));
    }
    throw UsageError("--translator must be 'identity' or 'cmd:<command>'");
}

int run_template_mcq(const McqArgs& a) {
    const auto translator = make_translator(a.translator);
    std::vector<bench::McqItem> items;
    for_each_json_line(a.input, [&](const nlohmann::json& j, std::size_t) { items.push_back(bench::item_from_json(j)); });

    std::vector<bench::AdaptResult> results(items.size());
    parallel_for(items.size(), a.workers,
                 [&](std::size_t i) { results[i] = bench::adapt_item(items[i], translator, a.placeholder); });

    std::string out;
    std::string review;
    std::size_t recovered = 0;
    std::size_t queued = 0;
    for (const auto& r : results) {
        if (r.adapted) {
            if (r.adapted->status == bench::TranslationStatus::Recovered) ++recovered;
            out += bench::to_json(*r.adapted).dump() + "\n";
        } else {
            ++queued;
            review += bench::to_json(*r.review).dump() + "\n";
        }
    }
    emit(a.output, out);
    const std::string review_path =
        a.review.value_or(a.output ? path_with_suffix(*a.output, ".review.jsonl") : std::string("review.jsonl"));
    write_file(review_path, review);
    std::fprintf(stderr, "items=%zu adapted=%zu recovered=%zu review=%zu (%s)\n", items.size(),
                 items.size() - queued, recovered, queued, review_path.c_str());
    return kExitOk;
}

// --- train-langid ----------------------------------------------------------

struct TrainArgs {
    std::vector<std::string> inputs;
    std::string output;
    bool bundled = false;
    std::size_t ngram_min = 1;
    std::size_t ngram_max = 4;
    std::size_t top_k = 3000;
};

int run_train_langid(const TrainArgs& a) {
    std::vector<langid::TrainingSample> samples;
    if (a.bundled) samples = langid::bundled_samples();
    for (const auto& path : a.inputs) {
        for_each_json_line(path, [&](const nlohmann::json& j, std::size_t) {
            if (!j.is_object() || !j.contains("text") || !j.contains("language")) {
                throw FormatError("training line needs 'text' and 'language'");
            }
            samples.push_back({text::normalize_nfc(j.at("text").get<std::string>()), j.at("language").get<std::string>()});
        });
    }
    if (samples.empty()) throw UsageError("train-langid needs --input or --bundled");
    const auto clf = langid::NgramProfileClassifier::train(samples, {a.ngram_min, a.ngram_max}, a.top_k);
    std::ofstream out(a.output, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + a.output + " for writing");
    clf.save(out);
    if (!out.flush()) throw IoError("failed writing " + a.output);
    std::fprintf(stderr, "trained %zu language profiles -> %s\n", clf.languages().size(), a.output.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Corpus curation pipeline for Macedonian LLM training data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "corpus-forge 0.1.0");

    FilterArgs filter;
    auto* filter_cmd = app.add_subcommand("filter", "Run the filtering funnel over a corpus");
    add_pipeline_flags(*filter_cmd, filter.flags);
    filter_cmd->add_option("--input", filter.inputs, "JSONL file or directory of text files (repeatable)")
        ->required()
        ->check(CLI::ExistingPath);
    filter_cmd->add_option("--source", filter.source, "Source label for directory inputs");
    filter_cmd->add_option("--output", filter.output, "Kept corpus (JSONL)")->required();
    filter_cmd->add_option("--dedup-report", filter.dedup_report, "Near-duplicate report (default <output>.dedup.jsonl)");
    filter_cmd->add_option("--report", filter.report, "Funnel report JSON (default <output>.funnel.json)");
    filter_cmd->add_option("--log", filter.log, "Per-document event log (default <output>.log.jsonl)");
    filter_cmd->add_option("--errors", filter.errors, "Malformed input records (default <output>.errors.jsonl)");
    filter_cmd->add_option("--report-format", filter.report_format, "markdown | json | csv");
    filter_cmd->add_flag("--quiet", filter.quiet, "Do not print the report");

    StatsArgs st;
    auto* stats_cmd = app.add_subcommand("stats", "Print the source distribution table");
    stats_cmd->add_option("--input", st.inputs, "Corpus JSONL or text directory (repeatable)")->check(CLI::ExistingPath);
    stats_cmd->add_option("--report", st.report, "Funnel report JSON written by filter")->check(CLI::ExistingFile);
    stats_cmd->add_option("--report-format", st.report_format, "markdown | json | csv");
    stats_cmd->add_option("--output", st.output, "Write here instead of stdout");

    SftArgs sa;
    auto* sft_cmd = app.add_subcommand("assemble-sft", "Sample an instruction-tuning mix");
    sft_cmd->add_option("--input", sa.inputs, "SFT records JSONL (repeatable)")->required()->check(CLI::ExistingFile);
    sft_cmd->add_option("--output", sa.output, "Mixed records JSONL (default stdout)");
    sft_cmd->add_option("--ratio", sa.ratio, "favored:translated sampling ratio");
    sft_cmd->add_option("--max-tokens", sa.max_tokens, "Per-record token budget");
    sft_cmd->add_option("--count", sa.count, "Records to sample (default: all eligible)");
    sft_cmd->add_option("--seed", sa.seed, "Sampling seed");
    sft_cmd->add_option("--mode", sa.mode, "records | words");
    sft_cmd->add_option("--favored-sources", sa.favored_sources, "Comma-separated favored source labels");
    sft_cmd->add_option("--system-prompt-file", sa.system_prompt_file, "Replace the default system prompt")
        ->check(CLI::ExistingFile);
    sft_cmd->add_flag("--chat", sa.chat, "Add a rendered chat-template 'text' field");

    McqArgs ma;
    auto* mcq_cmd = app.add_subcommand("template-mcq", "Template and translate multiple-choice items");
    mcq_cmd->add_option("--input", ma.input, "Items JSONL")->required()->check(CLI::ExistingFile);
    mcq_cmd->add_option("--output", ma.output, "Adapted items JSONL (default stdout)");
    mcq_cmd->add_option("--review", ma.review, "Review queue JSONL (default <output>.review.jsonl)");
    mcq_cmd->add_option("--translator", ma.translator, "identity | cmd:<command>");
    mcq_cmd->add_option("--placeholder", ma.placeholder, "Placeholder token");
    mcq_cmd->add_option("--workers", ma.workers, "Worker threads")->check(CLI::PositiveNumber);

    TrainArgs ta;
    auto* train_cmd = app.add_subcommand("train-langid", "Train n-gram language profiles");
    train_cmd->add_option("--input", ta.inputs, "JSONL with 'text' and 'language' (repeatable)")->check(CLI::ExistingFile);
    train_cmd->add_flag("--bundled", ta.bundled, "Include the bundled seed texts");
    train_cmd->add_option("--output", ta.output, "Model file")->required();
    train_cmd->add_option("--ngram-min", ta.ngram_min, "Smallest n")->check(CLI::PositiveNumber);
    train_cmd->add_option("--ngram-max", ta.ngram_max, "Largest n")->check(CLI::PositiveNumber);
    train_cmd->add_option("--top-k", ta.top_k, "Profile size")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*filter_cmd) return run_filter(filter);
        if (*stats_cmd) return run_stats(st);
        if (*sft_cmd) return run_assemble_sft(sa);
        if (*mcq_cmd) return run_template_mcq(ma);
        if (*train_cmd) return run_train_langid(ta);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
    return kExitUsage;
}
