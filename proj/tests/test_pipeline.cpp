#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "corpus_forge/config_file.hpp"
#include "corpus_forge/jsonl.hpp"
#include "corpus_forge/pipeline.hpp"
#include "support/fixtures.hpp"

using namespace corpus_forge;
using pipeline::StageId;
using pipeline::StagePlan;

namespace {

std::set<std::string> ids_of(const std::vector<Document>& docs) {
    std::set<std::string> ids;
    for (const auto& d : docs) ids.insert(d.id);
    return ids;
}

std::string parent_of(const Document& d) {
    if (d.meta.contains("parent_id")) return d.meta.at("parent_id").get<std::string>();
    return d.id;
}

class ScopedEnv {
public:
    ScopedEnv(const char* name, const char* value) : name_(name) {
        if (const char* old = std::getenv(name)) old_ = old;
        if (value) setenv(name, value, 1);
        else unsetenv(name);
    }
    ~ScopedEnv() {
        if (old_) setenv(name_, old_->c_str(), 1);
        else unsetenv(name_);
    }

private:
    const char* name_;
    std::optional<std::string> old_;
};

const std::vector<Document>& corpus() {
    static const std::vector<Document> docs = fixtures::mixed_corpus(150'000, 101);
    return docs;
}

}  // namespace

TEST(Plan, DefaultOrder) {
    const auto p = StagePlan::defaults();
    ASSERT_EQ(p.stages.size(), 7u);
    std::vector<std::string> names;
    for (const auto s : p.stages) names.emplace_back(pipeline::to_string(s));
    EXPECT_EQ(names, (std::vector<std::string>{"pii", "c4", "gopher", "langid", "sentence-dedup", "chunk",
                                               "minhash-dedup"}));
}

TEST(Plan, SubsetsAndReorder) {
    EXPECT_EQ(StagePlan::from_names({"c4", "minhash-dedup"}, false).stages,
              (std::vector<StageId>{StageId::C4, StageId::MinhashDedup}));
    EXPECT_THROW(StagePlan::from_names({"minhash-dedup", "c4"}, false), ConfigError);
    EXPECT_EQ(StagePlan::from_names({"minhash-dedup", "c4"}, true).stages.front(), StageId::MinhashDedup);
    EXPECT_THROW(StagePlan::from_names({"c4", "c4"}, true), ConfigError);
    EXPECT_THROW(StagePlan::from_names({}, false), ConfigError);
    EXPECT_THROW(StagePlan::from_names({"tokenize"}, false), ConfigError);
    EXPECT_EQ(pipeline::split_list("pii, c4,,langid"), (std::vector<std::string>{"pii", "c4", "langid"}));
}

TEST(Run, AllStagesDoWork) {
    pipeline::RunContext ctx;
    ctx.config.chunk_max_words = 200;
    const auto r = pipeline::run(StagePlan::defaults(), ctx, corpus());
    ASSERT_EQ(r.report.stages.size(), 7u);
    for (const auto& s : r.report.stages) {
        EXPECT_GT(s.dropped() + s.transformed, 0u) << s.stage;
    }
    EXPECT_FALSE(r.dedup_report.empty());
    std::map<std::string, std::size_t> by_stage;
    for (const auto& e : r.events) ++by_stage[e["stage"].get<std::string>()];
    EXPECT_EQ(by_stage.size(), 7u);
}

// Every input id is either dropped by exactly one stage or survives (as
// itself or as chunks), and stage counts chain.
TEST(RunProperty, Conservation) {
    pipeline::RunContext ctx;
    ctx.config.chunk_max_words = 200;
    const auto& input = corpus();
    const auto r = pipeline::run(StagePlan::defaults(), ctx, input);

    std::multiset<std::string> dropped;
    for (const auto& e : r.events) {
        if (e["decision"] == "Drop") dropped.insert(e["id"].get<std::string>());
    }
    std::set<std::string> survivors;
    for (const auto& d : r.docs) survivors.insert(parent_of(d));
    std::set<std::string> dropped_parents;
    for (const auto& id : dropped) {
        const auto hash = id.find('#');
        dropped_parents.insert(hash == std::string::npos ? id : id.substr(0, hash));
    }
    for (const auto& id : ids_of(input)) {
        const bool alive = survivors.count(id) > 0;
        const bool gone = dropped_parents.count(id) > 0;
        ASSERT_TRUE(alive || gone) << id;
        if (!alive) {
            ASSERT_EQ(dropped.count(id), 1u) << id;
        }
    }

    const auto& st = r.report.stages;
    EXPECT_EQ(st.front().docs_in, input.size());
    EXPECT_EQ(st.front().words_in, stats::count_words(input));
    for (std::size_t i = 0; i < st.size(); ++i) {
        std::size_t drops = 0;
        for (const auto& [reason, n] : st[i].drop_reasons) drops += n;
        EXPECT_EQ(st[i].docs_in, st[i].docs_out + drops);
        if (st[i].stage != "chunk") {
            EXPECT_EQ(st[i].docs_out, st[i].docs_emitted);
        }
        if (i + 1 < st.size()) {
            EXPECT_EQ(st[i].docs_emitted, st[i + 1].docs_in);
            EXPECT_EQ(st[i].words_out, st[i + 1].words_in);
        }
    }
    EXPECT_EQ(st.back().docs_emitted, r.docs.size());
    EXPECT_EQ(st.back().words_out, stats::count_words(r.docs));
}

TEST(RunProperty, SplitRunEqualsFullRun) {
    pipeline::RunContext ctx;
    const auto full = pipeline::run(StagePlan::defaults(), ctx, corpus());
    const auto first = pipeline::run(StagePlan::from_names({"pii", "c4", "gopher"}, false), ctx, corpus());
    const auto second =
        pipeline::run(StagePlan::from_names({"langid", "sentence-dedup", "chunk", "minhash-dedup"}, false), ctx, first.docs);
    EXPECT_EQ(second.docs, full.docs);
    EXPECT_EQ(second.dedup_report, full.dedup_report);
}

TEST(RunProperty, SingleStageMatchesModuleCall) {
    pipeline::RunContext ctx;
    const auto r = pipeline::run(StagePlan::from_names({"c4"}, false), ctx, corpus());
    std::vector<Document> expected;
    for (const auto& d : corpus()) {
        auto out = quality::c4_line_filter(d, ctx.config);
        if (!out.outcome.is_drop()) expected.push_back(std::move(out.doc));
    }
    sort_by_id(expected);
    EXPECT_EQ(r.docs, expected);
}

TEST(RunProperty, WorkerCountInvariant) {
    pipeline::RunContext one;
    pipeline::RunContext many;
    many.config.worker_count = 7;
    const auto a = pipeline::run(StagePlan::defaults(), one, corpus());
    const auto b = pipeline::run(StagePlan::defaults(), many, corpus());
    EXPECT_EQ(a.docs, b.docs);
    EXPECT_EQ(a.dedup_report, b.dedup_report);
    EXPECT_EQ(a.report, b.report);
    EXPECT_EQ(a.events, b.events);
}

TEST(Run, InvalidConfigRejectedBeforeWork) {
    pipeline::RunContext ctx;
    ctx.config.lsh_bands = 10;
    EXPECT_THROW(pipeline::run(StagePlan::defaults(), ctx, corpus()), ConfigError);
}

TEST(Run, StageFailureCarriesPartialResult) {
    pipeline::RunContext ctx;
    ctx.classifier = std::make_shared<langid::CallbackClassifier>(
        [](std::string_view) -> langid::LangPrediction { throw ModelError("model crashed"); });
    try {
        pipeline::run(StagePlan::defaults(), ctx, corpus());
        FAIL() << "expected StageFailure";
    } catch (const pipeline::StageFailure& f) {
        EXPECT_EQ(f.stage(), "langid");
        EXPECT_EQ(f.partial().report.stages.size(), 3u);
        EXPECT_FALSE(f.partial().docs.empty());
    }
}

TEST(Files, RunWritesAllArtifacts) {
    fixtures::TempDir dir("pipe");
    write_jsonl(corpus(), dir / "in.jsonl");
    fixtures::write_file(dir / "in.jsonl",
                         fixtures::read_file(dir / "in.jsonl") + "{broken\n");
    const pipeline::OutputPaths paths{dir / "out.jsonl", dir / "dedup.jsonl", dir / "funnel.json", dir / "log.jsonl",
                                      dir / "errors.jsonl"};
    const auto summary =
        pipeline::run_files(StagePlan::defaults(), pipeline::RunContext{}, {{dir / "in.jsonl", ""}}, paths);
    EXPECT_EQ(summary.input_errors, 1u);
    for (const auto& p : {paths.corpus, *paths.dedup_report, *paths.funnel_report, *paths.log, *paths.errors}) {
        EXPECT_TRUE(std::filesystem::exists(p)) << p;
        EXPECT_FALSE(std::filesystem::exists(p.string() + ".partial")) << p;
    }
    EXPECT_EQ(read_jsonl(paths.corpus).collect().size(), summary.docs_written);
    const auto funnel = stats::report_from_json(nlohmann::json::parse(fixtures::read_file(*paths.funnel_report)));
    EXPECT_EQ(funnel, summary.report);
}

TEST(Files, FailureLeavesOnlyPartialOutputs) {
    fixtures::TempDir dir("pipe");
    write_jsonl(corpus(), dir / "in.jsonl");
    pipeline::RunContext ctx;
    ctx.classifier = std::make_shared<langid::CallbackClassifier>(
        [](std::string_view) -> langid::LangPrediction { throw ModelError("model crashed"); });
    const pipeline::OutputPaths paths{dir / "out.jsonl", std::nullopt, dir / "funnel.json", std::nullopt, std::nullopt};
    EXPECT_THROW(pipeline::run_files(StagePlan::defaults(), ctx, {{dir / "in.jsonl", ""}}, paths),
                 pipeline::StageFailure);
    EXPECT_FALSE(std::filesystem::exists(paths.corpus));
    EXPECT_TRUE(std::filesystem::exists(dir / "out.jsonl.partial"));
    EXPECT_TRUE(std::filesystem::exists(dir / "funnel.json.partial"));
}

TEST(Files, DirectoryInputAndCrossFileDuplicates) {
    fixtures::TempDir dir("pipe");
    std::filesystem::create_directories(dir / "laws");
    fixtures::write_file(dir / "laws" / "a.txt", "Ова е првиот закон за јавните набавки во земјата.");
    fixtures::write_file(dir / "one.jsonl", "{\"id\":\"x\",\"text\":\"Прв запис со доволно зборови.\"}\n");
    fixtures::write_file(dir / "two.jsonl", "{\"id\":\"x\",\"text\":\"Втор запис со истиот клуч.\"}\n");
    ErrorSidecar sidecar;
    const auto docs = pipeline::read_inputs(
        {{dir / "laws", ""}, {dir / "one.jsonl", ""}, {dir / "two.jsonl", ""}}, sidecar);
    ASSERT_EQ(docs.size(), 2u);
    EXPECT_EQ(docs[0].id, "laws/a.txt");
    EXPECT_EQ(docs[0].source, "laws");
    EXPECT_EQ(docs[0].source_kind, SourceKind::Document);
    EXPECT_EQ(docs[1].text, "Прв запис со доволно зборови.");
    EXPECT_EQ(sidecar.entries().size(), 1u);
}

TEST(ConfigFile, ParsesSections) {
    const auto fc = load_config_string(R"(
[pipeline]
seed = 7
worker_count = 3
stages = ["pii", "c4"]

[quality]
min_line_words = 4
dup_line_frac_max = 0.3

[langid]
threshold = 0.8
model = "bundled"

[dedup]
permutations = 100
bands = 20
rows = 5

[chunk]
max_words = 1000

[pii]
email = "<EMAIL>"
)");
    EXPECT_EQ(fc.pipeline.seed, 7u);
    EXPECT_EQ(fc.pipeline.worker_count, 3u);
    EXPECT_EQ(*fc.stages, (std::vector<std::string>{"pii", "c4"}));
    EXPECT_EQ(fc.pipeline.min_line_words, 4u);
    EXPECT_EQ(fc.pipeline.dup_line_frac_max, 0.3);
    EXPECT_DOUBLE_EQ(fc.pipeline.langid_threshold, 0.8);
    EXPECT_EQ(fc.langid_model, "bundled");
    EXPECT_EQ(fc.pipeline.lsh_bands, 20u);
    EXPECT_EQ(fc.pipeline.chunk_max_words, 1000u);
    ASSERT_TRUE(fc.pii_rules);
    const auto r = pii::scrub(fixtures::make_doc("d", "a@b.mk и 10.0.0.1"), *fc.pii_rules);
    EXPECT_EQ(r.doc.text, "<EMAIL> и 10.0.0.1");
}

TEST(ConfigFile, DefaultsWhenEmpty) {
    const auto fc = load_config_string("");
    EXPECT_EQ(fc.pipeline, PipelineConfig{});
    EXPECT_FALSE(fc.stages);
    EXPECT_FALSE(fc.pii_rules);
}

TEST(ConfigFile, Errors) {
    EXPECT_THROW(load_config_string("[pipeline\nseed = 1"), ConfigError);
    EXPECT_THROW(load_config_string("[pipeline]\nseed = \"seven\""), ConfigError);
    EXPECT_THROW(load_config_string("[pipeline]\nworker_count = -2"), ConfigError);
    EXPECT_THROW(load_config_string("[pii]\nfax = \"[FAX]\""), ConfigError);
    EXPECT_THROW(validate_config(load_config_string("[dedup]\nbands = 10\nrows = 10").pipeline), ConfigError);
    EXPECT_THROW(load_config_file("/nonexistent/corpus_forge.toml"), ConfigError);
}

TEST(ConfigFile, WorkersFromEnvironment) {
    {
        ScopedEnv env(kWorkersEnv, "6");
        EXPECT_EQ(workers_from_env(), 6u);
    }
    {
        ScopedEnv env(kWorkersEnv, nullptr);
        EXPECT_FALSE(workers_from_env());
    }
    {
        ScopedEnv env(kWorkersEnv, "zero");
        EXPECT_THROW(workers_from_env(), ConfigError);
    }
}
