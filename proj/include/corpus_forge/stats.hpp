#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "corpus_forge/document.hpp"
#include "corpus_forge/error.hpp"
#include "corpus_forge/stage.hpp"
#include "corpus_forge/unicode.hpp"

namespace corpus_forge::stats {

struct StageRecord {
    std::string stage;
    std::size_t docs_in = 0;
    std::size_t docs_out = 0;      // input documents that survived
    std::size_t docs_emitted = 0;  // documents written downstream (differs only when chunking)
    std::size_t words_in = 0;
    std::size_t words_out = 0;
    std::size_t transformed = 0;
    std::map<std::string, std::size_t> drop_reasons;

    std::size_t dropped() const noexcept { return docs_in - docs_out; }

    friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

struct SourceRecord {
    std::string source;
    std::size_t words = 0;
    double percentage = 0.0;

    friend bool operator==(const SourceRecord&, const SourceRecord&) = default;
};

struct FunnelReport {
    std::vector<StageRecord> stages;
    std::vector<SourceRecord> sources;        // after filtering
    std::vector<SourceRecord> sources_input;  // before filtering

    std::size_t total_dropped() const noexcept {
        std::size_t n = 0;
        for (const auto& s : stages) n += s.dropped();
        return n;
    }

    friend bool operator==(const FunnelReport&, const FunnelReport&) = default;
};

inline std::size_t count_words(const std::vector<Document>& docs) {
    std::size_t n = 0;
    for (const auto& d : docs) n += text::count_words(d.text);
    return n;
}

// Exact counts for one stage. `outcomes` holds one entry per input document.
inline StageRecord tally(const std::vector<Document>& before, const std::vector<Document>& after,
                         const std::vector<OutcomeRecord>& outcomes, std::string stage) {
    StageRecord r;
    r.stage = std::move(stage);
    r.docs_in = before.size();
    r.docs_emitted = after.size();
    r.words_in = count_words(before);
    r.words_out = count_words(after);
    std::size_t drops = 0;
    for (const auto& o : outcomes) {
        if (o.outcome.is_drop()) {
            ++r.drop_reasons[std::string(to_string(o.outcome.reason()))];
            ++drops;
        } else if (o.outcome.is_transformed()) {
            ++r.transformed;
        }
    }
    if (outcomes.size() != before.size()) {
        throw std::logic_error("stage '" + r.stage + "' reported " + std::to_string(outcomes.size()) +
                               " outcomes for " + std::to_string(before.size()) + " documents");
    }
    r.docs_out = r.docs_in - drops;
    return r;
}

// Word share per source, descending by words then by name.
inline std::vector<SourceRecord> source_distribution(const std::vector<Document>& docs) {
    std::map<std::string, std::size_t> words;
    for (const auto& d : docs) words[d.source] += text::count_words(d.text);
    std::size_t total = 0;
    for (const auto& [s, w] : words) total += w;
    std::vector<SourceRecord> out;
    for (const auto& [s, w] : words) {
        out.push_back({s, w, total == 0 ? 0.0 : 100.0 * static_cast<double>(w) / static_cast<double>(total)});
    }
    std::stable_sort(out.begin(), out.end(), [](const SourceRecord& a, const SourceRecord& b) {
        if (a.words != b.words) return a.words > b.words;
        return a.source < b.source;
    });
    return out;
}

inline std::string format_percentage(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", p);
    return buf;
}

// --- JSON ------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const SourceRecord& s) {
    nlohmann::ordered_json j;
    j["source"] = s.source;
    j["words"] = s.words;
    j["percentage"] = s.percentage;
    return j;
}

inline nlohmann::ordered_json to_json(const FunnelReport& report) {
    nlohmann::ordered_json j;
    j["stages"] = nlohmann::ordered_json::array();
    for (const auto& s : report.stages) {
        nlohmann::ordered_json st;
        st["stage"] = s.stage;
        st["docs_in"] = s.docs_in;
        st["docs_out"] = s.docs_out;
        st["docs_emitted"] = s.docs_emitted;
        st["words_in"] = s.words_in;
        st["words_out"] = s.words_out;
        st["transformed"] = s.transformed;
        st["drop_reasons"] = nlohmann::ordered_json::object();
        for (const auto& [reason, n] : s.drop_reasons) st["drop_reasons"][reason] = n;
        j["stages"].push_back(std::move(st));
    }
    j["sources"] = nlohmann::ordered_json::array();
    for (const auto& s : report.sources) j["sources"].push_back(to_json(s));
    j["sources_input"] = nlohmann::ordered_json::array();
    for (const auto& s : report.sources_input) j["sources_input"].push_back(to_json(s));
    j["total_dropped"] = report.total_dropped();
    return j;
}

inline FunnelReport report_from_json(const nlohmann::json& j) {
    FunnelReport r;
    try {
        for (const auto& st : j.at("stages")) {
            StageRecord s;
            s.stage = st.at("stage").get<std::string>();
            s.docs_in = st.at("docs_in").get<std::size_t>();
            s.docs_out = st.at("docs_out").get<std::size_t>();
            s.docs_emitted = st.at("docs_emitted").get<std::size_t>();
            s.words_in = st.at("words_in").get<std::size_t>();
            s.words_out = st.at("words_out").get<std::size_t>();
            s.transformed = st.at("transformed").get<std::size_t>();
            for (const auto& [reason, n] : st.at("drop_reasons").items()) s.drop_reasons[reason] = n.get<std::size_t>();
            r.stages.push_back(std::move(s));
        }
        auto sources = [](const nlohmann::json& arr) {
            std::vector<SourceRecord> out;
            for (const auto& s : arr) {
                out.push_back({s.at("source").get<std::string>(), s.at("words").get<std::size_t>(),
                               s.at("percentage").get<double>()});
            }
            return out;
        };
        r.sources = sources(j.at("sources"));
        if (j.contains("sources_input")) r.sources_input = sources(j.at("sources_input"));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed funnel report: ") + e.what());
    }
    return r;
}

// --- rendering -------------------------------------------------------------

enum class TableFormat { Markdown, Json, Csv };

inline TableFormat parse_table_format(std::string_view name) {
    if (name == "markdown" || name == "md") return TableFormat::Markdown;
    if (name == "json") return TableFormat::Json;
    if (name == "csv") return TableFormat::Csv;
    throw FormatError("unknown report format '" + std::string(name) + "' (expected markdown, json or csv)");
}

namespace detail {

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string md_cell(std::string_view s) {
    std::string out;
    for (const char c : s) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace detail

// Source | Words | Percentage, descending by words, with a Total row. The
// JSON form is the full report.
inline std::string render_table(const FunnelReport& report, TableFormat format) {
    std::size_t total = 0;
    for (const auto& s : report.sources) total += s.words;
    const std::string total_pct = format_percentage(total == 0 ? 0.0 : 100.0);
    std::string out;
    switch (format) {
        case TableFormat::Json:
            return to_json(report).dump(2) + "\n";
        case TableFormat::Csv:
            out = "Source,Words,Percentage\n";
            for (const auto& s : report.sources) {
                out += detail::csv_field(s.source) + "," + std::to_string(s.words) + "," +
                       format_percentage(s.percentage) + "\n";
            }
            out += "Total," + std::to_string(total) + "," + total_pct + "\n";
            return out;
        case TableFormat::Markdown:
            out = "| Source | Words | Percentage |\n|---|---:|---:|\n";
            for (const auto& s : report.sources) {
                out += "| " + detail::md_cell(s.source) + " | " + std::to_string(s.words) + " | " +
                       format_percentage(s.percentage) + " |\n";
            }
            out += "| **Total** | **" + std::to_string(total) + "** | **" + total_pct + "** |\n";
            return out;
    }
    throw FormatError("unknown report format");
}

inline std::string render_table(const FunnelReport& report, std::string_view format) {
    return render_table(report, parse_table_format(format));
}

// Per-stage funnel as a markdown table.
inline std::string render_funnel(const FunnelReport& report) {
    std::string out =
        "| Stage | Docs in | Docs out | Words in | Words out | Dropped | Drop reasons |\n"
        "|---|---:|---:|---:|---:|---:|---|\n";
    for (const auto& s : report.stages) {
        std::string reasons;
        for (const auto& [r, n] : s.drop_reasons) {
            if (!reasons.empty()) reasons += ", ";
            reasons += r + ": " + std::to_string(n);
        }
        out += "| " + s.stage + " | " + std::to_string(s.docs_in) + " | " + std::to_string(s.docs_out) + " | " +
               std::to_string(s.words_in) + " | " + std::to_string(s.words_out) + " | " +
               std::to_string(s.dropped()) + " | " + reasons + " |\n";
    }
    return out;
}

}  // namespace corpus_forge::stats
