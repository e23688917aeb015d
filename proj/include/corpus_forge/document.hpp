#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

#include "corpus_forge/error.hpp"

namespace corpus_forge {

enum class SourceKind { Web, Document, Wiki, Transcript };

inline constexpr std::array<std::pair<SourceKind, std::string_view>, 4> kSourceKindNames{{
    {SourceKind::Web, "web"},
    {SourceKind::Document, "document"},
    {SourceKind::Wiki, "wiki"},
    {SourceKind::Transcript, "transcript"},
}};

inline std::string_view to_string(SourceKind kind) {
    for (const auto& [k, name] : kSourceKindNames) {
        if (k == kind) return name;
    }
    return "web";
}

inline SourceKind parse_source_kind(std::string_view name) {
    for (const auto& [k, n] : kSourceKindNames) {
        if (n == name) return k;
    }
    throw FormatError("unknown source_kind '" + std::string(name) + "'");
}

// One corpus record. `text` is NFC-normalized once at ingest; every stage
// after that treats it as byte-stable.
struct Document {
    std::string id;
    std::string source;
    SourceKind source_kind = SourceKind::Web;
    std::string text;
    std::optional<double> lang_confidence;
    nlohmann::json meta = nlohmann::json::object();

    friend bool operator==(const Document&, const Document&) = default;
};

enum class Decision { Keep, Drop, Transformed };

// Closed set of machine-readable reason codes. Every drop maps to exactly one.
enum class Reason {
    None,
    PiiScrubbed,
    TooFewWordsLine,
    NoTerminalPunct,
    EmptyAfterC4,
    BulletRatio,
    EllipsisRatio,
    DuplicateLineFraction,
    TopNgramFraction,
    LangIdBelowThreshold,
    DuplicateSentence,
    NearDuplicateDoc,
    Chunked,
    Truncated,
    ExchangeExceedsBudget,
    PlaceholderLost,
    PlaceholderRecovered,
};

inline constexpr std::array<std::pair<Reason, std::string_view>, 17> kReasonNames{{
    {Reason::None, "None"},
    {Reason::PiiScrubbed, "PiiScrubbed"},
    {Reason::TooFewWordsLine, "TooFewWordsLine"},
    {Reason::NoTerminalPunct, "NoTerminalPunct"},
    {Reason::EmptyAfterC4, "EmptyAfterC4"},
    {Reason::BulletRatio, "BulletRatio"},
    {Reason::EllipsisRatio, "EllipsisRatio"},
    {Reason::DuplicateLineFraction, "DuplicateLineFraction"},
    {Reason::TopNgramFraction, "TopNgramFraction"},
    {Reason::LangIdBelowThreshold, "LangIdBelowThreshold"},
    {Reason::DuplicateSentence, "DuplicateSentence"},
    {Reason::NearDuplicateDoc, "NearDuplicateDoc"},
    {Reason::Chunked, "Chunked"},
    {Reason::Truncated, "Truncated"},
    {Reason::ExchangeExceedsBudget, "ExchangeExceedsBudget"},
    {Reason::PlaceholderLost, "PlaceholderLost"},
    {Reason::PlaceholderRecovered, "PlaceholderRecovered"},
}};

inline std::string_view to_string(Reason reason) {
    for (const auto& [r, name] : kReasonNames) {
        if (r == reason) return name;
    }
    return "None";
}

inline Reason parse_reason(std::string_view name) {
    for (const auto& [r, n] : kReasonNames) {
        if (n == name) return r;
    }
    throw FormatError("unknown reason code '" + std::string(name) + "'");
}

inline std::string_view to_string(Decision d) {
    switch (d) {
        case Decision::Keep: return "Keep";
        case Decision::Drop: return "Drop";
        case Decision::Transformed: return "Transformed";
    }
    return "Keep";
}

class FilterOutcome {
public:
    static FilterOutcome keep() { return FilterOutcome(Decision::Keep, Reason::None, {}); }

    static FilterOutcome drop(Reason reason, std::string detail = {}) {
        if (reason == Reason::None) throw std::logic_error("drop outcome requires a reason");
        return FilterOutcome(Decision::Drop, reason, std::move(detail));
    }

    static FilterOutcome transformed(Reason reason, std::string detail = {}) {
        return FilterOutcome(Decision::Transformed, reason, std::move(detail));
    }

    Decision decision() const noexcept { return decision_; }
    Reason reason() const noexcept { return reason_; }
    const std::string& detail() const noexcept { return detail_; }

    bool is_drop() const noexcept { return decision_ == Decision::Drop; }
    bool is_keep() const noexcept { return decision_ == Decision::Keep; }
    bool is_transformed() const noexcept { return decision_ == Decision::Transformed; }

    friend bool operator==(const FilterOutcome&, const FilterOutcome&) = default;

private:
    FilterOutcome(Decision d, Reason r, std::string detail)
        : decision_(d), reason_(r), detail_(std::move(detail)) {}

    Decision decision_;
    Reason reason_;
    std::string detail_;
};

// JSON mapping for the interchange schema:
// {"id", "source", "source_kind", "text", "meta"} plus optional "lang_confidence".
inline nlohmann::ordered_json to_json(const Document& doc) {
    nlohmann::ordered_json j;
    j["id"] = doc.id;
    j["source"] = doc.source;
    j["source_kind"] = std::string(to_string(doc.source_kind));
    j["text"] = doc.text;
    if (doc.lang_confidence) j["lang_confidence"] = *doc.lang_confidence;
    j["meta"] = doc.meta;
    return j;
}

inline Document document_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw FormatError("record is not a JSON object");
    Document doc;
    if (auto it = j.find("id"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) throw FormatError("field 'id' must be a string");
        doc.id = it->get<std::string>();
    }
    if (auto it = j.find("source"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) throw FormatError("field 'source' must be a string");
        doc.source = it->get<std::string>();
    }
    if (auto it = j.find("source_kind"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) throw FormatError("field 'source_kind' must be a string");
        doc.source_kind = parse_source_kind(it->get<std::string>());
    }
    auto text = j.find("text");
    if (text == j.end() || !text->is_string()) throw FormatError("field 'text' missing or not a string");
    doc.text = text->get<std::string>();
    if (auto it = j.find("lang_confidence"); it != j.end() && !it->is_null()) {
        if (!it->is_number()) throw FormatError("field 'lang_confidence' must be a number");
        const double c = it->get<double>();
        if (!(c >= 0.0 && c <= 1.0)) throw FormatError("field 'lang_confidence' outside [0,1]");
        doc.lang_confidence = c;
    }
    if (auto it = j.find("meta"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) throw FormatError("field 'meta' must be an object");
        doc.meta = *it;
    }
    return doc;
}

}  // namespace corpus_forge
