#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "corpus_forge/document.hpp"
#include "corpus_forge/error.hpp"
#include "corpus_forge/process.hpp"
#include "corpus_forge/unicode.hpp"

namespace corpus_forge::bench {

// Rare brackets that machine translation tends to leave alone.
inline constexpr std::string_view kPlaceholder = "⟦X⟧";

struct McqItem {
    std::string id;
    std::string stem;
    std::vector<std::string> choices;
    std::size_t answer_index = 0;

    friend bool operator==(const McqItem&, const McqItem&) = default;
};

inline void validate_item(const McqItem& item) {
    if (item.choices.empty()) throw FormatError("item '" + item.id + "' has no choices");
    if (item.answer_index >= item.choices.size()) {
        throw FormatError("item '" + item.id + "' answer_index " + std::to_string(item.answer_index) +
                          " out of range for " + std::to_string(item.choices.size()) + " choices");
    }
}

struct TemplatedItem {
    std::string text;
    std::string placeholder = std::string(kPlaceholder);
    bool appended = true;  // false when the placeholder filled a marked "___" slot

    friend bool operator==(const TemplatedItem&, const TemplatedItem&) = default;
};

inline std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return 0;
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string_view::npos; pos = haystack.find(needle, pos + needle.size())) {
        ++n;
    }
    return n;
}

namespace detail {

struct Slot {
    std::size_t begin;
    std::size_t end;
};

// Whitespace-delimited tokens made only of underscores.
inline std::vector<Slot> find_slots(std::string_view s) {
    std::vector<Slot> slots;
    text::for_each_word(s, [&](std::string_view w) {
        if (w.find_first_not_of('_') == std::string_view::npos) {
            const auto begin = static_cast<std::size_t>(w.data() - s.data());
            slots.push_back({begin, begin + w.size()});
        }
    });
    return slots;
}

}  // namespace detail

// Appends " <placeholder>" to the stem (just the placeholder for an empty
// stem), or substitutes it for a single marked "___" slot.
inline TemplatedItem make_template(const McqItem& item, std::string_view placeholder = kPlaceholder) {
    if (placeholder.empty()) throw ConfigError("placeholder must be non-empty");
    if (item.stem.find(placeholder) != std::string::npos) {
        throw FormatError("stem of item '" + item.id + "' already contains the placeholder");
    }
    TemplatedItem t;
    t.placeholder = std::string(placeholder);
    const auto slots = detail::find_slots(item.stem);
    if (slots.size() > 1) throw FormatError("stem of item '" + item.id + "' has more than one blank slot");
    if (slots.size() == 1) {
        t.text = item.stem.substr(0, slots[0].begin) + t.placeholder + item.stem.substr(slots[0].end);
        t.appended = false;
        return t;
    }
    t.text = item.stem.empty() ? t.placeholder : item.stem + " " + t.placeholder;
    return t;
}

namespace detail {

struct Match {
    std::size_t begin;
    std::size_t end;
};

// Occurrences of `placeholder` allowing whitespace between its code points.
inline std::vector<Match> tolerant_find(std::string_view s, std::string_view placeholder) {
    std::vector<char32_t> want;
    for (std::size_t i = 0; i < placeholder.size();) {
        const auto cp = text::decode_at(placeholder, i);
        want.push_back(cp.value);
        i += cp.size;
    }
    std::vector<Match> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const auto first = text::decode_at(s, i);
        if (first.value != want[0]) {
            i += first.size;
            continue;
        }
        std::size_t p = i + first.size;
        bool ok = true;
        for (std::size_t k = 1; k < want.size() && ok; ++k) {
            for (;;) {
                if (p >= s.size()) {
                    ok = false;
                    break;
                }
                const auto cp = text::decode_at(s, p);
                if (cp.value == want[k]) {
                    p += cp.size;
                    break;
                }
                if (!text::is_space(cp.value)) {
                    ok = false;
                    break;
                }
                p += cp.size;
            }
        }
        if (ok) {
            out.push_back({i, p});
            i = p;
        } else {
            i += first.size;
        }
    }
    return out;
}

}  // namespace detail

enum class TranslationStatus { Ok, Recovered, PlaceholderLost };

struct TranslationResult {
    TemplatedItem item;
    TranslationStatus status = TranslationStatus::Ok;
    FilterOutcome outcome = FilterOutcome::keep();
    std::string raw;  // translator output before any repair
};

using Translator = std::function<std::string(std::string_view)>;

inline std::string identity_translator(std::string_view s) { return std::string(s); }

// External translator over a line protocol. Backslashes and newlines in the
// request are escaped as \\ and \n; the reply is unescaped the same way.
class ProcessTranslator {
public:
    explicit ProcessTranslator(const std::string& command) : process_(std::make_shared<LineProcess>(command)) {}

    std::string operator()(std::string_view s) const { return unescape_line(process_->request(escape_line(s))); }

    static std::string escape_line(std::string_view s) {
        std::string out;
        out.reserve(s.size());
        for (const char c : s) {
            if (c == '\\') out += "\\\\";
            else if (c == '\n') out += "\\n";
            else out += c;
        }
        return out;
    }

    static std::string unescape_line(std::string_view s) {
        std::string out;
        out.reserve(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '\\' && i + 1 < s.size() && (s[i + 1] == '\\' || s[i + 1] == 'n')) {
                out += s[i + 1] == 'n' ? '\n' : '\\';
                ++i;
            } else {
                out += s[i];
            }
        }
        return out;
    }

private:
    std::shared_ptr<LineProcess> process_;
};

// Runs the translator and checks the placeholder survived exactly once. A
// single whitespace-mangled copy is repaired (Recovered); anything else is
// PlaceholderLost and belongs in the review queue.
inline TranslationResult translate_template(const TemplatedItem& t, const Translator& translator) {
    TranslationResult r;
    r.raw = translator(t.text);
    r.item = t;
    if (count_occurrences(r.raw, t.placeholder) == 1) {
        r.item.text = r.raw;
        return r;
    }
    const auto matches = detail::tolerant_find(r.raw, t.placeholder);
    if (matches.size() == 1) {
        r.item.text = r.raw.substr(0, matches[0].begin) + t.placeholder + r.raw.substr(matches[0].end);
        r.status = TranslationStatus::Recovered;
        r.outcome = FilterOutcome::transformed(Reason::PlaceholderRecovered,
                                               "matched '" + r.raw.substr(matches[0].begin, matches[0].end - matches[0].begin) + "'");
        return r;
    }
    r.item.text = r.raw;
    r.status = TranslationStatus::PlaceholderLost;
    r.outcome = FilterOutcome::drop(Reason::PlaceholderLost,
                                    "placeholder occurrences=" + std::to_string(matches.size()));
    return r;
}

// Removes the placeholder and one adjacent space (the preceding one when
// present, otherwise the following one).
inline std::string strip_placeholder(const TemplatedItem& t) {
    const std::string& s = t.text;
    if (count_occurrences(s, t.placeholder) != 1) {
        throw FormatError("template must contain the placeholder exactly once");
    }
    std::size_t b = s.find(t.placeholder);
    std::size_t e = b + t.placeholder.size();
    if (b > 0 && s[b - 1] == ' ') {
        --b;
    } else if (e < s.size() && s[e] == ' ') {
        ++e;
    }
    return s.substr(0, b) + s.substr(e);
}

// One candidate per choice: stem + " " + choice, order preserved. An empty
// stem yields the bare choices.
inline std::vector<std::string> expand_choices(std::string_view stem, const std::vector<std::string>& choices) {
    std::vector<std::string> out;
    out.reserve(choices.size());
    for (const auto& c : choices) out.push_back(stem.empty() ? c : std::string(stem) + " " + c);
    return out;
}

// Slot templates: the choice takes the placeholder's place.
inline std::vector<std::string> fill_choices(const TemplatedItem& t, const std::vector<std::string>& choices) {
    const auto pos = t.text.find(t.placeholder);
    if (pos == std::string::npos) throw FormatError("template has no placeholder");
    std::vector<std::string> out;
    out.reserve(choices.size());
    for (const auto& c : choices) {
        out.push_back(t.text.substr(0, pos) + c + t.text.substr(pos + t.placeholder.size()));
    }
    return out;
}

struct AdaptedItem {
    McqItem item;                     // translated stem (placeholder removed) and choices
    std::vector<std::string> candidates;
    TranslationStatus status = TranslationStatus::Ok;
};

struct ReviewEntry {
    std::string id;
    std::string template_text;
    std::string translated;
    std::string reason;
};

struct AdaptResult {
    std::optional<AdaptedItem> adapted;
    std::optional<ReviewEntry> review;
};

// Whole workflow for one item: template, translate, verify, strip, and
// translate each choice on its own. answer_index is carried through as-is.
inline AdaptResult adapt_item(const McqItem& item, const Translator& translator,
                              std::string_view placeholder = kPlaceholder) {
    validate_item(item);
    const TemplatedItem t = make_template(item, placeholder);
    const TranslationResult tr = translate_template(t, translator);
    if (tr.status == TranslationStatus::PlaceholderLost) {
        return {std::nullopt, ReviewEntry{item.id, t.text, tr.raw, std::string(to_string(Reason::PlaceholderLost))}};
    }
    AdaptedItem a;
    a.status = tr.status;
    a.item.id = item.id;
    a.item.answer_index = item.answer_index;
    a.item.stem = strip_placeholder(tr.item);
    for (const auto& c : item.choices) a.item.choices.push_back(translator(c));
    a.candidates = tr.item.appended ? expand_choices(a.item.stem, a.item.choices) : fill_choices(tr.item, a.item.choices);
    return {std::move(a), std::nullopt};
}

// --- JSON {"id","stem","choices","answer_index"} ----------------------------

inline McqItem item_from_json(const nlohmann::json& j) {
    McqItem item;
    try {
        item.id = j.at("id").get<std::string>();
        item.stem = text::normalize_nfc(j.at("stem").get<std::string>());
        for (const auto& c : j.at("choices")) item.choices.push_back(text::normalize_nfc(c.get<std::string>()));
        item.answer_index = j.at("answer_index").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed MCQ item: ") + e.what());
    }
    validate_item(item);
    return item;
}

inline nlohmann::ordered_json to_json(const McqItem& item) {
    nlohmann::ordered_json j;
    j["id"] = item.id;
    j["stem"] = item.stem;
    j["choices"] = item.choices;
    j["answer_index"] = item.answer_index;
    return j;
}

inline nlohmann::ordered_json to_json(const AdaptedItem& a) {
    auto j = to_json(a.item);
    j["candidates"] = a.candidates;
    if (a.status == TranslationStatus::Recovered) j["placeholder_recovered"] = true;
    return j;
}

inline nlohmann::ordered_json to_json(const ReviewEntry& r) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["template"] = r.template_text;
    j["translated"] = r.translated;
    j["reason"] = r.reason;
    return j;
}

}  // namespace corpus_forge::bench
