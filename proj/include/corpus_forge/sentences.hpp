#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "corpus_forge/unicode.hpp"

namespace corpus_forge::sentences {

// Lowercased tokens (without the final period) that never end a sentence.
inline constexpr std::array<std::string_view, 40> kAbbreviations{
    "д-р", "др", "проф", "доц", "акад", "м-р", "мр", "г-дин", "г-ѓа", "г-ца", "инж", "бр", "ул", "стр",
    "т.е", "т.н", "с.р", "год", "в", "ср", "сл", "мил", "илј", "св", "ген", "кап", "арх",
    "dr", "mr", "mrs", "ms", "prof", "st", "no", "vs", "e.g", "i.e", "etc", "fig", "approx"};

struct Span {
    std::size_t begin;
    std::size_t end;

    friend bool operator==(const Span&, const Span&) = default;
};

namespace detail {

constexpr bool is_terminal(char32_t c) { return c == U'.' || c == U'!' || c == U'?' || c == U'…'; }
constexpr bool is_closer(char32_t c) {
    return c == U'"' || c == U'»' || c == U')' || c == U'”' || c == U'“' || c == U'’' || c == U'\'' || c == U']';
}

inline bool is_abbreviation(std::string_view token) {
    const std::string lower = text::to_lower(token);
    if (std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) != kAbbreviations.end()) return true;
    // Single-letter initials ("А. Петров").
    return text::count_code_points(token) == 1 && text::is_letter(text::decode_at(token, 0).value);
}

}  // namespace detail

// Sentence spans. Gaps between spans (and before the first / after the
// last) are whitespace only, so text[0, spans[i+1].begin) chunks
// reconstruct the input exactly.
inline std::vector<Span> split_spans(std::string_view s) {
    std::vector<Span> spans;
    std::size_t i = 0;
    std::size_t begin = std::string_view::npos;
    std::size_t word_start = 0;
    while (i < s.size()) {
        const auto cp = text::decode_at(s, i);
        if (text::is_space(cp.value)) {
            i += cp.size;
            continue;
        }
        if (begin == std::string_view::npos) begin = i;

        // Walk one whitespace-delimited token.
        word_start = i;
        std::size_t j = i;
        std::size_t last_terminal_end = std::string_view::npos;
        std::size_t token_end = i;
        while (j < s.size()) {
            const auto c = text::decode_at(s, j);
            if (text::is_space(c.value)) break;
            j += c.size;
            token_end = j;
        }
        // Token ends a sentence if it ends with terminal marks, optionally
        // followed by closers.
        std::size_t k = token_end;
        std::size_t closers_start = token_end;
        while (k > word_start) {
            std::size_t start = k - 1;
            while (start > word_start && (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80) --start;
            const auto c = text::decode_at(s, start);
            if (!detail::is_closer(c.value)) break;
            k = start;
            closers_start = start;
        }
        std::size_t marks_start = closers_start;
        while (marks_start > word_start) {
            std::size_t start = marks_start - 1;
            while (start > word_start && (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80) --start;
            const auto c = text::decode_at(s, start);
            if (!detail::is_terminal(c.value)) break;
            marks_start = start;
        }
        if (marks_start < closers_start) last_terminal_end = token_end;

        bool ends = last_terminal_end != std::string_view::npos;
        if (ends && closers_start == token_end && marks_start + 1 == closers_start && s[marks_start] == '.') {
            // Plain single period: check the abbreviation list.
            const std::string_view stem = s.substr(word_start, marks_start - word_start);
            if (!stem.empty() && detail::is_abbreviation(stem)) ends = false;
        }
        if (ends) {
            spans.push_back({begin, token_end});
            begin = std::string_view::npos;
        }
        i = token_end;
    }
    if (begin != std::string_view::npos) {
        const auto tail = text::trim_right(s.substr(begin));
        spans.push_back({begin, begin + tail.size()});
    }
    return spans;
}

inline std::vector<std::string> split_sentences(std::string_view s) {
    std::vector<std::string> out;
    for (const auto& sp : split_spans(s)) out.emplace_back(s.substr(sp.begin, sp.end - sp.begin));
    return out;
}

// Sentence plus trailing separator. Piece 0 also owns any leading
// whitespace, so concatenating all pieces yields `s`.
inline std::vector<std::string_view> split_pieces(std::string_view s) {
    const auto spans = split_spans(s);
    std::vector<std::string_view> pieces;
    pieces.reserve(spans.size());
    for (std::size_t i = 0; i < spans.size(); ++i) {
        const std::size_t b = i == 0 ? 0 : spans[i].begin;
        const std::size_t e = i + 1 < spans.size() ? spans[i + 1].begin : s.size();
        pieces.push_back(s.substr(b, e - b));
    }
    return pieces;
}

}  // namespace corpus_forge::sentences
