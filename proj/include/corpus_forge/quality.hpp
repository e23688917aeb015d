#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpus_forge/config.hpp"
#include "corpus_forge/document.hpp"
#include "corpus_forge/unicode.hpp"

namespace corpus_forge::quality {

// Sentence-final marks plus closing quote/bracket characters. A closer may
// trail a terminal mark ("Да." » / ?") and also counts on its own.
inline constexpr std::array<char32_t, 9> kTerminalChars{U'.', U'!', U'?', U'…', U'"', U'»', U')', U'”', U'“'};
inline constexpr std::array<char32_t, 6> kBulletChars{U'•', U'‣', U'▪', U'-', U'–', U'*'};

struct LineStats {
    std::string_view line;
    std::size_t word_count = 0;
    bool ends_terminal = false;
    bool starts_bullet = false;
    bool ends_ellipsis = false;
};

struct DocRatios {
    double bullet_line_ratio = 0.0;
    double ellipsis_line_ratio = 0.0;
    std::size_t line_count = 0;
};

namespace detail {

inline char32_t last_code_point(std::string_view s) {
    std::size_t start = s.size() - 1;
    while (start > 0 && (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80) --start;
    return text::decode_at(s, start).value;
}

template <std::size_t N>
constexpr bool contains(const std::array<char32_t, N>& set, char32_t c) {
    return std::find(set.begin(), set.end(), c) != set.end();
}

}  // namespace detail

inline LineStats line_stats(std::string_view line) {
    LineStats st;
    st.line = line;
    st.word_count = text::count_words(line);
    const auto body = text::trim(line);
    if (body.empty()) return st;
    st.ends_terminal = detail::contains(kTerminalChars, detail::last_code_point(body));
    st.starts_bullet = detail::contains(kBulletChars, text::decode_at(body, 0).value);
    st.ends_ellipsis = body.ends_with("…") || body.ends_with("...");
    return st;
}

// Splits on '\n'. A trailing newline does not produce an extra empty line.
inline std::vector<std::string_view> split_lines(std::string_view s) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < s.size()) {
        const auto nl = s.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.push_back(s.substr(start));
            break;
        }
        lines.push_back(s.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

// Ratios over non-blank lines; zero lines means both ratios are 0.
inline DocRatios doc_ratios(std::string_view s) {
    DocRatios r;
    std::size_t bullets = 0;
    std::size_t ellipses = 0;
    for (const auto line : split_lines(s)) {
        if (text::is_blank(line)) continue;
        const auto st = line_stats(line);
        ++r.line_count;
        bullets += st.starts_bullet;
        ellipses += st.ends_ellipsis;
    }
    if (r.line_count > 0) {
        r.bullet_line_ratio = static_cast<double>(bullets) / static_cast<double>(r.line_count);
        r.ellipsis_line_ratio = static_cast<double>(ellipses) / static_cast<double>(r.line_count);
    }
    return r;
}

struct C4Result {
    Document doc;
    FilterOutcome outcome;
};

// Keeps lines with at least min_line_words words that end in terminal
// punctuation. Surviving lines are re-joined with '\n'.
inline C4Result c4_line_filter(Document doc, const PipelineConfig& config) {
    std::string out;
    out.reserve(doc.text.size());
    std::size_t too_few = 0;
    std::size_t no_terminal = 0;
    std::size_t kept = 0;
    for (const auto line : split_lines(doc.text)) {
        const auto st = line_stats(line);
        if (st.word_count < config.min_line_words) {
            ++too_few;
            continue;
        }
        if (!st.ends_terminal) {
            ++no_terminal;
            continue;
        }
        if (kept++ > 0) out.push_back('\n');
        out.append(line);
    }
    const bool trailing_newline = !doc.text.empty() && doc.text.back() == '\n';
    if (kept == 0) {
        return {std::move(doc), FilterOutcome::drop(Reason::EmptyAfterC4,
                                                    "too_few_words=" + std::to_string(too_few) +
                                                        ",no_terminal=" + std::to_string(no_terminal))};
    }
    if (too_few + no_terminal == 0) {
        return {std::move(doc), FilterOutcome::keep()};
    }
    if (trailing_newline) out.push_back('\n');
    doc.text = std::move(out);
    const Reason dominant = too_few >= no_terminal ? Reason::TooFewWordsLine : Reason::NoTerminalPunct;
    return {std::move(doc),
            FilterOutcome::transformed(dominant, "too_few_words=" + std::to_string(too_few) +
                                                     ",no_terminal=" + std::to_string(no_terminal))};
}

// Fraction of non-blank lines that repeat an earlier line verbatim.
inline double duplicate_line_fraction(std::string_view s) {
    std::unordered_map<std::string_view, std::size_t> seen;
    std::size_t lines = 0;
    std::size_t dups = 0;
    for (const auto line : split_lines(s)) {
        const auto body = text::trim(line);
        if (body.empty()) continue;
        ++lines;
        if (seen[body]++ > 0) ++dups;
    }
    return lines == 0 ? 0.0 : static_cast<double>(dups) / static_cast<double>(lines);
}

// Characters covered by the most frequent word bigram over all word characters.
inline double top_2gram_fraction(std::string_view s) {
    const auto words = text::split_words(s);
    if (words.size() < 2) return 0.0;
    std::size_t total_chars = 0;
    for (const auto w : words) total_chars += text::count_code_points(w);
    std::map<std::pair<std::string_view, std::string_view>, std::size_t> counts;
    for (std::size_t i = 0; i + 1 < words.size(); ++i) ++counts[{words[i], words[i + 1]}];
    std::size_t best = 0;
    std::size_t best_chars = 0;
    for (const auto& [gram, n] : counts) {
        const std::size_t chars = text::count_code_points(gram.first) + text::count_code_points(gram.second);
        if (n * chars > best * best_chars) {
            best = n;
            best_chars = chars;
        }
    }
    return total_chars == 0 ? 0.0 : static_cast<double>(best * best_chars) / static_cast<double>(total_chars);
}

// Bullet rule first, then ellipsis, then the optional extras. Thresholds
// are strict: a ratio equal to the maximum passes.
inline FilterOutcome gopher_doc_filter(const Document& doc, const PipelineConfig& config) {
    const auto r = doc_ratios(doc.text);
    if (r.bullet_line_ratio > config.bullet_ratio_max) {
        return FilterOutcome::drop(Reason::BulletRatio, "bullet_line_ratio=" + std::to_string(r.bullet_line_ratio));
    }
    if (r.ellipsis_line_ratio > config.ellipsis_ratio_max) {
        return FilterOutcome::drop(Reason::EllipsisRatio,
                                   "ellipsis_line_ratio=" + std::to_string(r.ellipsis_line_ratio));
    }
    if (config.dup_line_frac_max) {
        const double f = duplicate_line_fraction(doc.text);
        if (f > *config.dup_line_frac_max) {
            return FilterOutcome::drop(Reason::DuplicateLineFraction, "dup_line_frac=" + std::to_string(f));
        }
    }
    if (config.top_2gram_frac_max) {
        const double f = top_2gram_fraction(doc.text);
        if (f > *config.top_2gram_frac_max) {
            return FilterOutcome::drop(Reason::TopNgramFraction, "top_2gram_frac=" + std::to_string(f));
        }
    }
    return FilterOutcome::keep();
}

}  // namespace corpus_forge::quality
