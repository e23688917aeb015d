#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/bytestream.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>

#include "corpus_forge/error.hpp"

namespace corpus_forge::text {

struct CodePoint {
    char32_t value;
    std::size_t size;
};

inline constexpr char32_t kReplacementChar = 0xFFFD;

// Decodes the code point starting at `pos`. Malformed sequences decode as
// U+FFFD with size 1 so callers can always make progress.
inline CodePoint decode_at(std::string_view s, std::size_t pos) noexcept {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) return {b0, 1};

    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2; cp = b0 & 0x1F; min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3; cp = b0 & 0x0F; min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4; cp = b0 & 0x07; min = 0x10000;
    } else {
        return {kReplacementChar, 1};
    }
    if (pos + len > s.size()) return {kReplacementChar, 1};
    for (std::size_t i = 1; i < len; ++i) {
        const auto b = static_cast<unsigned char>(s[pos + i]);
        if ((b & 0xC0) != 0x80) return {kReplacementChar, 1};
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        return {kReplacementChar, 1};
    }
    return {cp, len};
}

// Strict validation: rejects overlong forms, surrogates and truncated tails.
inline bool is_valid_utf8(std::string_view s) noexcept {
    std::size_t i = 0;
    while (i < s.size()) {
        if (static_cast<unsigned char>(s[i]) < 0x80) {
            ++i;
            continue;
        }
        const auto cp = decode_at(s, i);
        if (cp.value == kReplacementChar && cp.size == 1) return false;
        i += cp.size;
    }
    return true;
}

inline void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Unicode White_Space property.
constexpr bool is_space(char32_t c) noexcept {
    if (c < 0x80) return c == ' ' || (c >= 0x09 && c <= 0x0D);
    return c == 0x85 || c == 0xA0 || c == 0x1680 || (c >= 0x2000 && c <= 0x200A) ||
           c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000;
}

// Calls `fn(std::string_view)` for each maximal run of non-whitespace.
template <typename Fn>
void for_each_word(std::string_view s, Fn&& fn) {
    std::size_t i = 0;
    std::size_t start = std::string_view::npos;
    while (i < s.size()) {
        const auto b = static_cast<unsigned char>(s[i]);
        bool space;
        std::size_t step;
        if (b < 0x80) {
            space = b == ' ' || (b >= 0x09 && b <= 0x0D);
            step = 1;
        } else {
            const auto cp = decode_at(s, i);
            space = is_space(cp.value);
            step = cp.size;
        }
        if (space) {
            if (start != std::string_view::npos) {
                fn(s.substr(start, i - start));
                start = std::string_view::npos;
            }
        } else if (start == std::string_view::npos) {
            start = i;
        }
        i += step;
    }
    if (start != std::string_view::npos) fn(s.substr(start));
}

inline std::size_t count_words(std::string_view s) {
    std::size_t n = 0;
    for_each_word(s, [&n](std::string_view) { ++n; });
    return n;
}

inline std::vector<std::string_view> split_words(std::string_view s) {
    std::vector<std::string_view> words;
    for_each_word(s, [&words](std::string_view w) { words.push_back(w); });
    return words;
}

inline std::string_view trim_left(std::string_view s) noexcept {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto cp = decode_at(s, i);
        if (!is_space(cp.value)) break;
        i += cp.size;
    }
    return s.substr(i);
}

inline std::string_view trim_right(std::string_view s) noexcept {
    // Whitespace code points are at most 3 bytes; walk back over lead bytes.
    std::size_t end = s.size();
    while (end > 0) {
        std::size_t start = end - 1;
        while (start > 0 && (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80) --start;
        const auto cp = decode_at(s, start);
        if (start + cp.size != end || !is_space(cp.value)) break;
        end = start;
    }
    return s.substr(0, end);
}

inline std::string_view trim(std::string_view s) noexcept { return trim_right(trim_left(s)); }

inline bool is_blank(std::string_view s) noexcept { return trim_left(s).empty(); }

// NFC via ICU. Throws EncodingError on malformed UTF-8.
inline std::string normalize_nfc(std::string_view s) {
    if (!is_valid_utf8(s)) throw EncodingError("invalid UTF-8 sequence");
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw EncodingError("ICU NFC normalizer unavailable");
    const icu::StringPiece piece(s.data(), static_cast<int32_t>(s.size()));
    if (nfc->isNormalizedUTF8(piece, status) && U_SUCCESS(status)) return std::string(s);
    status = U_ZERO_ERROR;
    std::string out;
    out.reserve(s.size());
    icu::StringByteSink<std::string> sink(&out);
    nfc->normalizeUTF8(0, piece, sink, nullptr, status);
    if (U_FAILURE(status)) throw EncodingError(std::string("NFC normalization failed: ") + u_errorName(status));
    return out;
}

inline bool is_nfc(std::string_view s) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) return false;
    const bool ok = nfc->isNormalizedUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())), status);
    return U_SUCCESS(status) && ok;
}

inline char32_t to_lower(char32_t c) noexcept {
    if (c < 0x80) return (c >= 'A' && c <= 'Z') ? c + 32 : c;
    return static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
}

inline bool is_letter(char32_t c) noexcept {
    if (c < 0x80) return (c | 0x20) >= 'a' && (c | 0x20) <= 'z';
    return u_isalpha(static_cast<UChar32>(c)) != 0;
}

inline std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const auto cp = decode_at(s, i);
        append_utf8(out, to_lower(cp.value));
        i += cp.size;
    }
    return out;
}

// Lowercased, whitespace runs collapsed to a single ASCII space, trimmed.
inline std::string normalize_for_key(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for_each_word(s, [&out](std::string_view w) {
        if (!out.empty()) out.push_back(' ');
        std::size_t i = 0;
        while (i < w.size()) {
            const auto cp = decode_at(w, i);
            append_utf8(out, to_lower(cp.value));
            i += cp.size;
        }
    });
    return out;
}

inline std::size_t count_code_points(std::string_view s) noexcept {
    std::size_t n = 0;
    for (const char c : s) {
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
    }
    return n;
}

// Byte offset of the first `max_chars` code points.
inline std::size_t prefix_bytes(std::string_view s, std::size_t max_chars) noexcept {
    std::size_t chars = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
            if (chars == max_chars) return i;
            ++chars;
        }
    }
    return s.size();
}

}  // namespace corpus_forge::text
