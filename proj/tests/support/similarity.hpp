#pragma once

#include <cstddef>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "corpus_forge/rng.hpp"
#include "corpus_forge/unicode.hpp"

namespace fixtures {

// Random lowercase Cyrillic word; long enough that collisions are negligible.
inline std::string random_word(corpus_forge::SplitMix64& rng) {
    static const std::vector<std::string> letters{"а", "б", "в", "г", "д", "ѓ", "е", "ж", "з", "ѕ", "и",
                                                  "ј", "к", "л", "љ", "м", "н", "њ", "о", "п", "р", "с",
                                                  "т", "ќ", "у", "ф", "х", "ц", "ч", "џ", "ш"};
    std::string w;
    const std::size_t n = 4 + rng.uniform(6);
    for (std::size_t i = 0; i < n; ++i) w += letters[rng.uniform(letters.size())];
    return w;
}

inline std::vector<std::string> random_words(corpus_forge::SplitMix64& rng, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(random_word(rng));
    return out;
}

inline std::string join(const std::vector<std::string>& words) {
    std::string s;
    for (const auto& w : words) {
        if (!s.empty()) s += ' ';
        s += w;
    }
    return s;
}

// Shingle sets built from plain whitespace splitting.
inline std::set<std::string> shingle_set(const std::string& t, std::size_t k) {
    std::istringstream in(corpus_forge::text::to_lower(t));
    std::vector<std::string> w;
    for (std::string x; in >> x;) w.push_back(x);
    std::set<std::string> out;
    if (w.size() < k) {
        out.insert(join(w));
        return out;
    }
    for (std::size_t i = 0; i + k <= w.size(); ++i) {
        out.insert(join(std::vector<std::string>(w.begin() + static_cast<std::ptrdiff_t>(i),
                                                 w.begin() + static_cast<std::ptrdiff_t>(i + k))));
    }
    return out;
}

inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::size_t inter = 0;
    for (const auto& x : a) inter += b.count(x);
    const std::size_t uni = a.size() + b.size() - inter;
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

// Replaces `changed` evenly spaced words with fresh ones.
inline std::vector<std::string> perturb(std::vector<std::string> words, std::size_t changed,
                                        corpus_forge::SplitMix64& rng) {
    for (std::size_t k = 0; k < changed; ++k) words[(k * words.size()) / changed] = random_word(rng);
    return words;
}

}  // namespace fixtures
