#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "corpus_forge/config.hpp"
#include "corpus_forge/document.hpp"
#include "corpus_forge/error.hpp"
#include "corpus_forge/hashing.hpp"
#include "corpus_forge/langid_bundled.hpp"
#include "corpus_forge/process.hpp"
#include "corpus_forge/unicode.hpp"

namespace corpus_forge::langid {

struct LangPrediction {
    std::string language;
    double confidence = 0.0;

    friend bool operator==(const LangPrediction&, const LangPrediction&) = default;
};

class LanguageClassifier {
public:
    virtual ~LanguageClassifier() = default;
    virtual LangPrediction predict(std::string_view text) const = 0;
};

struct NgramRange {
    std::size_t min = 1;
    std::size_t max = 4;
};

struct TrainingSample {
    std::string text;
    std::string language;
};

namespace detail {

// Counts character n-grams of letter runs, each padded with one space on
// both sides. Non-letters act as word breaks.
template <typename Fn>
void for_each_ngram(std::string_view s, NgramRange range, Fn&& fn) {
    std::vector<char32_t> word;
    std::string gram;
    auto flush = [&] {
        if (word.empty()) return;
        std::vector<char32_t> padded;
        padded.reserve(word.size() + 2);
        padded.push_back(U' ');
        padded.insert(padded.end(), word.begin(), word.end());
        padded.push_back(U' ');
        for (std::size_t n = range.min; n <= range.max; ++n) {
            if (padded.size() < n) break;
            for (std::size_t i = 0; i + n <= padded.size(); ++i) {
                if (n == 1 && padded[i] == U' ') continue;
                gram.clear();
                for (std::size_t k = 0; k < n; ++k) text::append_utf8(gram, padded[i + k]);
                fn(std::string_view(gram));
            }
        }
        word.clear();
    };
    std::size_t i = 0;
    while (i < s.size()) {
        const auto cp = text::decode_at(s, i);
        i += cp.size;
        if (text::is_letter(cp.value)) {
            word.push_back(text::to_lower(cp.value));
        } else {
            flush();
        }
    }
    flush();
}

// Top-k grams by count, ties broken by byte order.
inline std::vector<std::string> rank_grams(const std::unordered_map<std::string, std::uint64_t>& counts,
                                           std::size_t top_k) {
    std::vector<std::pair<std::string, std::uint64_t>> items(counts.begin(), counts.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (items.size() > top_k) items.resize(top_k);
    std::vector<std::string> out;
    out.reserve(items.size());
    for (auto& [g, c] : items) out.push_back(std::move(g));
    return out;
}

inline void write_u32(std::ostream& out, std::uint32_t v) {
    const char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                       static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
    out.write(b, 4);
}

inline std::uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw ModelError("truncated language model");
    return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
           (std::uint32_t(b[3]) << 24);
}

inline void write_str(std::ostream& out, std::string_view s) {
    write_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_str(std::istream& in, std::uint32_t max_len = 1u << 16) {
    const std::uint32_t n = read_u32(in);
    if (n > max_len) throw ModelError("corrupt language model (string length)");
    std::string s(n, '\0');
    if (n > 0 && !in.read(s.data(), n)) throw ModelError("truncated language model");
    return s;
}

}  // namespace detail

// Rank-order character n-gram profiles with out-of-place distance.
class NgramProfileClassifier final : public LanguageClassifier {
public:
    static constexpr std::uint32_t kFormatVersion = 1;
    static constexpr char kMagic[4] = {'C', 'F', 'L', 'P'};
    // A relative margin of 0.04 maps to confidence 1 - 1/e.
    static constexpr double kMarginScale = 0.04;

    struct Profile {
        std::string language;
        std::vector<std::string> grams;  // rank order
    };

    static NgramProfileClassifier train(const std::vector<TrainingSample>& samples, NgramRange range = {},
                                        std::size_t top_k = 3000) {
        if (range.min < 1 || range.max < range.min) throw ModelError("invalid n-gram range");
        if (top_k < 1) throw ModelError("top_k must be >= 1");
        std::map<std::string, std::unordered_map<std::string, std::uint64_t>> counts;
        for (const auto& s : samples) {
            if (s.language.empty()) throw ModelError("training sample without language code");
            if (text::is_blank(s.text)) continue;
            auto& c = counts[s.language];
            detail::for_each_ngram(s.text, range, [&c](std::string_view g) { ++c[std::string(g)]; });
        }
        std::erase_if(counts, [](const auto& kv) { return kv.second.empty(); });
        if (counts.size() < 2) {
            throw ModelError("language-ID training needs at least 2 languages with non-empty samples");
        }
        std::vector<Profile> profiles;
        for (const auto& [lang, c] : counts) profiles.push_back({lang, detail::rank_grams(c, top_k)});
        return NgramProfileClassifier(std::move(profiles), range, top_k);
    }

    LangPrediction predict(std::string_view text_in) const override {
        const std::string_view text = text_in.substr(0, text::prefix_bytes(text_in, max_chars_));
        std::unordered_map<std::string, std::uint64_t> counts;
        detail::for_each_ngram(text, range_, [&counts](std::string_view g) { ++counts[std::string(g)]; });
        if (counts.empty()) return {"und", 0.0};
        const auto doc = detail::rank_grams(counts, top_k_);

        std::vector<std::uint64_t> hashes;
        hashes.reserve(doc.size());
        for (const auto& g : doc) hashes.push_back(hashing::murmur64(g));

        const double max_total = static_cast<double>(doc.size()) * static_cast<double>(top_k_);
        double best = -1.0;
        double second = -1.0;
        const std::string* best_lang = nullptr;
        for (std::size_t l = 0; l < profiles_.size(); ++l) {
            const auto& ranks = ranks_[l];
            std::uint64_t distance = 0;
            for (std::size_t r = 0; r < hashes.size(); ++r) {
                const auto it = ranks.find(hashes[r]);
                if (it == ranks.end()) {
                    distance += top_k_;
                } else {
                    distance += it->second > r ? it->second - r : r - it->second;
                }
            }
            const double similarity = 1.0 - static_cast<double>(distance) / max_total;
            if (similarity > best) {
                second = best;
                best = similarity;
                best_lang = &profiles_[l].language;
            } else if (similarity > second) {
                second = similarity;
            }
        }
        if (best <= 0.0) return {*best_lang, 0.0};
        // Relative margin over the runner-up, squashed to [0,1).
        const double margin = (best - std::max(second, 0.0)) / best;
        return {*best_lang, std::clamp(1.0 - std::exp(-margin / kMarginScale), 0.0, 1.0)};
    }

    std::vector<std::string> languages() const {
        std::vector<std::string> out;
        for (const auto& p : profiles_) out.push_back(p.language);
        return out;
    }

    const std::vector<Profile>& profiles() const noexcept { return profiles_; }
    NgramRange range() const noexcept { return range_; }
    std::size_t top_k() const noexcept { return top_k_; }

    // Little-endian binary: magic "CFLP", u32 version, u32 n_min, u32 n_max,
    // u32 top_k, u32 language count, then per language a length-prefixed
    // code and a u32 gram count followed by length-prefixed grams in rank order.
    void save(std::ostream& out) const {
        out.write(kMagic, 4);
        detail::write_u32(out, kFormatVersion);
        detail::write_u32(out, static_cast<std::uint32_t>(range_.min));
        detail::write_u32(out, static_cast<std::uint32_t>(range_.max));
        detail::write_u32(out, static_cast<std::uint32_t>(top_k_));
        detail::write_u32(out, static_cast<std::uint32_t>(profiles_.size()));
        for (const auto& p : profiles_) {
            detail::write_str(out, p.language);
            detail::write_u32(out, static_cast<std::uint32_t>(p.grams.size()));
            for (const auto& g : p.grams) detail::write_str(out, g);
        }
        if (!out) throw IoError("failed writing language model");
    }

    static NgramProfileClassifier load(std::istream& in) {
        char magic[4];
        if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) {
            throw ModelError("not a language profile model (bad magic)");
        }
        const std::uint32_t version = detail::read_u32(in);
        if (version != kFormatVersion) {
            throw ModelError("unsupported language model version " + std::to_string(version));
        }
        NgramRange range{detail::read_u32(in), detail::read_u32(in)};
        const std::uint32_t top_k = detail::read_u32(in);
        const std::uint32_t langs = detail::read_u32(in);
        if (range.min < 1 || range.max < range.min || top_k < 1 || langs < 2 || langs > 10000) {
            throw ModelError("corrupt language model header");
        }
        std::vector<Profile> profiles;
        for (std::uint32_t l = 0; l < langs; ++l) {
            Profile p;
            p.language = detail::read_str(in);
            const std::uint32_t n = detail::read_u32(in);
            if (n > top_k) throw ModelError("corrupt language model (gram count)");
            p.grams.reserve(n);
            for (std::uint32_t g = 0; g < n; ++g) p.grams.push_back(detail::read_str(in));
            profiles.push_back(std::move(p));
        }
        return NgramProfileClassifier(std::move(profiles), range, top_k);
    }

private:
    NgramProfileClassifier(std::vector<Profile> profiles, NgramRange range, std::size_t top_k)
        : profiles_(std::move(profiles)), range_(range), top_k_(top_k) {
        std::sort(profiles_.begin(), profiles_.end(),
                  [](const Profile& a, const Profile& b) { return a.language < b.language; });
        ranks_.resize(profiles_.size());
        for (std::size_t l = 0; l < profiles_.size(); ++l) {
            for (std::size_t r = 0; r < profiles_[l].grams.size(); ++r) {
                ranks_[l].emplace(hashing::murmur64(profiles_[l].grams[r]), r);
            }
        }
    }

    std::vector<Profile> profiles_;
    std::vector<std::unordered_map<std::uint64_t, std::size_t>> ranks_;
    NgramRange range_;
    std::size_t top_k_;
    std::size_t max_chars_ = 4096;
};

inline std::vector<TrainingSample> bundled_samples() {
    std::vector<TrainingSample> out;
    for (const auto& [lang, text] : bundled::kSamples) out.push_back({std::string(text), std::string(lang)});
    return out;
}

// Reference classifier trained on the embedded seed texts.
inline const NgramProfileClassifier& bundled_classifier() {
    static const NgramProfileClassifier clf = NgramProfileClassifier::train(bundled_samples());
    return clf;
}

// Adapter over any in-process predictor.
class CallbackClassifier final : public LanguageClassifier {
public:
    explicit CallbackClassifier(std::function<LangPrediction(std::string_view)> fn) : fn_(std::move(fn)) {}
    LangPrediction predict(std::string_view text) const override { return fn_(text); }

private:
    std::function<LangPrediction(std::string_view)> fn_;
};

// Adapter for an external model running as a child process with a line
// protocol: one input line per document (newlines flattened to spaces),
// one output line "<label> <probability>" per input. This is the shape of
// `fasttext predict-prob model.bin - 1`; a "__label__" prefix is stripped.
class ProcessClassifier final : public LanguageClassifier {
public:
    explicit ProcessClassifier(const std::string& command) : process_(command) {}

    LangPrediction predict(std::string_view text_in) const override {
        std::string line;
        const auto text = text_in.substr(0, text::prefix_bytes(text_in, 4096));
        line.reserve(text.size());
        for (const char c : text) line.push_back(c == '\n' || c == '\r' || c == '\t' ? ' ' : c);
        std::string reply;
        try {
            reply = process_.request(line);
        } catch (const IoError& e) {
            throw ModelError(std::string("external language-ID process: ") + e.what());
        }
        if (reply.empty()) throw ModelError("external language-ID process returned no prediction");
        return parse_reply(reply);
    }

    static LangPrediction parse_reply(std::string_view reply) {
        std::istringstream in{std::string(reply)};
        std::string label;
        double prob = 0.0;
        if (!(in >> label >> prob)) throw ModelError("unparseable language-ID reply: " + std::string(reply));
        constexpr std::string_view prefix = "__label__";
        if (label.starts_with(prefix)) label.erase(0, prefix.size());
        return {label, std::clamp(prob, 0.0, 1.0)};
    }

private:
    LineProcess process_;
};

// Pure decision: keep iff the target language wins with confidence strictly
// above the threshold.
inline FilterOutcome gate_decision(const LangPrediction& pred, const PipelineConfig& config) {
    if (pred.language == config.langid_target && pred.confidence > config.langid_threshold) {
        return FilterOutcome::keep();
    }
    return FilterOutcome::drop(Reason::LangIdBelowThreshold,
                               "lang=" + pred.language + " confidence=" + std::to_string(pred.confidence));
}

inline FilterOutcome gate(Document& doc, const LanguageClassifier& clf, const PipelineConfig& config) {
    const std::string_view text = std::string_view(doc.text).substr(0, text::prefix_bytes(doc.text, config.langid_max_chars));
    const auto pred = clf.predict(text);
    doc.lang_confidence = pred.confidence;
    return gate_decision(pred, config);
}

}  // namespace corpus_forge::langid
