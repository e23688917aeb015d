#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "corpus_forge/document.hpp"
#include "corpus_forge/error.hpp"
#include "corpus_forge/rng.hpp"
#include "corpus_forge/unicode.hpp"

namespace corpus_forge::sft {

// Default system prompt (Macedonian) used during instruction tuning.
inline constexpr std::string_view kDefaultSystemPrompt =
    "Ти си виртуелен асистент кој помага на корисници на македонски јазик. Одговарај на прашања на "
    "јасен, разбирлив и професионален начин. Користи правилна граматика и обиди се одговорите да бидат "
    "што е можно покорисни и релевантни.";

// Sources refined through model-assisted post-editing plus synthetic data.
inline const std::set<std::string>& default_favored_sources() {
    static const std::set<std::string> s{"alpaca", "databricks-dolly", "dolly", "open-platypus", "platypus",
                                         "synthetic"};
    return s;
}

enum class Role { System, User, Assistant };

inline std::string_view to_string(Role r) {
    switch (r) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
    }
    return "user";
}

inline Role parse_role(std::string_view s) {
    if (s == "system") return Role::System;
    if (s == "user") return Role::User;
    if (s == "assistant") return Role::Assistant;
    throw FormatError("unknown role '" + std::string(s) + "'");
}

struct Turn {
    Role role;
    std::string content;

    friend bool operator==(const Turn&, const Turn&) = default;
};

struct SftRecord {
    std::string id;
    std::string source;
    bool favored = false;
    std::vector<Turn> turns;
    std::size_t token_estimate = 0;

    friend bool operator==(const SftRecord&, const SftRecord&) = default;
};

// Optional leading system turn, then user/assistant alternating starting
// with user; at least one of each.
inline void validate_turns(const std::vector<Turn>& turns) {
    std::size_t i = 0;
    if (!turns.empty() && turns[0].role == Role::System) i = 1;
    std::size_t users = 0;
    std::size_t assistants = 0;
    for (std::size_t k = i; k < turns.size(); ++k) {
        const Role expected = (k - i) % 2 == 0 ? Role::User : Role::Assistant;
        if (turns[k].role != expected) {
            throw FormatError("malformed turn order at turn " + std::to_string(k) + ": expected " +
                              std::string(to_string(expected)) + ", got " + std::string(to_string(turns[k].role)));
        }
        (expected == Role::User ? users : assistants) += 1;
    }
    if (users == 0 || assistants == 0) throw FormatError("record needs at least one user and one assistant turn");
}

// --- token counting --------------------------------------------------------

using TokenCounter = std::function<std::size_t(std::string_view)>;

// ceil(whitespace words x 1.4), in integer arithmetic.
inline std::size_t estimate_tokens(std::string_view s) {
    const std::size_t words = text::count_words(s);
    return (words * 14 + 9) / 10;
}

inline TokenCounter default_token_counter() { return estimate_tokens; }

inline std::size_t count_tokens(const std::vector<Turn>& turns, const TokenCounter& counter) {
    std::size_t n = 0;
    for (const auto& t : turns) n += counter(t.content);
    return n;
}

inline SftRecord with_estimate(SftRecord r, const TokenCounter& counter) {
    r.token_estimate = count_tokens(r.turns, counter);
    return r;
}

// --- JSON ------------------------------------------------------------------

inline SftRecord record_from_json(const nlohmann::json& j, const std::set<std::string>& favored_sources) {
    if (!j.is_object()) throw FormatError("SFT record is not an object");
    SftRecord r;
    try {
        r.id = j.value("id", std::string());
        r.source = j.value("source", std::string());
        const nlohmann::json* turns = nullptr;
        if (j.contains("turns")) turns = &j.at("turns");
        else if (j.contains("messages")) turns = &j.at("messages");
        if (turns == nullptr || !turns->is_array()) throw FormatError("SFT record needs a 'turns' array");
        for (const auto& t : *turns) {
            r.turns.push_back({parse_role(t.at("role").get<std::string>()), t.at("content").get<std::string>()});
        }
        if (j.contains("favored")) {
            r.favored = j.at("favored").get<bool>();
        } else {
            r.favored = favored_sources.contains(text::to_lower(r.source));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed SFT record: ") + e.what());
    }
    for (auto& t : r.turns) t.content = text::normalize_nfc(t.content);
    validate_turns(r.turns);
    return r;
}

inline nlohmann::ordered_json to_json(const SftRecord& r) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["source"] = r.source;
    j["favored"] = r.favored;
    j["turns"] = nlohmann::ordered_json::array();
    for (const auto& t : r.turns) {
        nlohmann::ordered_json tj;
        tj["role"] = std::string(to_string(t.role));
        tj["content"] = t.content;
        j["turns"].push_back(std::move(tj));
    }
    j["token_estimate"] = r.token_estimate;
    return j;
}

// --- length profile --------------------------------------------------------

struct LengthProfile {
    std::vector<std::size_t> lengths;  // ascending
    std::size_t cutoff = 0;
    double coverage_at_cutoff = 0.0;

    // Empirical CDF at `c`: fraction of records with length <= c.
    double coverage(std::size_t c) const {
        if (lengths.empty()) return 0.0;
        const auto it = std::upper_bound(lengths.begin(), lengths.end(), c);
        return static_cast<double>(it - lengths.begin()) / static_cast<double>(lengths.size());
    }

    // Smallest length L with coverage(L) >= q.
    std::size_t quantile(double q) const {
        if (lengths.empty()) return 0;
        q = std::clamp(q, 0.0, 1.0);
        const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(lengths.size())));
        return lengths[std::max<std::size_t>(rank, 1) - 1];
    }
};

inline LengthProfile length_profile(const std::vector<SftRecord>& records, const TokenCounter& counter,
                                    std::size_t cutoff) {
    if (cutoff < 1) throw ConfigError("cutoff must be >= 1");
    LengthProfile p;
    p.cutoff = cutoff;
    p.lengths.reserve(records.size());
    for (const auto& r : records) p.lengths.push_back(count_tokens(r.turns, counter));
    std::sort(p.lengths.begin(), p.lengths.end());
    p.coverage_at_cutoff = p.coverage(cutoff);
    return p;
}

// --- cutoff ----------------------------------------------------------------

struct CutoffResult {
    std::optional<SftRecord> record;
    FilterOutcome outcome;
};

// Records within budget pass unchanged. Longer ones keep the longest prefix
// of complete user/assistant exchanges (plus any system turn) that fits;
// if not even the first exchange fits, the record is dropped.
inline CutoffResult apply_cutoff(SftRecord record, std::size_t max_tokens, const TokenCounter& counter) {
    if (max_tokens < 1) throw ConfigError("max_tokens must be >= 1");
    const std::size_t total = count_tokens(record.turns, counter);
    if (total <= max_tokens) {
        record.token_estimate = total;
        return {std::move(record), FilterOutcome::keep()};
    }
    std::size_t i = 0;
    std::size_t used = 0;
    if (!record.turns.empty() && record.turns[0].role == Role::System) {
        used += counter(record.turns[0].content);
        i = 1;
    }
    std::size_t keep_until = 0;
    std::size_t kept_tokens = 0;
    for (; i + 1 < record.turns.size(); i += 2) {
        const std::size_t exchange = counter(record.turns[i].content) + counter(record.turns[i + 1].content);
        if (used + exchange > max_tokens) break;
        used += exchange;
        keep_until = i + 2;
        kept_tokens = used;
    }
    if (keep_until == 0) {
        return {std::nullopt, FilterOutcome::drop(Reason::ExchangeExceedsBudget,
                                                  "tokens=" + std::to_string(total) +
                                                      " max_tokens=" + std::to_string(max_tokens))};
    }
    const std::size_t dropped_turns = record.turns.size() - keep_until;
    record.turns.resize(keep_until);
    record.token_estimate = kept_tokens;
    return {std::move(record), FilterOutcome::transformed(Reason::Truncated,
                                                          "dropped_turns=" + std::to_string(dropped_turns))};
}

// --- sampling --------------------------------------------------------------

struct MixRatio {
    std::uint32_t favored = 2;
    std::uint32_t other = 1;
};

inline MixRatio parse_ratio(std::string_view s) {
    const auto colon = s.find(':');
    if (colon == std::string_view::npos) throw ConfigError("ratio must look like A:B, got '" + std::string(s) + "'");
    auto parse = [&](std::string_view part) -> std::uint32_t {
        if (part.empty() || part.size() > 6) throw ConfigError("bad ratio component '" + std::string(part) + "'");
        std::uint32_t v = 0;
        for (const char c : part) {
            if (c < '0' || c > '9') throw ConfigError("bad ratio component '" + std::string(part) + "'");
            v = v * 10 + static_cast<std::uint32_t>(c - '0');
        }
        return v;
    };
    MixRatio r{parse(s.substr(0, colon)), parse(s.substr(colon + 1))};
    if (r.favored + r.other == 0) throw ConfigError("ratio must not be 0:0");
    return r;
}

enum class MixMode { Records, Words };

struct MixOptions {
    MixRatio ratio;
    std::uint64_t seed = 42;
    std::size_t target_count = 0;
    MixMode mode = MixMode::Records;
};

struct MixResult {
    std::vector<SftRecord> records;
    std::size_t favored_draws = 0;
    std::size_t other_draws = 0;
    std::size_t favored_recycles = 0;  // times the favored pool was exhausted and reshuffled
    std::size_t other_recycles = 0;
    std::vector<std::string> log;
};

namespace detail {

// Uniform sampling without replacement via incremental Fisher-Yates;
// starts a fresh pass once exhausted.
class PoolCursor {
public:
    explicit PoolCursor(std::size_t n) : order_(n) {
        for (std::size_t i = 0; i < n; ++i) order_[i] = i;
    }

    std::size_t draw(SplitMix64& rng, bool& recycled) {
        recycled = false;
        if (pos_ == order_.size()) {
            pos_ = 0;
            recycled = true;
        }
        const std::size_t j = pos_ + static_cast<std::size_t>(rng.uniform(order_.size() - pos_));
        std::swap(order_[pos_], order_[j]);
        return order_[pos_++];
    }

private:
    std::vector<std::size_t> order_;
    std::size_t pos_ = 0;
};

inline double mean_words(const std::vector<SftRecord>& pool) {
    if (pool.empty()) return 1.0;
    std::size_t words = 0;
    for (const auto& r : pool) {
        for (const auto& t : r.turns) words += text::count_words(t.content);
    }
    return std::max(1.0, static_cast<double>(words) / static_cast<double>(pool.size()));
}

}  // namespace detail

// Each draw picks the favored pool with probability favored/(favored+other)
// (record mode) or the word-share-equivalent probability (word mode), then
// takes the next record of that pool's seeded shuffle.
inline MixResult sample_mix(const std::vector<SftRecord>& favored_pool, const std::vector<SftRecord>& other_pool,
                            const MixOptions& options) {
    if (options.ratio.favored > 0 && favored_pool.empty()) throw ConfigError("favored pool is empty");
    if (options.ratio.other > 0 && other_pool.empty()) throw ConfigError("translated pool is empty");

    double p_favored = static_cast<double>(options.ratio.favored) /
                       static_cast<double>(options.ratio.favored + options.ratio.other);
    if (options.mode == MixMode::Words && options.ratio.favored > 0 && options.ratio.other > 0) {
        const double wf = static_cast<double>(options.ratio.favored) / detail::mean_words(favored_pool);
        const double wo = static_cast<double>(options.ratio.other) / detail::mean_words(other_pool);
        p_favored = wf / (wf + wo);
    }

    SplitMix64 rng(options.seed);
    detail::PoolCursor fav(favored_pool.size());
    detail::PoolCursor oth(other_pool.size());
    MixResult out;
    out.records.reserve(options.target_count);
    for (std::size_t k = 0; k < options.target_count; ++k) {
        const bool pick_favored = rng.uniform01() < p_favored;
        bool recycled = false;
        if (pick_favored) {
            out.records.push_back(favored_pool[fav.draw(rng, recycled)]);
            ++out.favored_draws;
            if (recycled) {
                ++out.favored_recycles;
                out.log.push_back("favored pool exhausted at draw " + std::to_string(k) + "; recycling");
            }
        } else {
            out.records.push_back(other_pool[oth.draw(rng, recycled)]);
            ++out.other_draws;
            if (recycled) {
                ++out.other_recycles;
                out.log.push_back("translated pool exhausted at draw " + std::to_string(k) + "; recycling");
            }
        }
    }
    return out;
}

// Splits records into favored / translated pools by their flag.
inline MixResult sample_mix(const std::vector<std::vector<SftRecord>>& sources, const MixOptions& options) {
    std::vector<SftRecord> favored;
    std::vector<SftRecord> other;
    for (const auto& src : sources) {
        for (const auto& r : src) (r.favored ? favored : other).push_back(r);
    }
    return sample_mix(favored, other, options);
}

// --- chat formatting -------------------------------------------------------
//
// Template, one block per turn:
//
//   <|system|>\n{content}\n<|user|>\n{content}\n<|assistant|>\n{content}\n<|end|>\n
//
// Inside content, "\" is written as "\\" and "<|" as "\<|", so markers are
// unambiguous and parse_chat inverts format_chat exactly.

inline std::string escape_content(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\') {
            out += "\\\\";
        } else if (s[i] == '<' && i + 1 < s.size() && s[i + 1] == '|') {
            out += "\\<";
        } else {
            out += s[i];
        }
    }
    return out;
}

inline std::string unescape_content(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size() && (s[i + 1] == '\\' || s[i + 1] == '<')) {
            out += s[++i];
        } else {
            out += s[i];
        }
    }
    return out;
}

inline std::vector<Turn> ensure_system_turn(std::vector<Turn> turns, std::string_view system_prompt) {
    if (turns.empty() || turns.front().role != Role::System) {
        turns.insert(turns.begin(), Turn{Role::System, std::string(system_prompt)});
    }
    return turns;
}

inline std::string format_chat(const SftRecord& record, std::string_view system_prompt = kDefaultSystemPrompt) {
    validate_turns(record.turns);
    std::string out;
    for (const auto& t : ensure_system_turn(record.turns, system_prompt)) {
        out += "<|";
        out += to_string(t.role);
        out += "|>\n";
        out += escape_content(t.content);
        out += '\n';
    }
    out += "<|end|>\n";
    return out;
}

inline std::vector<Turn> parse_chat(std::string_view s) {
    std::vector<Turn> turns;
    std::size_t pos = 0;
    for (;;) {
        if (!s.substr(pos).starts_with("<|")) throw FormatError("expected role marker at offset " + std::to_string(pos));
        const auto close = s.find("|>\n", pos);
        if (close == std::string_view::npos) throw FormatError("unterminated role marker");
        const auto role = s.substr(pos + 2, close - pos - 2);
        pos = close + 3;
        if (role == "end") {
            if (pos != s.size()) throw FormatError("trailing data after end marker");
            break;
        }
        const auto next = s.find("\n<|", pos);
        if (next == std::string_view::npos) throw FormatError("missing end marker");
        turns.push_back({parse_role(role), unescape_content(s.substr(pos, next - pos))});
        pos = next + 1;
    }
    return turns;
}

// Hook for model-assisted post-editing. The default leaves records untouched.
class Refiner {
public:
    virtual ~Refiner() = default;
    virtual SftRecord refine(const SftRecord& record) const = 0;
};

class NoopRefiner final : public Refiner {
public:
    SftRecord refine(const SftRecord& record) const override { return record; }
};

}  // namespace corpus_forge::sft
