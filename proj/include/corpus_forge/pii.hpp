#pragma once

#include <arpa/inet.h>

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corpus_forge/document.hpp"
#include "corpus_forge/error.hpp"

namespace corpus_forge::pii {

enum class PatternKind { Email, IPv6, IPv4, Phone };

inline std::string_view to_string(PatternKind k) {
    switch (k) {
        case PatternKind::Email: return "email";
        case PatternKind::IPv6: return "ipv6";
        case PatternKind::IPv4: return "ipv4";
        case PatternKind::Phone: return "phone";
    }
    return "email";
}

inline PatternKind parse_pattern_kind(std::string_view name) {
    if (name == "email") return PatternKind::Email;
    if (name == "ipv6") return PatternKind::IPv6;
    if (name == "ipv4") return PatternKind::IPv4;
    if (name == "phone") return PatternKind::Phone;
    throw ConfigError("unknown PII pattern kind '" + std::string(name) + "'");
}

struct Rule {
    PatternKind kind;
    std::string replacement;
};

struct Span {
    std::size_t begin;
    std::size_t end;
};

namespace detail {

constexpr bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }
constexpr bool is_alpha(char c) noexcept { return (c | 0x20) >= 'a' && (c | 0x20) <= 'z'; }
constexpr bool is_alnum(char c) noexcept { return is_digit(c) || is_alpha(c); }
constexpr bool is_hex(char c) noexcept { return is_digit(c) || ((c | 0x20) >= 'a' && (c | 0x20) <= 'f'); }
constexpr bool is_email_local(char c) noexcept {
    return is_alnum(c) || c == '.' || c == '_' || c == '%' || c == '+' || c == '-';
}
constexpr bool is_email_domain(char c) noexcept { return is_alnum(c) || c == '.' || c == '-'; }

inline bool valid_email_domain(std::string_view d) {
    if (d.empty()) return false;
    const auto last_dot = d.rfind('.');
    if (last_dot == std::string_view::npos) return false;
    const auto tld = d.substr(last_dot + 1);
    if (tld.size() < 2) return false;
    for (char c : tld) {
        if (!is_alpha(c)) return false;
    }
    std::size_t label_start = 0;
    for (std::size_t i = 0; i <= d.size(); ++i) {
        if (i == d.size() || d[i] == '.') {
            if (i == label_start) return false;
            label_start = i + 1;
        }
    }
    return true;
}

inline std::vector<Span> find_emails(std::string_view s) {
    std::vector<Span> out;
    std::size_t floor = 0;
    for (std::size_t at = s.find('@'); at != std::string_view::npos; at = s.find('@', at + 1)) {
        if (at < floor) continue;
        std::size_t b = at;
        while (b > floor && is_email_local(s[b - 1])) --b;
        while (b < at && s[b] == '.') ++b;
        if (b == at) continue;
        std::size_t e = at + 1;
        while (e < s.size() && is_email_domain(s[e])) ++e;
        while (e > at + 1 && (s[e - 1] == '.' || s[e - 1] == '-')) --e;
        if (!valid_email_domain(s.substr(at + 1, e - at - 1))) continue;
        out.push_back({b, e});
        floor = e;
    }
    return out;
}

inline std::vector<Span> find_ipv4(std::string_view s) {
    std::vector<Span> out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!is_digit(s[i]) || (i > 0 && (is_alnum(s[i - 1]) || s[i - 1] == '.'))) {
            ++i;
            continue;
        }
        std::size_t p = i;
        bool ok = true;
        for (int octet = 0; octet < 4 && ok; ++octet) {
            if (octet > 0) {
                if (p < s.size() && s[p] == '.') {
                    ++p;
                } else {
                    ok = false;
                    break;
                }
            }
            int value = 0;
            std::size_t digits = 0;
            while (p < s.size() && is_digit(s[p]) && digits < 4) {
                value = value * 10 + (s[p] - '0');
                ++p;
                ++digits;
            }
            if (digits == 0 || digits > 3 || value > 255) ok = false;
        }
        if (ok && p < s.size()) {
            if (is_alnum(s[p])) ok = false;
            if (s[p] == '.' && p + 1 < s.size() && is_digit(s[p + 1])) ok = false;
        }
        if (ok) {
            out.push_back({i, p});
            i = p;
        } else {
            while (i < s.size() && (is_digit(s[i]) || s[i] == '.')) ++i;
        }
    }
    return out;
}

inline std::vector<Span> find_ipv6(std::string_view s) {
    std::vector<Span> out;
    std::size_t i = 0;
    auto run_char = [](char c) { return is_hex(c) || c == ':' || c == '.'; };
    while (i < s.size()) {
        if (!(is_hex(s[i]) || s[i] == ':') ||
            (i > 0 && (is_alnum(s[i - 1]) || s[i - 1] == ':' || s[i - 1] == '.' || s[i - 1] == '_'))) {
            ++i;
            continue;
        }
        std::size_t e = i;
        std::size_t colons = 0;
        while (e < s.size() && run_char(s[e])) {
            if (s[e] == ':') ++colons;
            ++e;
        }
        const std::size_t run_end = e;
        while (e > i && s[e - 1] == '.') --e;
        const bool bounded = run_end >= s.size() || !(is_alnum(s[run_end]) || s[run_end] == '_');
        if (colons >= 2 && bounded && e - i <= 45) {
            const std::string candidate(s.substr(i, e - i));
            in6_addr addr{};
            if (inet_pton(AF_INET6, candidate.c_str(), &addr) == 1) {
                out.push_back({i, e});
            }
        }
        i = run_end;
    }
    return out;
}

constexpr bool is_phone_sep(char c) noexcept { return c == ' ' || c == '-' || c == '/' || c == '(' || c == ')'; }

// International "+D..." or local "0D..." numbers of 8-12 digits in groups
// joined by short separator runs. The longest group boundary within the
// digit budget wins.
inline std::vector<Span> find_phones(std::string_view s) {
    std::vector<Span> out;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t start = i;
        std::size_t p = i;
        if (s[p] == '(') ++p;
        const bool intl = p + 1 < s.size() && s[p] == '+' && is_digit(s[p + 1]);
        const bool local = p + 1 < s.size() && s[p] == '0' && is_digit(s[p + 1]);
        bool boundary = true;
        if (start > 0) {
            const char prev = s[start - 1];
            if (is_alnum(prev) || prev == '+' || prev == ',' || prev == '-' || prev == '/' || prev == '_') {
                boundary = false;
            }
            if (prev == '.' && start > 1 && is_digit(s[start - 2])) boundary = false;
        }
        if (!(intl || local) || !boundary) {
            ++i;
            continue;
        }
        if (intl) ++p;

        std::size_t digits = 0;
        std::size_t best_end = 0;
        for (;;) {
            while (p < s.size() && is_digit(s[p])) {
                ++digits;
                ++p;
            }
            if (digits > 12) break;
            if (digits >= 8) best_end = p;
            std::size_t q = p;
            std::size_t seps = 0;
            while (q < s.size() && is_phone_sep(s[q]) && seps < 2) {
                ++q;
                ++seps;
            }
            if (seps == 0 || q >= s.size() || !is_digit(s[q])) break;
            p = q;
        }
        if (best_end != 0 && (best_end >= s.size() || !is_alpha(s[best_end]))) {
            out.push_back({start, best_end});
            i = best_end;
        } else {
            i = start + 1;
        }
    }
    return out;
}

}  // namespace detail

inline std::vector<Span> find_matches(PatternKind kind, std::string_view text) {
    switch (kind) {
        case PatternKind::Email: return detail::find_emails(text);
        case PatternKind::IPv6: return detail::find_ipv6(text);
        case PatternKind::IPv4: return detail::find_ipv4(text);
        case PatternKind::Phone: return detail::find_phones(text);
    }
    return {};
}

class PiiRuleSet {
public:
    // Email, IPv6, IPv4, Phone: most specific first.
    static PiiRuleSet defaults() {
        return PiiRuleSet({{PatternKind::Email, "[EMAIL]"},
                           {PatternKind::IPv6, "[IP]"},
                           {PatternKind::IPv4, "[IP]"},
                           {PatternKind::Phone, "[PHONE]"}});
    }

    explicit PiiRuleSet(std::vector<Rule> rules) : rules_(std::move(rules)) {
        for (const auto& r : rules_) {
            if (r.replacement.find_first_of("0123456789@:+") != std::string::npos) {
                throw ConfigError("PII replacement '" + r.replacement + "' contains pattern characters");
            }
            for (const auto& other : rules_) {
                if (!find_matches(other.kind, r.replacement).empty()) {
                    throw ConfigError("PII replacement '" + r.replacement + "' matches pattern " +
                                      std::string(to_string(other.kind)));
                }
            }
        }
    }

    const std::vector<Rule>& rules() const noexcept { return rules_; }

private:
    std::vector<Rule> rules_;
};

struct ScrubResult {
    Document doc;
    FilterOutcome outcome;
};

// Replaces every maximal PII span with its token. Bytes outside the
// matched spans are copied through untouched. A replacement can expose a new
// match boundary (a number glued to an address), so passes repeat until
// nothing matches; tokens hold no pattern characters, so this terminates.
inline ScrubResult scrub(Document doc, const PiiRuleSet& rules) {
    std::map<PatternKind, std::size_t> counts;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& rule : rules.rules()) {
            const auto spans = find_matches(rule.kind, doc.text);
            if (spans.empty()) continue;
            std::string out;
            out.reserve(doc.text.size());
            std::size_t pos = 0;
            for (const auto& sp : spans) {
                out.append(doc.text, pos, sp.begin - pos);
                out += rule.replacement;
                pos = sp.end;
            }
            out.append(doc.text, pos);
            doc.text = std::move(out);
            counts[rule.kind] += spans.size();
            changed = true;
        }
    }
    if (counts.empty()) return {std::move(doc), FilterOutcome::keep()};
    std::string detail;
    for (const auto& rule : rules.rules()) {
        const auto it = counts.find(rule.kind);
        if (it == counts.end()) continue;
        if (!detail.empty()) detail += ',';
        detail += std::string(to_string(rule.kind)) + "=" + std::to_string(it->second);
        counts.erase(it);
    }
    return {std::move(doc), FilterOutcome::transformed(Reason::PiiScrubbed, std::move(detail))};
}

}  // namespace corpus_forge::pii
