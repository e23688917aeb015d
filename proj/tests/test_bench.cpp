#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "corpus_forge/bench_templater.hpp"
#include "corpus_forge/rng.hpp"
#include "support/fixtures.hpp"

using namespace corpus_forge;
using bench::McqItem;
using bench::TranslationStatus;

namespace {

McqItem cold_blooded() {
    return {"q1", "Ладнокрвните животни често се", {"брзи", "големи", "без влакна", "бавни"}, 3};
}

// Replaces every occurrence of `from` with `to`.
bench::Translator replacing(std::string from, std::string to) {
    return [from, to](std::string_view s) {
        std::string out(s);
        for (auto pos = out.find(from); pos != std::string::npos; pos = out.find(from, pos + to.size())) {
            out.replace(pos, from.size(), to);
        }
        return out;
    };
}

}  // namespace

TEST(Template, AppendsPlaceholder) {
    const auto t = bench::make_template(cold_blooded());
    EXPECT_EQ(t.text, "Ладнокрвните животни често се ⟦X⟧");
    EXPECT_TRUE(t.appended);
    EXPECT_EQ(bench::count_occurrences(t.text, bench::kPlaceholder), 1u);
}

TEST(Template, EmptyStemIsPlaceholderAlone) {
    McqItem item{"q", "", {"а", "б"}, 0};
    EXPECT_EQ(bench::make_template(item).text, "⟦X⟧");
    const auto r = bench::adapt_item(item, bench::identity_translator);
    ASSERT_TRUE(r.adapted);
    EXPECT_EQ(r.adapted->item.stem, "");
    EXPECT_EQ(r.adapted->candidates, (std::vector<std::string>{"а", "б"}));
}

TEST(Template, StemWithPlaceholderRejected) {
    McqItem item{"q", "Веќе има ⟦X⟧ внатре", {"а"}, 0};
    EXPECT_THROW(bench::make_template(item), FormatError);
    EXPECT_THROW(bench::make_template(cold_blooded(), ""), ConfigError);
}

TEST(Template, SlotSubstitution) {
    McqItem item{"q", "Главниот град на ___ е Скопје.", {"Македонија", "Србија"}, 0};
    const auto t = bench::make_template(item);
    EXPECT_EQ(t.text, "Главниот град на ⟦X⟧ е Скопје.");
    EXPECT_FALSE(t.appended);
    const auto r = bench::adapt_item(item, bench::identity_translator);
    ASSERT_TRUE(r.adapted);
    EXPECT_EQ(r.adapted->candidates[0], "Главниот град на Македонија е Скопје.");
    EXPECT_EQ(r.adapted->item.stem, "Главниот град на е Скопје.");
    EXPECT_THROW(bench::make_template({"q", "___ и ___", {"а"}, 0}), FormatError);
}

TEST(Translate, IdentityKeepsPlaceholder) {
    const auto r = bench::translate_template(bench::make_template(cold_blooded()), bench::identity_translator);
    EXPECT_EQ(r.status, TranslationStatus::Ok);
    EXPECT_TRUE(r.outcome.is_keep());
}

TEST(Translate, SpacedPlaceholderRecovered) {
    const auto r = bench::translate_template(bench::make_template(cold_blooded()), replacing("⟦X⟧", "⟦ X ⟧"));
    EXPECT_EQ(r.status, TranslationStatus::Recovered);
    EXPECT_EQ(r.item.text, "Ладнокрвните животни често се ⟦X⟧");
    EXPECT_EQ(r.outcome.reason(), Reason::PlaceholderRecovered);
    EXPECT_EQ(r.raw, "Ладнокрвните животни често се ⟦ X ⟧");
}

TEST(Translate, DeletedPlaceholderLost) {
    const auto r = bench::translate_template(bench::make_template(cold_blooded()), replacing(" ⟦X⟧", ""));
    EXPECT_EQ(r.status, TranslationStatus::PlaceholderLost);
    EXPECT_TRUE(r.outcome.is_drop());
    EXPECT_EQ(r.outcome.reason(), Reason::PlaceholderLost);
}

TEST(Translate, DuplicatedPlaceholderLost) {
    const auto r = bench::translate_template(bench::make_template(cold_blooded()), replacing("⟦X⟧", "⟦X⟧ ⟦X⟧"));
    EXPECT_EQ(r.status, TranslationStatus::PlaceholderLost);
}

TEST(Strip, RemovesPlaceholderAndSpace) {
    EXPECT_EQ(bench::strip_placeholder({"Ладнокрвните животни често се ⟦X⟧"}), "Ладнокрвните животни често се");
    EXPECT_EQ(bench::strip_placeholder({"⟦X⟧ на почетокот"}), "на почетокот");
    EXPECT_EQ(bench::strip_placeholder({"⟦X⟧"}), "");
    EXPECT_THROW(bench::strip_placeholder({"нема ознака"}), FormatError);
}

TEST(Choices, Expand) {
    const auto c = cold_blooded();
    EXPECT_EQ(bench::expand_choices("Ладнокрвните животни често се", c.choices),
              (std::vector<std::string>{"Ладнокрвните животни често се брзи", "Ладнокрвните животни често се големи",
                                        "Ладнокрвните животни често се без влакна",
                                        "Ладнокрвните животни често се бавни"}));
    EXPECT_TRUE(bench::expand_choices("стем", {}).empty());
}

TEST(Adapt, LostPlaceholderGoesToReview) {
    const auto r = bench::adapt_item(cold_blooded(), replacing(" ⟦X⟧", ""));
    EXPECT_FALSE(r.adapted);
    ASSERT_TRUE(r.review);
    EXPECT_EQ(r.review->id, "q1");
    EXPECT_EQ(r.review->template_text, "Ладнокрвните животни често се ⟦X⟧");
    EXPECT_EQ(r.review->reason, "PlaceholderLost");
    const auto j = bench::to_json(*r.review);
    EXPECT_EQ(j["translated"], "Ладнокрвните животни често се");
}

TEST(Adapt, ChoicesTranslatedSeparately) {
    std::vector<std::string> seen;
    const bench::Translator bracket = [&seen](std::string_view s) {
        seen.emplace_back(s);
        return "[" + std::string(s) + "]";
    };
    const auto r = bench::adapt_item(cold_blooded(), bracket);
    ASSERT_TRUE(r.adapted);
    EXPECT_EQ(seen.size(), 5u);
    EXPECT_EQ(seen[1], "брзи");
    EXPECT_EQ(r.adapted->item.stem, "[Ладнокрвните животни често се]");
    EXPECT_EQ(r.adapted->candidates[2], "[Ладнокрвните животни често се] [без влакна]");
}

TEST(Adapt, InvalidItemRejected) {
    EXPECT_THROW(bench::adapt_item({"q", "с", {}, 0}, bench::identity_translator), FormatError);
    EXPECT_THROW(bench::adapt_item({"q", "с", {"а"}, 1}, bench::identity_translator), FormatError);
}

TEST(Json, ItemRoundTrip) {
    const auto item = cold_blooded();
    EXPECT_EQ(bench::item_from_json(nlohmann::json::parse(bench::to_json(item).dump())), item);
    EXPECT_THROW(bench::item_from_json(nlohmann::json::parse(R"({"id":"x"})")), FormatError);
    const auto r = bench::adapt_item(item, replacing("⟦X⟧", "⟦ X⟧"));
    ASSERT_TRUE(r.adapted);
    const auto j = bench::to_json(*r.adapted);
    EXPECT_EQ(j["placeholder_recovered"], true);
    EXPECT_EQ(j["candidates"].size(), 4u);
}

TEST(LineProtocol, EscapeRoundTrip) {
    for (const std::string s : {"обичен", "ред\nнов", "коса \\ црта", "\\n буквално", ""}) {
        const std::string e = bench::ProcessTranslator::escape_line(s);
        EXPECT_EQ(e.find('\n'), std::string::npos);
        EXPECT_EQ(bench::ProcessTranslator::unescape_line(e), s);
    }
}

TEST(LineProtocol, ExternalTranslator) {
    bench::ProcessTranslator cat("cat");
    const auto r = bench::adapt_item(cold_blooded(), cat);
    ASSERT_TRUE(r.adapted);
    EXPECT_EQ(r.adapted->item.stem, cold_blooded().stem);
}

// Random items: the placeholder never leaks, answer_index survives, and
// identity translation reproduces stem + choice.
TEST(BenchProperty, IdentityRoundTrip) {
    fixtures::MacedonianText gen(81);
    for (int trial = 0; trial < 500; ++trial) {
        McqItem item;
        item.id = std::to_string(trial);
        item.stem = gen.sentence();
        item.stem.pop_back();
        const bool slot = gen.rng().uniform(4) == 0;
        if (slot) item.stem += " ___ завршува тука.";
        const std::size_t n = 2 + gen.rng().uniform(4);
        for (std::size_t k = 0; k < n; ++k) item.choices.push_back(std::string(gen.pick(fixtures::kObjects)));
        item.answer_index = gen.rng().uniform(n);

        const auto r = bench::adapt_item(item, bench::identity_translator);
        ASSERT_TRUE(r.adapted);
        ASSERT_FALSE(r.review);
        EXPECT_EQ(r.adapted->item.answer_index, item.answer_index);
        EXPECT_EQ(r.adapted->item.choices, item.choices);
        ASSERT_EQ(r.adapted->candidates.size(), n);
        for (std::size_t k = 0; k < n; ++k) {
            const auto& cand = r.adapted->candidates[k];
            ASSERT_EQ(cand.find(bench::kPlaceholder), std::string::npos);
            if (!slot) {
                ASSERT_EQ(cand, item.stem + " " + item.choices[k]);
            } else {
                ASSERT_NE(cand.find(" " + item.choices[k] + " завршува тука."), std::string::npos);
            }
        }
        if (!slot) {
            ASSERT_EQ(r.adapted->item.stem, item.stem);
        }
    }
}

TEST(BenchProperty, DeletingTranslatorAlwaysReviewed) {
    fixtures::MacedonianText gen(83);
    const auto drop = replacing("⟦X⟧", "");
    for (int trial = 0; trial < 200; ++trial) {
        McqItem item{std::to_string(trial), gen.sentence(), {"а", "б", "в"}, 1};
        const auto r = bench::adapt_item(item, drop);
        ASSERT_FALSE(r.adapted);
        ASSERT_TRUE(r.review);
    }
}
