#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "corpus_forge/document.hpp"
#include "corpus_forge/rng.hpp"

namespace fixtures {

using corpus_forge::Document;
using corpus_forge::SourceKind;
using corpus_forge::SplitMix64;

inline constexpr std::array<std::string_view, 24> kSubjects{
    "Младиот учител",     "Старата библиотекарка", "Нашиот сосед",        "Градоначалникот",
    "Професорката",       "Локалниот земјоделец",  "Новиот директор",     "Учениците од гимназијата",
    "Лекарката",          "Туристите од Охрид",    "Децата од маалото",   "Уметникот",
    "Возачот на автобусот", "Претседателот на здружението", "Новинарката", "Готвачот",
    "Студентите",         "Пензионерите",          "Продавачот на пазарот", "Истражувачите",
    "Советниците",        "Жителите на селото",    "Музичарите",          "Инженерката",
};

inline constexpr std::array<std::string_view, 24> kVerbs{
    "ги подготвува",   "ги објаснува",  "ги проверува",  "ги донесе",     "ги сподели",    "ги чува",
    "ги прочита",      "ги поправи",    "ги организира", "ги претстави",  "ги собира",     "ги испрати",
    "ги пронајде",     "ги заврши",     "ги анализира",  "ги опиша",      "ги препорача",  "ги одбележа",
    "ги преведе",      "ги нацрта",     "ги продаде",    "ги посети",     "ги подобри",    "ги пријави",
};

inline constexpr std::array<std::string_view, 24> kObjects{
    "новите материјали",     "старите книги",         "свежите зеленчуци",   "резултатите од анкетата",
    "плановите за летото",   "документите за дозвола", "сликите од изложбата", "песните на дедото",
    "картите на градот",     "записите од состанокот", "рецептите за ајвар",  "писмата од пријателите",
    "алатките во работилницата", "правилата на играта", "податоците за климата", "фотографиите од езерото",
    "предлозите на граѓаните", "задачите за домашна работа", "цените на пазарот", "знаците покрај патот",
    "учебниците по историја", "прашањата на учениците", "одлуките на советот", "плодовите од градината",
};

inline constexpr std::array<std::string_view, 24> kPlaces{
    "во библиотеката",      "покрај Вардар",          "во центарот на Скопје", "на пазарот во Битола",
    "во училиштето",        "пред општината",         "во малата работилница", "на брегот на езерото",
    "во кафулето до плоштадот", "во Струга",           "на планината Шар",       "во старата чаршија",
    "во болницата",         "во паркот",              "во Куманово",            "на фестивалот во Охрид",
    "во канцеларијата",     "во селото под ридот",    "во музејот",             "на станицата",
    "во градината",         "во Тетово",              "во Велес",               "пред театарот",
};

inline constexpr std::array<std::string_view, 24> kTimes{
    "секое утро",          "минатата недела",       "во текот на зимата",  "пред да падне мракот",
    "по долгиот состанок", "за време на летото",    "вчера попладне",      "во петок навечер",
    "на почетокот на месецот", "секоја сабота",     "без никаква помош",   "со големо внимание",
    "заедно со семејството", "по вториот обид",     "додека врнеше дожд",  "кога се врати дома",
    "наутро пред работа",  "во доцните часови",     "по празниците",       "полека и внимателно",
    "пред сите гости",     "со радост",             "уште еднаш",          "до крајот на годината",
};

inline constexpr std::array<std::string_view, 12> kClauses{
    "бидејќи тоа беше важно за сите",     "иако времето беше лошо",
    "за да им помогне на соседите",       "како што ветија пред една година",
    "што многу ги израдува граѓаните",    "а потоа отидоа на ручек",
    "но никој не знаеше зошто",           "па затоа подготвија нов план",
    "кога заврши сезоната на берба",      "и тоа го објавија на веб-страницата",
    "откако ја добија дозволата",         "според препораките на експертите",
};

// Seeded generator of Macedonian-looking prose. Sentences are combinatorial,
// so collisions are rare but possible; a serial number can be appended to
// force uniqueness.
class MacedonianText {
public:
    explicit MacedonianText(std::uint64_t seed) : rng_(seed) {}

    template <std::size_t N>
    std::string_view pick(const std::array<std::string_view, N>& a) {
        return a[rng_.uniform(N)];
    }

    std::string sentence() {
        std::string s;
        s += pick(kSubjects);
        s += ' ';
        s += pick(kVerbs);
        s += ' ';
        s += pick(kObjects);
        s += ' ';
        s += pick(kPlaces);
        s += ' ';
        s += pick(kTimes);
        if (rng_.uniform(3) == 0) {
            s += ", ";
            s += pick(kClauses);
        }
        s += rng_.uniform(10) == 0 ? "!" : ".";
        return s;
    }

    // Sentence guaranteed distinct from any other with a different serial.
    std::string unique_sentence(std::uint64_t serial) {
        std::string s = sentence();
        s.pop_back();
        s += " (запис " + std::to_string(serial) + ").";
        return s;
    }

    // Lines of 1-3 sentences; every line passes the line filters.
    std::string paragraph_text(std::size_t lines, std::uint64_t& serial) {
        std::string out;
        for (std::size_t l = 0; l < lines; ++l) {
            if (l > 0) out += '\n';
            const std::size_t n = 1 + rng_.uniform(3);
            for (std::size_t k = 0; k < n; ++k) {
                if (k > 0) out += ' ';
                out += unique_sentence(serial++);
            }
        }
        return out;
    }

    std::string words_text(std::size_t target_words, std::uint64_t& serial) {
        std::string out;
        std::size_t words = 0;
        while (words < target_words) {
            std::string s = unique_sentence(serial++);
            std::size_t w = 1;
            for (const char c : s) w += c == ' ';
            if (!out.empty()) out += ' ';
            out += s;
            words += w;
        }
        return out;
    }

    SplitMix64& rng() { return rng_; }

private:
    SplitMix64 rng_;
};

inline Document make_doc(std::string id, std::string text, std::string source = "web",
                         SourceKind kind = SourceKind::Web) {
    Document d;
    d.id = std::move(id);
    d.source = std::move(source);
    d.source_kind = kind;
    d.text = std::move(text);
    return d;
}

inline std::string zero_pad(std::size_t i, int width = 7) {
    std::string s = std::to_string(i);
    if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
    return s;
}

inline constexpr std::string_view kEnglishLine =
    "The committee reviewed the annual budget and approved several new projects for the coming year.";

// A mixed corpus of roughly `target_bytes` of JSONL-ready documents. Most
// are clean Macedonian web text; a fixed share carries each kind of defect
// the pipeline removes, so every stage has work to do.
inline std::vector<Document> mixed_corpus(std::size_t target_bytes, std::uint64_t seed) {
    MacedonianText gen(seed);
    std::vector<Document> docs;
    std::size_t bytes = 0;
    std::uint64_t serial = 0;
    const std::array<std::string_view, 4> sources{"hplt2", "wikipedia", "news", "forums"};
    std::size_t i = 0;
    std::vector<std::size_t> clean;
    std::vector<std::size_t> run_on;
    while (bytes < target_bytes) {
        const std::string id = "doc-" + zero_pad(i);
        const std::string source(sources[i % sources.size()]);
        Document d;
        switch (i % 20) {
            case 0: {  // PII
                std::string t = gen.paragraph_text(4, serial);
                t += "\nЗа повеќе информации пишете на kontakt" + std::to_string(i) +
                     "@primer.mk или јавете се на +389 70 " + std::to_string(100 + i % 900) + " 456.";
                t += "\nСерверот е на адреса 10.0." + std::to_string(i % 250) + ".7 и работи без прекин.";
                d = make_doc(id, t, source);
                break;
            }
            case 1: {  // short and unterminated lines
                std::string t = gen.paragraph_text(3, serial);
                t += "\nМени\nНајави се\nПочетна страница за сите корисници\n" + gen.unique_sentence(serial++);
                d = make_doc(id, t, source);
                break;
            }
            case 2: {  // bullet list page
                std::string t;
                for (int k = 0; k < 12; ++k) t += "• " + gen.unique_sentence(serial++) + "\n";
                d = make_doc(id, t, source);
                break;
            }
            case 3: {  // ellipsis teaser page
                std::string t;
                for (int k = 0; k < 6; ++k) {
                    std::string s = gen.unique_sentence(serial++);
                    s.pop_back();
                    t += s + "...\n";
                }
                t += gen.unique_sentence(serial++);
                d = make_doc(id, t, source);
                break;
            }
            case 4: {  // wrong language
                std::string t;
                for (int k = 0; k < 5; ++k) t += std::string(kEnglishLine) + "\n";
                d = make_doc(id, t, source);
                break;
            }
            case 5: {  // shares a boilerplate sentence with many others
                std::string t = gen.paragraph_text(3, serial);
                t += "\nСите права се задржани од страна на издавачот и авторите на оваа страница.";
                d = make_doc(id, t, source);
                break;
            }
            case 6: {  // near duplicate of an earlier clean document
                if (!clean.empty()) {
                    std::string t = docs[clean[gen.rng().uniform(clean.size())]].text;
                    t += "\n" + gen.unique_sentence(serial++);
                    d = make_doc(id, t, source);
                    // Sentence dedup strips the copied sentences, so near-dup
                    // detection sees what is left; both stages get exercised.
                } else {
                    d = make_doc(id, gen.paragraph_text(4, serial), source);
                }
                break;
            }
            case 7: {  // long document-kind text for chunking
                d = make_doc(id, gen.words_text(600, serial), "documents", SourceKind::Document);
                break;
            }
            case 8: {  // one long sentence; later copied with small edits
                std::string t;
                for (int k = 0; k < 10; ++k) {
                    std::string s = gen.unique_sentence(serial++);
                    s.pop_back();
                    t += s + (k == 9 ? "." : ", ");
                }
                d = make_doc(id, t, source);
                run_on.push_back(docs.size());
                break;
            }
            case 9: {  // near duplicate that sentence dedup cannot see
                std::string t = docs[run_on[gen.rng().uniform(run_on.size())]].text;
                const auto pos = t.find("(запис ");
                t.insert(pos + std::string_view("(запис ").size(), "бр. ");
                d = make_doc(id, t, source);
                break;
            }
            default:
                d = make_doc(id, gen.paragraph_text(3 + gen.rng().uniform(6), serial), source);
                clean.push_back(docs.size());
                break;
        }
        bytes += d.text.size() + 80;
        docs.push_back(std::move(d));
        ++i;
    }
    return docs;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void write_file(const std::filesystem::path& p, std::string_view content) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(std::string_view name) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("corpus_forge_" + std::string(name) + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace fixtures
