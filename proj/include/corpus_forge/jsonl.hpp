#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "corpus_forge/document.hpp"
#include "corpus_forge/error.hpp"
#include "corpus_forge/unicode.hpp"

namespace corpus_forge {

struct SidecarEntry {
    std::string path;
    std::size_t line = 0;
    std::string error;

    friend bool operator==(const SidecarEntry&, const SidecarEntry&) = default;
};

// Collects records that could not be ingested. Serialized as JSONL of
// {"path", "line", "error"}.
class ErrorSidecar {
public:
    void add(std::string path, std::size_t line, std::string error) {
        entries_.push_back({std::move(path), line, std::move(error)});
    }

    const std::vector<SidecarEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    void write(std::ostream& out) const {
        for (const auto& e : entries_) {
            nlohmann::ordered_json j;
            j["path"] = e.path;
            j["line"] = e.line;
            j["error"] = e.error;
            out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
        }
    }

    void write(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open sidecar " + path.string());
        write(out);
        if (!out) throw IoError("failed writing sidecar " + path.string());
    }

private:
    std::vector<SidecarEntry> entries_;
};

struct ReadOptions {
    bool strict = false;
    std::shared_ptr<ErrorSidecar> sidecar;  // optional; errors are dropped silently without one
};

// Ordered lazy sequence of Documents. Single-pass.
class CorpusStream {
public:
    using Producer = std::function<std::optional<Document>()>;

    CorpusStream() = default;
    CorpusStream(Producer producer, std::vector<std::string> origins, std::string format)
        : producer_(std::move(producer)), origins_(std::move(origins)), format_(std::move(format)) {}

    static CorpusStream from_vector(std::vector<Document> docs, std::string format = "memory") {
        auto shared = std::make_shared<std::vector<Document>>(std::move(docs));
        auto index = std::make_shared<std::size_t>(0);
        return CorpusStream(
            [shared, index]() -> std::optional<Document> {
                if (*index >= shared->size()) return std::nullopt;
                return std::move((*shared)[(*index)++]);
            },
            {}, std::move(format));
    }

    std::optional<Document> next() {
        if (!producer_) return std::nullopt;
        return producer_();
    }

    std::vector<Document> collect() {
        std::vector<Document> docs;
        while (auto d = next()) docs.push_back(std::move(*d));
        return docs;
    }

    const std::vector<std::string>& origins() const noexcept { return origins_; }
    const std::string& format() const noexcept { return format_; }

private:
    Producer producer_;
    std::vector<std::string> origins_;
    std::string format_;
};

namespace detail {

struct JsonlState {
    std::ifstream in;
    std::string path;
    std::string filename;
    std::size_t line_no = 0;
    ReadOptions options;
    std::unordered_set<std::string> seen_ids;
};

inline void report(JsonlState& st, std::size_t line, const std::string& error) {
    if (st.options.strict) {
        throw FormatError(st.path + ":" + std::to_string(line) + ": " + error);
    }
    if (st.options.sidecar) st.options.sidecar->add(st.path, line, error);
}

}  // namespace detail

// One JSON object per line. Text is NFC-normalized; a missing id becomes
// "<filename>:<line-number>". Malformed lines go to the sidecar and are
// skipped unless options.strict is set.
inline CorpusStream read_jsonl(const std::filesystem::path& path, ReadOptions options = {}) {
    auto st = std::make_shared<detail::JsonlState>();
    st->in.open(path, std::ios::binary);
    if (!st->in) throw IoError("cannot open " + path.string());
    st->path = path.string();
    st->filename = path.filename().string();
    st->options = std::move(options);

    auto producer = [st]() -> std::optional<Document> {
        std::string line;
        while (std::getline(st->in, line)) {
            const std::size_t line_no = ++st->line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (text::is_blank(line)) continue;
            Document doc;
            try {
                doc = document_from_json(nlohmann::json::parse(line));
                doc.text = text::normalize_nfc(doc.text);
            } catch (const nlohmann::json::exception& e) {
                detail::report(*st, line_no, e.what());
                continue;
            } catch (const Error& e) {
                detail::report(*st, line_no, e.what());
                continue;
            }
            if (doc.id.empty()) doc.id = st->filename + ":" + std::to_string(line_no);
            if (!st->seen_ids.insert(doc.id).second) {
                detail::report(*st, line_no, "duplicate id '" + doc.id + "'");
                continue;
            }
            return doc;
        }
        if (st->in.bad()) throw IoError("read failure on " + st->path);
        return std::nullopt;
    };
    return CorpusStream(std::move(producer), {st->path}, "jsonl");
}

// One Document per regular file (sorted by file name), source_kind=document.
inline CorpusStream read_text_dir(const std::filesystem::path& dir, const std::string& source,
                                  ReadOptions options = {}) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });

    struct State {
        std::vector<fs::path> files;
        std::size_t index = 0;
        std::string source;
        ReadOptions options;
    };
    auto st = std::make_shared<State>(State{std::move(files), 0, source, std::move(options)});

    auto producer = [st]() -> std::optional<Document> {
        while (st->index < st->files.size()) {
            const fs::path& file = st->files[st->index++];
            std::ifstream in(file, std::ios::binary);
            std::ostringstream buf;
            if (in) buf << in.rdbuf();
            std::string error;
            Document doc;
            if (!in && !in.eof()) {
                error = "unreadable file";
            } else {
                try {
                    doc.text = text::normalize_nfc(buf.str());
                } catch (const EncodingError& e) {
                    error = e.what();
                }
            }
            if (!error.empty()) {
                if (st->options.strict) throw FormatError(file.string() + ": " + error);
                if (st->options.sidecar) st->options.sidecar->add(file.string(), 0, error);
                continue;
            }
            doc.id = st->source + "/" + file.filename().string();
            doc.source = st->source;
            doc.source_kind = SourceKind::Document;
            doc.meta["path"] = file.filename().string();
            return doc;
        }
        return std::nullopt;
    };
    return CorpusStream(std::move(producer), {dir.string()}, "text-dir");
}

inline void sort_by_id(std::vector<Document>& docs) {
    std::sort(docs.begin(), docs.end(), [](const Document& a, const Document& b) { return a.id < b.id; });
}

inline std::string to_jsonl_line(const Document& doc) {
    return to_json(doc).dump(-1, ' ', false);
}

// Writes documents in ascending id order. Returns the number written.
inline std::size_t write_jsonl(std::vector<Document> docs, std::ostream& out) {
    sort_by_id(docs);
    for (const auto& d : docs) out << to_jsonl_line(d) << '\n';
    if (!out) throw IoError("write failure");
    return docs.size();
}

inline std::size_t write_jsonl(std::vector<Document> docs, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    const std::size_t n = write_jsonl(std::move(docs), out);
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
    return n;
}

inline std::size_t write_jsonl(CorpusStream stream, const std::filesystem::path& path) {
    return write_jsonl(stream.collect(), path);
}

}  // namespace corpus_forge
