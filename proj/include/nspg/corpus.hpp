#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nspg/errors.hpp"
#include "nspg/text.hpp"

namespace nspg {

inline constexpr int kDefaultMinWords = 10;

struct SentenceRecord {
    std::string id;       // "<doc>#<ordinal>", ordinals 1-based per document
    std::string doc;      // source document identifier
    std::string section;  // nearest heading, empty if none
    std::string text;     // whitespace-normalized sentence
    std::vector<std::string> tokens;
    int word_count = 0;

    bool operator==(const SentenceRecord&) const = default;
};

inline SentenceRecord make_sentence_record(std::string doc, std::string section, int ordinal,
                                           std::string_view raw_text) {
    SentenceRecord r;
    r.doc = std::move(doc);
    r.section = std::move(section);
    r.text = normalize_ws(raw_text);
    r.id = r.doc + "#" + std::to_string(ordinal);
    r.tokens = ws_tokens(r.text);
    r.word_count = static_cast<int>(r.tokens.size());
    return r;
}

// Re-derives tokens/word_count after a text edit, keeping identity fields.
inline SentenceRecord with_text(const SentenceRecord& base, std::string_view new_text) {
    SentenceRecord r = base;
    r.text = normalize_ws(new_text);
    r.tokens = ws_tokens(r.text);
    r.word_count = static_cast<int>(r.tokens.size());
    return r;
}

struct AugmentInfo {
    std::string origin_id;
    std::string op;  // "RS", "RD", "SR", "RI"

    bool operator==(const AugmentInfo&) const = default;
};

struct CorpusEntry {
    SentenceRecord rec;
    std::optional<int> label;        // 1 = property, 0 = non-property
    std::optional<AugmentInfo> aug;  // present only on augmented variants

    bool operator==(const CorpusEntry&) const = default;
};

struct LabeledExample {
    SentenceRecord record;
    int label = 0;

    bool operator==(const LabeledExample&) const = default;
};

enum class DocFormat { plain, markdown };

inline DocFormat parse_doc_format(std::string_view s) {
    if (s == "plain" || s == "txt") return DocFormat::plain;
    if (s == "markdown" || s == "md") return DocFormat::markdown;
    throw ConfigError("unknown document format: " + std::string(s));
}

namespace detail {

inline const std::set<std::string>& abbreviations() {
    static const std::set<std::string> abbr = {"e.g", "i.e", "etc", "fig",  "eq",
                                               "vs",  "cf",  "al",  "resp", "approx"};
    return abbr;
}

// True when the '.' at text[i] ends a protected abbreviation.
inline bool abbreviation_dot(std::string_view text, std::size_t i) {
    std::size_t b = i;
    while (b > 0 && (ascii_alnum(text[b - 1]) || text[b - 1] == '.')) --b;
    std::string word = to_lower(std::string(text.substr(b, i - b)));
    return abbreviations().count(word) > 0;
}

// Splits one paragraph of prose into sentences.  Boundaries are '.', '!'
// or '?' followed by whitespace and an uppercase letter or digit, or the
// end of the paragraph.  Dots inside identifiers, decimal numbers and
// common abbreviations never split.
inline std::vector<std::string> split_paragraph(std::string_view para) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < para.size(); ++i) {
        char c = para[i];
        if (c != '.' && c != '!' && c != '?') continue;
        if (c == '.') {
            if (i + 1 < para.size() && (ident_char(para[i + 1]) || para[i + 1] == '.')) {
                // CFG.endian_swap, 3.5, "e.g." mid-token; also skip runs of dots.
                if (ident_char(para[i + 1])) continue;
            }
            if (abbreviation_dot(para, i)) continue;
        }
        // Include closing quotes/brackets in the sentence.
        std::size_t j = i + 1;
        while (j < para.size() && (para[j] == '"' || para[j] == '\'' || para[j] == ')' ||
                                   para[j] == ']' || para[j] == '.' || para[j] == '!' ||
                                   para[j] == '?'))
            ++j;
        std::size_t k = j;
        while (k < para.size() && ascii_space(para[k])) ++k;
        bool at_end = k >= para.size();
        bool next_ok = !at_end && (ascii_upper(para[k]) || ascii_digit(para[k]) ||
                                   ((para[k] == '"' || para[k] == '(' || para[k] == '\'') &&
                                    k + 1 < para.size() && ascii_upper(para[k + 1])));
        if (k == j && !at_end) continue;  // no whitespace after punctuation
        if (at_end || next_ok) {
            std::string sent = normalize_ws(para.substr(start, j - start));
            if (!sent.empty()) out.push_back(std::move(sent));
            start = k;
            i = j - 1;
        }
    }
    if (start < para.size()) {
        std::string rest = normalize_ws(para.substr(start));
        if (!rest.empty()) out.push_back(std::move(rest));
    }
    return out;
}

// Drops inline markdown syntax while keeping the prose: link targets,
// emphasis markers, inline code backticks, image prefixes.
inline std::string strip_inline_markdown(std::string_view line) {
    std::string out;
    out.reserve(line.size());
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (c == '`' || c == '*') continue;
        if (c == '!' && i + 1 < line.size() && line[i + 1] == '[') continue;
        if (c == '[') {
            std::size_t close = line.find(']', i + 1);
            if (close != std::string_view::npos) {
                out.append(line.substr(i + 1, close - i - 1));
                i = close;
                if (i + 1 < line.size() && line[i + 1] == '(') {
                    std::size_t p = line.find(')', i + 2);
                    if (p != std::string_view::npos) i = p;
                }
                continue;
            }
        }
        out.push_back(c);
    }
    return out;
}

inline bool table_line(std::string_view t) {
    std::string s = trim(t);
    return !s.empty() && s.front() == '|';
}

inline bool fence_line(std::string_view t) {
    std::string s = trim(t);
    return starts_with(s, "```") || starts_with(s, "~~~");
}

inline std::optional<std::string> heading_line(std::string_view t) {
    std::string s = trim(t);
    std::size_t h = 0;
    while (h < s.size() && s[h] == '#') ++h;
    if (h == 0 || h > 6 || h >= s.size() || s[h] != ' ') return std::nullopt;
    std::string title = trim(s.substr(h));
    while (!title.empty() && title.back() == '#') title.pop_back();
    return trim(title);
}

// List item marker: -, *, + or an ordered "1." / "1)" prefix.
inline std::optional<std::string> list_item_line(std::string_view t) {
    std::string s = trim(t);
    if (s.size() > 1 && (s[0] == '-' || s[0] == '*' || s[0] == '+') && s[1] == ' ')
        return trim(s.substr(2));
    std::size_t d = 0;
    while (d < s.size() && ascii_digit(s[d])) ++d;
    if (d > 0 && d + 1 < s.size() && (s[d] == '.' || s[d] == ')') && s[d + 1] == ' ')
        return trim(s.substr(d + 2));
    return std::nullopt;
}

}  // namespace detail

struct SegmentedSentence {
    std::string text;
    std::string section;
};

// Sentence segmentation with section tracking.  Markdown mode drops code
// fences and tables, uses headings as section names, and keeps list items
// only when they end in punctuation or run past kDefaultMinWords words.
inline std::vector<SegmentedSentence> segment_document(std::string_view raw, DocFormat format) {
    if (auto bad = find_invalid_utf8(raw)) throw DecodeError("invalid UTF-8", *bad);

    std::vector<SegmentedSentence> out;
    std::string section;

    auto flush_para = [&](std::string& para) {
        if (para.empty()) return;
        for (auto& s : detail::split_paragraph(para)) out.push_back({std::move(s), section});
        para.clear();
    };
    auto flush_list_item = [&](const std::string& item) {
        if (item.empty()) return;
        auto sentences = detail::split_paragraph(item);
        for (auto& s : sentences) {
            char last = s.empty() ? ' ' : s.back();
            bool punctuated = last == '.' || last == '!' || last == '?' || last == ':';
            bool long_enough = ws_tokens(s).size() > static_cast<std::size_t>(kDefaultMinWords);
            if (punctuated || long_enough) out.push_back({std::move(s), section});
        }
    };

    if (format == DocFormat::plain) {
        std::string para;
        std::size_t pos = 0;
        while (pos <= raw.size()) {
            std::size_t nl = raw.find('\n', pos);
            std::string_view line =
                raw.substr(pos, nl == std::string_view::npos ? raw.size() - pos : nl - pos);
            if (trim(line).empty()) {
                flush_para(para);
            } else {
                if (!para.empty()) para.push_back(' ');
                para.append(trim(line));
            }
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        }
        flush_para(para);
        return out;
    }

    bool in_fence = false;
    std::string para;
    std::size_t pos = 0;
    while (pos <= raw.size()) {
        std::size_t nl = raw.find('\n', pos);
        std::string_view line =
            raw.substr(pos, nl == std::string_view::npos ? raw.size() - pos : nl - pos);

        if (detail::fence_line(line)) {
            flush_para(para);
            in_fence = !in_fence;
        } else if (!in_fence) {
            if (auto h = detail::heading_line(line)) {
                flush_para(para);
                section = *h;
            } else if (detail::table_line(line)) {
                flush_para(para);
            } else if (auto item = detail::list_item_line(line)) {
                flush_para(para);
                flush_list_item(detail::strip_inline_markdown(*item));
            } else if (trim(line).empty()) {
                flush_para(para);
            } else {
                std::string clean = trim(detail::strip_inline_markdown(line));
                if (!clean.empty()) {
                    if (!para.empty()) para.push_back(' ');
                    para.append(clean);
                }
            }
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    flush_para(para);
    return out;
}

inline std::vector<std::string> segment_sentences(std::string_view raw, DocFormat format) {
    std::vector<std::string> out;
    for (auto& s : segment_document(raw, format)) out.push_back(std::move(s.text));
    return out;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<SentenceRecord> ingest_document(const std::filesystem::path& path,
                                                   DocFormat format) {
    std::string raw = read_file(path);
    std::string doc = path.stem().string();
    std::vector<SentenceRecord> out;
    int ordinal = 0;
    for (auto& s : segment_document(raw, format))
        out.push_back(make_sentence_record(doc, s.section, ++ordinal, s.text));
    return out;
}

inline std::vector<SentenceRecord> filter_short(const std::vector<SentenceRecord>& records,
                                                int min_words = kDefaultMinWords) {
    if (min_words < 1) throw ValidationError("min_words must be >= 1");
    std::vector<SentenceRecord> out;
    for (const auto& r : records)
        if (r.word_count >= min_words) out.push_back(r);
    return out;
}

// ---------------------------------------------------------------------------
// JSONL serialization.  Canonical form: one object per line, keys sorted,
// LF terminated, doubles in shortest round-trip notation.

inline nlohmann::json entry_to_json(const CorpusEntry& e) {
    nlohmann::json j;
    j["id"] = e.rec.id;
    j["doc"] = e.rec.doc;
    j["section"] = e.rec.section;
    j["text"] = e.rec.text;
    j["tokens"] = e.rec.tokens;
    j["word_count"] = e.rec.word_count;
    if (e.label) j["label"] = *e.label;
    if (e.aug) {
        j["origin_id"] = e.aug->origin_id;
        j["aug_op"] = e.aug->op;
    }
    return j;
}

inline CorpusEntry entry_from_json(const nlohmann::json& j, std::size_t line) {
    auto need = [&](const char* key) -> const nlohmann::json& {
        auto it = j.find(key);
        if (it == j.end()) throw ParseError(std::string("missing key \"") + key + "\"", line);
        return *it;
    };
    CorpusEntry e;
    try {
        e.rec.id = need("id").get<std::string>();
        e.rec.doc = need("doc").get<std::string>();
        e.rec.section = need("section").get<std::string>();
        e.rec.text = need("text").get<std::string>();
        e.rec.tokens = need("tokens").get<std::vector<std::string>>();
        e.rec.word_count = need("word_count").get<int>();
        if (j.contains("label")) e.label = j.at("label").get<int>();
        if (j.contains("origin_id") || j.contains("aug_op")) {
            AugmentInfo a;
            a.origin_id = need("origin_id").get<std::string>();
            a.op = need("aug_op").get<std::string>();
            e.aug = a;
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("bad record: ") + ex.what(), line);
    }
    if (e.label && *e.label != 0 && *e.label != 1)
        throw ValidationError("line " + std::to_string(line) + ": label must be 0 or 1, got " +
                              std::to_string(*e.label));
    return e;
}

inline void save_corpus(const std::vector<CorpusEntry>& entries, std::ostream& out) {
    for (const auto& e : entries) out << entry_to_json(e).dump() << '\n';
}

inline void save_corpus(const std::vector<CorpusEntry>& entries,
                        const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    save_corpus(entries, out);
}

inline std::vector<CorpusEntry> load_corpus(std::istream& in) {
    std::vector<CorpusEntry> out;
    std::string line;
    std::size_t lineno = 0;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& ex) {
            throw ParseError(std::string("invalid JSON: ") + ex.what(), lineno);
        }
        if (!j.is_object()) throw ParseError("expected a JSON object", lineno);
        CorpusEntry e = entry_from_json(j, lineno);
        if (!seen.insert(e.rec.id).second)
            throw ValidationError("line " + std::to_string(lineno) + ": duplicate id " + e.rec.id);
        out.push_back(std::move(e));
    }
    return out;
}

inline std::vector<CorpusEntry> load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return load_corpus(in);
}

inline std::vector<LabeledExample> load_labeled(const std::filesystem::path& path) {
    std::vector<LabeledExample> out;
    for (auto& e : load_corpus(path)) {
        if (!e.label)
            throw ValidationError("record " + e.rec.id + " has no label; a labeled corpus " +
                                  "requires label on every line");
        out.push_back({std::move(e.rec), *e.label});
    }
    return out;
}

inline void save_labeled(const std::vector<LabeledExample>& examples,
                         const std::filesystem::path& path) {
    std::vector<CorpusEntry> entries;
    entries.reserve(examples.size());
    for (const auto& ex : examples) entries.push_back({ex.record, ex.label, std::nullopt});
    save_corpus(entries, path);
}

// Checks every record invariant; throws ValidationError on the first hole.
inline void validate_corpus(const std::vector<CorpusEntry>& entries) {
    std::set<std::string> ids;
    for (const auto& e : entries) {
        const auto& r = e.rec;
        if (r.id.empty()) throw ValidationError("record with empty id");
        if (!ids.insert(r.id).second) throw ValidationError("duplicate id " + r.id);
        if (trim(r.text).empty()) throw ValidationError(r.id + ": empty text");
        if (r.word_count != static_cast<int>(r.tokens.size()))
            throw ValidationError(r.id + ": word_count " + std::to_string(r.word_count) +
                                  " does not match " + std::to_string(r.tokens.size()) +
                                  " tokens");
        if (normalize_ws(join(r.tokens, " ")) != normalize_ws(r.text))
            throw ValidationError(r.id + ": tokens do not re-join to text");
        if (e.label && *e.label != 0 && *e.label != 1)
            throw ValidationError(r.id + ": label out of range");
        if (e.aug && e.aug->op != "RS" && e.aug->op != "RD" && e.aug->op != "SR" &&
            e.aug->op != "RI")
            throw ValidationError(r.id + ": unknown aug_op " + e.aug->op);
    }
}

// ---------------------------------------------------------------------------
// Stratified train/validation split.

struct SplitPair {
    std::vector<LabeledExample> train;
    std::vector<LabeledExample> validation;
};

// |train| = round(fraction * N); class ratios preserved within one example
// via largest-remainder allocation; shuffling is deterministic per seed.
inline SplitPair split_dataset(const std::vector<LabeledExample>& examples, double fraction,
                               std::uint64_t seed) {
    if (examples.size() < 2) throw ValidationError("need at least 2 examples to split");
    if (!(fraction > 0.0 && fraction < 1.0))
        throw ValidationError("train fraction must be in (0, 1)");

    const std::size_t n = examples.size();
    const std::size_t want = static_cast<std::size_t>(std::llround(fraction * n));

    std::vector<std::size_t> neg, pos;
    for (std::size_t i = 0; i < n; ++i) (examples[i].label == 1 ? pos : neg).push_back(i);

    Rng rng(splitmix64(seed));
    rng.shuffle(neg);
    rng.shuffle(pos);

    double exact_neg = fraction * static_cast<double>(neg.size());
    double exact_pos = fraction * static_cast<double>(pos.size());
    std::size_t take_neg = static_cast<std::size_t>(exact_neg);
    std::size_t take_pos = static_cast<std::size_t>(exact_pos);
    while (take_neg + take_pos < want) {
        double rem_neg = exact_neg - static_cast<double>(take_neg);
        double rem_pos = exact_pos - static_cast<double>(take_pos);
        bool grow_neg = take_neg < neg.size() &&
                        (take_pos >= pos.size() || rem_neg >= rem_pos);
        if (grow_neg) ++take_neg;
        else ++take_pos;
    }
    while (take_neg + take_pos > want) {
        if (take_neg > 0 && (exact_neg - static_cast<double>(take_neg) <
                             exact_pos - static_cast<double>(take_pos)))
            --take_neg;
        else if (take_pos > 0)
            --take_pos;
        else
            --take_neg;
    }

    std::vector<bool> in_train(n, false);
    for (std::size_t i = 0; i < take_neg; ++i) in_train[neg[i]] = true;
    for (std::size_t i = 0; i < take_pos; ++i) in_train[pos[i]] = true;

    SplitPair out;
    for (std::size_t i = 0; i < n; ++i)
        (in_train[i] ? out.train : out.validation).push_back(examples[i]);
    return out;
}

}  // namespace nspg
