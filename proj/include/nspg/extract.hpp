#pragma once

#include <algorithm>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nspg/classify.hpp"
#include "nspg/corpus.hpp"
#include "nspg/errors.hpp"

// End-to-end property extraction over ingested documents, TF-IDF cosine
// similarity, and coverage accounting against design-verification sentences.

namespace nspg {

struct PropertyRecord {
    SentenceRecord sentence;
    double score = 0.0;
    std::optional<bool> covered_by_dv;       // set by dv_coverage
    std::optional<std::string> matched_dv_id;  // set when covered

    bool operator==(const PropertyRecord&) const = default;
};

using SentenceScorer = std::function<double(const SentenceRecord&)>;

// The model must outlive the returned scorer.
inline SentenceScorer scorer_for(const ClassifierModel& model) {
    return [&model](const SentenceRecord& rec) { return predict(model, rec.text); };
}

struct DocumentCounts {
    std::string doc;
    long long processed = 0;
    long long extracted = 0;

    bool operator==(const DocumentCounts&) const = default;
};

struct ExtractionResult {
    std::vector<PropertyRecord> properties;
    std::vector<DocumentCounts> docs;  // first-appearance order
    long long processed = 0;
    long long extracted = 0;
    // Set when the scorer failed mid-run; properties hold the completed work.
    std::optional<std::string> failure;
};

// Sentences below min_words are skipped before scoring; a strict score >
// threshold turns a sentence into a property.  A scorer failure stops the run
// and is recorded instead of discarding the completed records.
inline ExtractionResult extract_properties(const SentenceScorer& scorer,
                                           const std::vector<SentenceRecord>& records,
                                           int min_words = kDefaultMinWords,
                                           double threshold = kDecisionThreshold) {
    if (min_words < 1) throw ValidationError("min_words must be >= 1");
    if (!(threshold >= 0.0 && threshold < 1.0))
        throw ValidationError("decision threshold must be in [0, 1)");
    ExtractionResult out;
    auto doc_counts = [&out](const std::string& doc) -> DocumentCounts& {
        for (auto& d : out.docs)
            if (d.doc == doc) return d;
        out.docs.push_back({doc, 0, 0});
        return out.docs.back();
    };
    for (const auto& rec : records) {
        if (rec.word_count < min_words) continue;
        double score = 0.0;
        try {
            score = scorer(rec);
        } catch (const Error& e) {
            out.failure = e.what();
            break;
        }
        auto& counts = doc_counts(rec.doc);
        ++counts.processed;
        ++out.processed;
        if (score > threshold) {
            out.properties.push_back({rec, score, std::nullopt, std::nullopt});
            ++counts.extracted;
            ++out.extracted;
        }
    }
    return out;
}

inline ExtractionResult extract_properties(const ClassifierModel& model,
                                           const std::vector<SentenceRecord>& records,
                                           int min_words = kDefaultMinWords,
                                           double threshold = kDecisionThreshold) {
    return extract_properties(scorer_for(model), records, min_words, threshold);
}

inline double sparse_dot(const FeatureVector& a, const FeatureVector& b) {
    double out = 0.0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            out += ia->second * ib->second;
            ++ia;
            ++ib;
        }
    }
    return out;
}

// Cosine of the two TF-IDF vectors fit on the pair itself.
inline double similarity(std::string_view a, std::string_view b) {
    auto stats = fit_tfidf({std::string(a), std::string(b)});
    double cos = sparse_dot(featurize_tfidf(a, stats.vocab, stats.idf),
                            featurize_tfidf(b, stats.vocab, stats.idf));
    return std::min(1.0, std::max(0.0, cos));
}

struct DvSentence {
    std::string id;
    std::string text;

    bool operator==(const DvSentence&) const = default;
};

// JSONL, one {"id", "text"} object per line.
inline std::vector<DvSentence> load_dv_sentences(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<DvSentence> out;
    std::set<std::string> ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("invalid DV sentence: ") + e.what(), lineno);
        }
        DvSentence dv;
        try {
            dv.id = j.at("id").get<std::string>();
            dv.text = j.at("text").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("invalid DV sentence: ") + e.what(), lineno);
        }
        if (dv.id.empty()) throw ParseError("DV sentence with empty id", lineno);
        if (trim(dv.text).empty()) throw ParseError("DV sentence with empty text", lineno);
        if (!ids.insert(dv.id).second)
            throw ValidationError("duplicate DV sentence id " + dv.id);
        out.push_back(std::move(dv));
    }
    return out;
}

struct CoverageCounts {
    std::string doc;
    long long total = 0;
    long long covered = 0;
    long long not_covered = 0;

    bool operator==(const CoverageCounts&) const = default;
};

struct CoverageReport {
    double sim_threshold = 0.5;
    long long total = 0;
    long long covered = 0;
    long long not_covered = 0;
    std::vector<CoverageCounts> docs;  // first-appearance order
    std::optional<std::string> warning;
};

inline constexpr double kDefaultSimThreshold = 0.5;

// Marks each property covered iff its best TF-IDF cosine against the DV
// sentences reaches the threshold, recording the best-match id.  Vectors are
// fit on the union of property and DV texts.
inline CoverageReport dv_coverage(std::vector<PropertyRecord>& properties,
                                  const std::vector<DvSentence>& dv,
                                  double sim_threshold = kDefaultSimThreshold) {
    if (!(sim_threshold > 0.0 && sim_threshold <= 1.0))
        throw ValidationError("similarity threshold must be in (0, 1]");
    CoverageReport report;
    report.sim_threshold = sim_threshold;
    auto doc_counts = [&report](const std::string& doc) -> CoverageCounts& {
        for (auto& d : report.docs)
            if (d.doc == doc) return d;
        report.docs.push_back({doc, 0, 0, 0});
        return report.docs.back();
    };
    auto mark = [&](PropertyRecord& prop, bool covered, std::optional<std::string> match) {
        prop.covered_by_dv = covered;
        prop.matched_dv_id = std::move(match);
        auto& counts = doc_counts(prop.sentence.doc);
        ++counts.total;
        ++report.total;
        if (covered) {
            ++counts.covered;
            ++report.covered;
        } else {
            ++counts.not_covered;
            ++report.not_covered;
        }
    };
    if (dv.empty()) {
        report.warning = "empty DV sentence set: every property marked not covered";
        for (auto& prop : properties) mark(prop, false, std::nullopt);
        return report;
    }
    std::vector<std::string> texts;
    texts.reserve(properties.size() + dv.size());
    for (const auto& prop : properties) texts.push_back(prop.sentence.text);
    for (const auto& sentence : dv) texts.push_back(sentence.text);
    TfidfStats stats = fit_tfidf(texts);
    std::vector<FeatureVector> dv_vectors;
    dv_vectors.reserve(dv.size());
    for (const auto& sentence : dv)
        dv_vectors.push_back(featurize_tfidf(sentence.text, stats.vocab, stats.idf));
    for (auto& prop : properties) {
        FeatureVector v = featurize_tfidf(prop.sentence.text, stats.vocab, stats.idf);
        double best = -1.0;
        std::size_t best_index = 0;
        for (std::size_t j = 0; j < dv_vectors.size(); ++j) {
            double cos = sparse_dot(v, dv_vectors[j]);
            if (cos > best) {
                best = cos;
                best_index = j;
            }
        }
        bool covered = best >= sim_threshold;
        mark(prop, covered,
             covered ? std::optional<std::string>(dv[best_index].id) : std::nullopt);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Serialization.

inline nlohmann::json property_to_json(const PropertyRecord& p) {
    nlohmann::json j{{"id", p.sentence.id},
                     {"doc", p.sentence.doc},
                     {"text", p.sentence.text},
                     {"score", p.score}};
    j["covered_by_dv"] = p.covered_by_dv ? nlohmann::json(*p.covered_by_dv) : nlohmann::json();
    j["matched_dv_id"] =
        p.matched_dv_id ? nlohmann::json(*p.matched_dv_id) : nlohmann::json();
    return j;
}

inline PropertyRecord property_from_json(const nlohmann::json& j, std::size_t line) {
    PropertyRecord p;
    try {
        std::string id = j.at("id").get<std::string>();
        std::string doc = j.at("doc").get<std::string>();
        std::string text = j.at("text").get<std::string>();
        p.sentence.id = std::move(id);
        p.sentence.doc = std::move(doc);
        p.sentence.text = normalize_ws(text);
        p.sentence.tokens = ws_tokens(p.sentence.text);
        p.sentence.word_count = static_cast<int>(p.sentence.tokens.size());
        p.score = j.at("score").get<double>();
        if (j.contains("covered_by_dv") && !j.at("covered_by_dv").is_null())
            p.covered_by_dv = j.at("covered_by_dv").get<bool>();
        if (j.contains("matched_dv_id") && !j.at("matched_dv_id").is_null())
            p.matched_dv_id = j.at("matched_dv_id").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid property record: ") + e.what(), line);
    }
    if (!(p.score >= 0.0 && p.score <= 1.0))
        throw ParseError("property score out of [0,1]: " + std::to_string(p.score), line);
    return p;
}

inline void save_properties(const std::vector<PropertyRecord>& properties,
                            const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (const auto& p : properties) out << property_to_json(p).dump() << "\n";
    if (!out.flush()) throw IoError("failed writing " + path.string());
}

inline std::vector<PropertyRecord> load_properties(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<PropertyRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("invalid property record: ") + e.what(), lineno);
        }
        out.push_back(property_from_json(j, lineno));
    }
    return out;
}

inline nlohmann::json extraction_to_json(const ExtractionResult& r) {
    nlohmann::json docs = nlohmann::json::array();
    for (const auto& d : r.docs)
        docs.push_back({{"doc", d.doc}, {"processed", d.processed}, {"extracted", d.extracted}});
    nlohmann::json j{{"processed", r.processed}, {"extracted", r.extracted}, {"docs", docs}};
    j["failure"] = r.failure ? nlohmann::json(*r.failure) : nlohmann::json();
    return j;
}

inline nlohmann::json coverage_to_json(const CoverageReport& r) {
    nlohmann::json docs = nlohmann::json::array();
    for (const auto& d : r.docs)
        docs.push_back({{"doc", d.doc},
                        {"total", d.total},
                        {"covered", d.covered},
                        {"not_covered", d.not_covered}});
    nlohmann::json j{{"sim_threshold", r.sim_threshold},
                     {"total", r.total},
                     {"covered", r.covered},
                     {"not_covered", r.not_covered},
                     {"docs", docs}};
    j["warning"] = r.warning ? nlohmann::json(*r.warning) : nlohmann::json();
    return j;
}

}  // namespace nspg
