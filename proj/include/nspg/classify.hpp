#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nspg/corpus.hpp"
#include "nspg/errors.hpp"
#include "nspg/text.hpp"

// Bag-of-words and TF-IDF featurizers with a logistic-regression trainer,
// plus the evaluation metrics.  Sentences are tokenized lowercase with
// register paths ("aes.ctrl") kept as single features.

namespace nspg {

using FeatureVector = std::map<int, double>;
using Vocabulary = std::map<std::string, int>;

inline Vocabulary build_vocabulary(const std::vector<std::string>& texts) {
    Vocabulary vocab;
    for (const auto& text : texts) {
        for (const auto& tok : classifier_tokens(text)) vocab.emplace(tok, 0);
    }
    int index = 0;
    for (auto& [tok, idx] : vocab) idx = index++;
    return vocab;
}

inline FeatureVector featurize_bow(std::string_view text, const Vocabulary& vocab) {
    FeatureVector out;
    for (const auto& tok : classifier_tokens(text)) {
        auto it = vocab.find(tok);
        if (it != vocab.end()) out[it->second] += 1.0;
    }
    return out;
}

struct TfidfStats {
    Vocabulary vocab;
    std::vector<double> idf;  // indexed by vocabulary index
};

// idf(t) = ln((1+N)/(1+df(t))) + 1 over the fitting corpus.
inline TfidfStats fit_tfidf(const std::vector<std::string>& texts) {
    if (texts.empty()) throw ValidationError("cannot fit tf-idf on an empty corpus");
    TfidfStats stats;
    stats.vocab = build_vocabulary(texts);
    std::vector<int> df(stats.vocab.size(), 0);
    for (const auto& text : texts) {
        std::map<std::string, int> seen;
        for (const auto& tok : classifier_tokens(text)) seen.emplace(tok, 0);
        for (const auto& [tok, unused] : seen) df[stats.vocab.at(tok)] += 1;
    }
    double n = static_cast<double>(texts.size());
    stats.idf.resize(df.size());
    for (std::size_t i = 0; i < df.size(); ++i) {
        stats.idf[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[i]))) + 1.0;
    }
    return stats;
}

// tf(t)·idf(t), L2-normalized (zero vector stays zero).
inline FeatureVector featurize_tfidf(std::string_view text, const Vocabulary& vocab,
                                     const std::vector<double>& idf) {
    FeatureVector out = featurize_bow(text, vocab);
    double norm2 = 0.0;
    for (auto& [idx, value] : out) {
        value *= idf[static_cast<std::size_t>(idx)];
        norm2 += value * value;
    }
    if (norm2 > 0.0) {
        double inv = 1.0 / std::sqrt(norm2);
        for (auto& [idx, value] : out) value *= inv;
    }
    return out;
}

struct Hyperparameters {
    double learning_rate = 0.1;
    int epochs = 300;
    double l2 = 1e-4;
    std::uint64_t seed = 0;

    bool operator==(const Hyperparameters&) const = default;
};

inline constexpr std::string_view kBowLogreg = "bow-logreg";
inline constexpr std::string_view kTfidfLogreg = "tfidf-logreg";

struct ClassifierModel {
    std::string kind;  // "bow-logreg" or "tfidf-logreg"
    Vocabulary vocabulary;
    std::vector<double> idf;  // present iff kind == "tfidf-logreg"
    std::vector<double> weights;
    double bias = 0.0;
    Hyperparameters hyper;

    bool operator==(const ClassifierModel&) const = default;
};

inline FeatureVector featurize(const ClassifierModel& model, std::string_view text) {
    if (model.kind == kTfidfLogreg) return featurize_tfidf(text, model.vocabulary, model.idf);
    return featurize_bow(text, model.vocabulary);
}

namespace detail {

inline double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

inline double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

inline double linear_score(const ClassifierModel& model, const FeatureVector& x) {
    double z = model.bias;
    for (const auto& [idx, value] : x) z += model.weights[static_cast<std::size_t>(idx)] * value;
    return z;
}

}  // namespace detail

inline double predict(const ClassifierModel& model, std::string_view text) {
    return detail::sigmoid(detail::linear_score(model, featurize(model, text)));
}

// Mean logistic loss plus the L2 penalty, as minimized by train_logreg.
inline double logreg_loss(const ClassifierModel& model,
                          const std::vector<LabeledExample>& examples) {
    if (examples.empty()) throw ValidationError("cannot compute loss on an empty set");
    double loss = 0.0;
    for (const auto& ex : examples) {
        double z = detail::linear_score(model, featurize(model, ex.record.text));
        loss += detail::softplus(z) - static_cast<double>(ex.label) * z;
    }
    loss /= static_cast<double>(examples.size());
    double penalty = 0.0;
    for (double w : model.weights) penalty += w * w;
    return loss + 0.5 * model.hyper.l2 * penalty;
}

// Full-batch gradient descent on L2-regularized logistic loss.  Weights start
// at zero, so training is deterministic; the bias is not regularized.  When
// loss_trace is given it receives the loss before each epoch and after the
// last one (epochs+1 entries).
inline ClassifierModel train_logreg(const std::vector<LabeledExample>& examples,
                                    std::string_view kind, const Hyperparameters& hyper = {},
                                    std::vector<double>* loss_trace = nullptr) {
    if (kind != kBowLogreg && kind != kTfidfLogreg)
        throw ConfigError("unknown classifier kind: " + std::string(kind));
    bool has_pos = false, has_neg = false;
    for (const auto& ex : examples) (ex.label == 1 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) throw ValidationError("degenerate labels: need both classes");

    ClassifierModel model;
    model.kind = std::string(kind);
    model.hyper = hyper;
    std::vector<std::string> texts;
    texts.reserve(examples.size());
    for (const auto& ex : examples) texts.push_back(ex.record.text);
    if (kind == kTfidfLogreg) {
        TfidfStats stats = fit_tfidf(texts);
        model.vocabulary = std::move(stats.vocab);
        model.idf = std::move(stats.idf);
    } else {
        model.vocabulary = build_vocabulary(texts);
    }
    model.weights.assign(model.vocabulary.size(), 0.0);

    std::vector<FeatureVector> features;
    features.reserve(examples.size());
    for (const auto& ex : examples) features.push_back(featurize(model, ex.record.text));

    double n = static_cast<double>(examples.size());
    std::vector<double> grad(model.weights.size());
    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        if (loss_trace) loss_trace->push_back(logreg_loss(model, examples));
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_bias = 0.0;
        for (std::size_t i = 0; i < features.size(); ++i) {
            double err = detail::sigmoid(detail::linear_score(model, features[i])) -
                         static_cast<double>(examples[i].label);
            for (const auto& [idx, value] : features[i])
                grad[static_cast<std::size_t>(idx)] += err * value;
            grad_bias += err;
        }
        for (std::size_t j = 0; j < model.weights.size(); ++j) {
            model.weights[j] -=
                hyper.learning_rate * (grad[j] / n + hyper.l2 * model.weights[j]);
        }
        model.bias -= hyper.learning_rate * grad_bias / n;
    }
    if (loss_trace) loss_trace->push_back(logreg_loss(model, examples));
    return model;
}

struct Metrics {
    long long tp = 0, fp = 0, fn = 0, tn = 0;
    double accuracy = 0.0, recall = 0.0, precision = 0.0, f1 = 0.0;
    // True when any of the recall/precision/f1 denominators was zero and the
    // affected metric was reported as 0.
    bool zero_denominator = false;
};

inline Metrics compute_metrics(long long tp, long long fp, long long fn, long long tn) {
    Metrics m;
    m.tp = tp;
    m.fp = fp;
    m.fn = fn;
    m.tn = tn;
    long long all = tp + fp + fn + tn;
    if (all > 0) {
        m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(all);
    } else {
        m.zero_denominator = true;
    }
    if (tp + fn > 0) {
        m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    } else {
        m.zero_denominator = true;
    }
    if (tp + fp > 0) {
        m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    } else {
        m.zero_denominator = true;
    }
    if (m.recall + m.precision > 0.0) {
        m.f1 = 2.0 * m.recall * m.precision / (m.recall + m.precision);
    } else {
        m.zero_denominator = true;
    }
    return m;
}

inline constexpr double kDecisionThreshold = 0.5;

// Positive prediction iff score is strictly above the threshold.
inline Metrics evaluate(const ClassifierModel& model, const std::vector<LabeledExample>& examples,
                        double threshold = kDecisionThreshold) {
    if (examples.empty()) throw ValidationError("cannot evaluate on an empty set");
    long long tp = 0, fp = 0, fn = 0, tn = 0;
    for (const auto& ex : examples) {
        bool positive = predict(model, ex.record.text) > threshold;
        if (ex.label == 1) {
            (positive ? tp : fn) += 1;
        } else {
            (positive ? fp : tn) += 1;
        }
    }
    return compute_metrics(tp, fp, fn, tn);
}

inline nlohmann::json metrics_to_json(const Metrics& m, double threshold = kDecisionThreshold) {
    return nlohmann::json{{"tp", m.tp},
                          {"fp", m.fp},
                          {"fn", m.fn},
                          {"tn", m.tn},
                          {"accuracy", m.accuracy},
                          {"recall", m.recall},
                          {"precision", m.precision},
                          {"f1", m.f1},
                          {"zero_denominator", m.zero_denominator},
                          {"threshold", threshold}};
}

inline constexpr int kModelFormatVersion = 1;

inline void save_model(const ClassifierModel& model, const std::filesystem::path& path) {
    nlohmann::json j;
    j["format"] = "nspg-model";
    j["version"] = kModelFormatVersion;
    j["kind"] = model.kind;
    j["vocabulary"] = model.vocabulary;
    j["idf"] = model.idf;
    j["weights"] = model.weights;
    j["bias"] = model.bias;
    j["hyper"] = {{"learning_rate", model.hyper.learning_rate},
                  {"epochs", model.hyper.epochs},
                  {"l2", model.hyper.l2},
                  {"seed", model.hyper.seed}};
    std::ofstream out(path);
    if (!out) throw IoError("cannot write model file: " + path.string());
    out << j.dump(2) << "\n";
    if (!out.flush()) throw IoError("failed writing model file: " + path.string());
}

inline ClassifierModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read model file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid model file: ") + e.what(), 0);
    }
    try {
        if (j.at("format") != "nspg-model")
            throw ParseError("not a model file: " + path.string(), 0);
        int version = j.at("version").get<int>();
        if (version != kModelFormatVersion)
            throw ParseError("unsupported model version " + std::to_string(version) +
                                 " (expected " + std::to_string(kModelFormatVersion) + ")",
                             0);
        ClassifierModel model;
        model.kind = j.at("kind").get<std::string>();
        if (model.kind != kBowLogreg && model.kind != kTfidfLogreg)
            throw ParseError("unknown model kind: " + model.kind, 0);
        model.vocabulary = j.at("vocabulary").get<Vocabulary>();
        model.idf = j.at("idf").get<std::vector<double>>();
        model.weights = j.at("weights").get<std::vector<double>>();
        model.bias = j.at("bias").get<double>();
        const auto& h = j.at("hyper");
        model.hyper.learning_rate = h.at("learning_rate").get<double>();
        model.hyper.epochs = h.at("epochs").get<int>();
        model.hyper.l2 = h.at("l2").get<double>();
        model.hyper.seed = h.at("seed").get<std::uint64_t>();
        if (model.weights.size() != model.vocabulary.size())
            throw ParseError("model weight count does not match vocabulary", 0);
        if (model.kind == kTfidfLogreg && model.idf.size() != model.vocabulary.size())
            throw ParseError("model idf count does not match vocabulary", 0);
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid model file: ") + e.what(), 0);
    }
}

}  // namespace nspg
