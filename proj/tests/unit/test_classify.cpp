#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nspg/classify.hpp"

using namespace nspg;

namespace {

LabeledExample example(const std::string& doc, int ordinal, const std::string& text, int label) {
    return {make_sentence_record(doc, "", ordinal, text), label};
}

// Positives carry "grant", negatives carry "deny"; filler tokens are shared.
std::vector<LabeledExample> separable_fixture() {
    return {
        example("fix", 1, "The arbiter shall grant access to the requesting host port.", 1),
        example("fix", 2, "The unit must grant one credit per accepted transfer cycle.", 1),
        example("fix", 3, "Hardware will grant the lock once the counter reaches zero.", 1),
        example("fix", 4, "The bridge should grant back-to-back reads on the fast path.", 1),
        example("fix", 5, "The arbiter may deny access to the requesting host port.", 0),
        example("fix", 6, "The unit can deny one credit per accepted transfer cycle.", 0),
        example("fix", 7, "Hardware will deny the lock once the counter reaches zero.", 0),
        example("fix", 8, "The bridge should deny back-to-back reads on the fast path.", 0),
    };
}

std::filesystem::path minicorpus_path() {
    return std::filesystem::path(NSPG_DATA_DIR) / "minicorpus.jsonl";
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("vocabulary indices are sorted and dense") {
    auto vocab = build_vocabulary({"read the register", "read data now"});
    REQUIRE(vocab.size() == 5);
    CHECK(vocab.at("data") == 0);
    CHECK(vocab.at("now") == 1);
    CHECK(vocab.at("read") == 2);
    CHECK(vocab.at("register") == 3);
    CHECK(vocab.at("the") == 4);
}

TEST_CASE("bow counts repeated tokens") {
    Vocabulary vocab{{"read", 0}, {"register", 1}};
    auto x = featurize_bow("Read read the register.", vocab);
    REQUIRE(x.size() == 2);
    CHECK(x.at(0) == 2.0);
    CHECK(x.at(1) == 1.0);
}

TEST_CASE("bow of out-of-vocabulary text is empty") {
    Vocabulary vocab{{"alpha", 0}};
    CHECK(featurize_bow("beta gamma delta", vocab).empty());
}

TEST_CASE("bow mass equals the number of in-vocabulary tokens") {
    std::vector<std::string> pool = {"clk",  "rst",   "fifo",  "read", "write",
                                     "flag", "mode",  "timer", "host", "bus"};
    Vocabulary vocab = build_vocabulary({"clk rst fifo read write"});
    Rng rng(20260822u);
    for (int it = 0; it < 200; ++it) {
        std::string text;
        int in_vocab = 0;
        std::size_t len = 1 + rng.pick(12);
        for (std::size_t i = 0; i < len; ++i) {
            const std::string& w = pool[rng.pick(pool.size())];
            if (!text.empty()) text += ' ';
            text += w;
            if (vocab.count(w)) ++in_vocab;
        }
        double mass = 0.0;
        for (const auto& [idx, value] : featurize_bow(text, vocab)) mass += value;
        REQUIRE(mass == static_cast<double>(in_vocab));
    }
}

TEST_CASE("idf of a term present in every document is exactly one") {
    auto stats = fit_tfidf({"alpha beta", "alpha gamma", "alpha delta"});
    CHECK(stats.idf[static_cast<std::size_t>(stats.vocab.at("alpha"))] == 1.0);
}

TEST_CASE("idf of a term in one of two documents matches ln(3/2)+1") {
    auto stats = fit_tfidf({"alpha beta", "alpha gamma"});
    double idf = stats.idf[static_cast<std::size_t>(stats.vocab.at("beta"))];
    CHECK(idf == Catch::Approx(1.4054651081081644).margin(1e-12));
    CHECK(idf == std::log(1.5) + 1.0);
}

TEST_CASE("repeated tokens in one document count once for df") {
    auto stats = fit_tfidf({"beta beta beta", "alpha gamma"});
    double idf = stats.idf[static_cast<std::size_t>(stats.vocab.at("beta"))];
    CHECK(idf == std::log(1.5) + 1.0);
}

TEST_CASE("tf-idf on an empty corpus throws") {
    CHECK_THROWS_AS(fit_tfidf({}), ValidationError);
}

TEST_CASE("tf-idf keeps term frequency ratios before normalization") {
    auto stats = fit_tfidf({"alpha beta", "alpha gamma"});
    auto x = featurize_tfidf("alpha beta beta", stats.vocab, stats.idf);
    double a = x.at(stats.vocab.at("alpha"));
    double b = x.at(stats.vocab.at("beta"));
    CHECK(b / a == Catch::Approx(2.0 * (std::log(1.5) + 1.0)).margin(1e-12));
}

TEST_CASE("tf-idf vectors have unit L2 norm, zero vector stays zero") {
    auto stats = fit_tfidf({"clk rst fifo", "read write flag", "mode timer host"});
    std::vector<std::string> pool = {"clk", "rst", "fifo", "read", "write", "oov1", "oov2"};
    Rng rng(7u);
    for (int it = 0; it < 200; ++it) {
        std::string text;
        std::size_t len = 1 + rng.pick(8);
        for (std::size_t i = 0; i < len; ++i) {
            if (!text.empty()) text += ' ';
            text += pool[rng.pick(pool.size())];
        }
        auto x = featurize_tfidf(text, stats.vocab, stats.idf);
        double norm2 = 0.0;
        for (const auto& [idx, value] : x) norm2 += value * value;
        if (x.empty()) {
            REQUIRE(norm2 == 0.0);
        } else {
            REQUIRE(norm2 == Catch::Approx(1.0).margin(1e-12));
        }
    }
    CHECK(featurize_tfidf("oov1 oov2", stats.vocab, stats.idf).empty());
}

TEST_CASE("training requires both classes") {
    std::vector<LabeledExample> ones = {example("d", 1, "alpha beta gamma", 1),
                                        example("d", 2, "delta epsilon zeta", 1)};
    CHECK_THROWS_AS(train_logreg(ones, kBowLogreg), ValidationError);
}

TEST_CASE("training rejects an unknown classifier kind") {
    CHECK_THROWS_AS(train_logreg(separable_fixture(), "svm"), ConfigError);
}

TEST_CASE("untrained model has zero weights and scores exactly one half") {
    Hyperparameters hyper;
    hyper.epochs = 0;
    auto model = train_logreg(separable_fixture(), kTfidfLogreg, hyper);
    for (double w : model.weights) REQUIRE(w == 0.0);
    CHECK(model.bias == 0.0);
    CHECK(predict(model, "the arbiter shall grant access") == 0.5);
    CHECK(predict(model, "completely unseen words") == 0.5);
}

TEST_CASE("both classifier kinds separate the grant/deny fixture") {
    auto data = separable_fixture();
    for (std::string_view kind : {kBowLogreg, kTfidfLogreg}) {
        auto model = train_logreg(data, kind);
        auto m = evaluate(model, data);
        INFO(kind);
        CHECK(m.accuracy == 1.0);
        CHECK(m.f1 == 1.0);
        CHECK_FALSE(m.zero_denominator);
    }
}

TEST_CASE("training is deterministic") {
    auto data = separable_fixture();
    auto a = train_logreg(data, kTfidfLogreg);
    auto b = train_logreg(data, kTfidfLogreg);
    CHECK(a == b);
    auto c = train_logreg(data, kBowLogreg);
    auto d = train_logreg(data, kBowLogreg);
    CHECK(c == d);
}

TEST_CASE("loss trace is non-increasing at default hyperparameters") {
    auto data = load_labeled(minicorpus_path());
    REQUIRE(data.size() == 248);
    for (std::string_view kind : {kBowLogreg, kTfidfLogreg}) {
        std::vector<double> trace;
        Hyperparameters hyper;
        auto model = train_logreg(data, kind, hyper, &trace);
        INFO(kind);
        REQUIRE(trace.size() == static_cast<std::size_t>(hyper.epochs) + 1);
        for (std::size_t i = 1; i < trace.size(); ++i) REQUIRE(trace[i] <= trace[i - 1] + 1e-12);
        CHECK(trace.back() < trace.front());
        CHECK(trace.back() == Catch::Approx(logreg_loss(model, data)).margin(1e-12));
    }
}

TEST_CASE("the bundled corpus is balanced and filter-clean") {
    auto data = load_labeled(minicorpus_path());
    REQUIRE(data.size() == 248);
    int positives = 0;
    for (const auto& ex : data) {
        positives += ex.label;
        REQUIRE(ex.record.word_count >= kDefaultMinWords);
    }
    CHECK(positives == 124);
}

TEST_CASE("scores always lie in the unit interval") {
    auto stats = fit_tfidf({"clk rst fifo read", "write flag mode timer"});
    ClassifierModel model;
    model.kind = std::string(kTfidfLogreg);
    model.vocabulary = stats.vocab;
    model.idf = stats.idf;
    model.weights.assign(model.vocabulary.size(), 0.0);
    std::vector<std::string> pool;
    for (const auto& [tok, idx] : model.vocabulary) pool.push_back(tok);
    Rng rng(99u);
    for (int it = 0; it < 300; ++it) {
        for (auto& w : model.weights) w = (rng.unit() - 0.5) * 40.0;
        model.bias = (rng.unit() - 0.5) * 20.0;
        std::string text;
        std::size_t len = rng.pick(6);
        for (std::size_t i = 0; i < len; ++i) {
            if (!text.empty()) text += ' ';
            text += pool[rng.pick(pool.size())];
        }
        double score = predict(model, text);
        REQUIRE(score >= 0.0);
        REQUIRE(score <= 1.0);
    }
}

TEST_CASE("score is monotone in the feature weight") {
    ClassifierModel model;
    model.kind = std::string(kBowLogreg);
    model.vocabulary = {{"alpha", 0}};
    model.weights = {0.0};
    double mid = predict(model, "alpha");
    CHECK(mid == 0.5);
    model.weights = {2.0};
    double high = predict(model, "alpha");
    model.weights = {-2.0};
    double low = predict(model, "alpha");
    CHECK(low < mid);
    CHECK(mid < high);
    CHECK(low + high == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("metrics match the hand-computed confusion") {
    auto m = compute_metrics(3, 1, 2, 4);
    CHECK(m.accuracy == 7.0 / 10.0);
    CHECK(m.recall == 3.0 / 5.0);
    CHECK(m.precision == 3.0 / 4.0);
    CHECK(m.f1 == Catch::Approx(2.0 / 3.0).margin(1e-12));
    CHECK_FALSE(m.zero_denominator);
}

TEST_CASE("metrics agree with an independent recount on random confusions") {
    Rng rng(123456u);
    for (int it = 0; it < 1000; ++it) {
        long long bound = (it % 4 == 0) ? 3 : 50;
        long long tp = static_cast<long long>(rng.pick(static_cast<std::size_t>(bound)));
        long long fp = static_cast<long long>(rng.pick(static_cast<std::size_t>(bound)));
        long long fn = static_cast<long long>(rng.pick(static_cast<std::size_t>(bound)));
        long long tn = static_cast<long long>(rng.pick(static_cast<std::size_t>(bound)));
        auto m = compute_metrics(tp, fp, fn, tn);
        REQUIRE(m.tp + m.fp + m.fn + m.tn == tp + fp + fn + tn);
        long long all = tp + fp + fn + tn;
        double acc = all > 0 ? static_cast<double>(tp + tn) / static_cast<double>(all) : 0.0;
        double rec = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        double pre = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        double f1 = rec + pre > 0.0 ? 2.0 * rec * pre / (rec + pre) : 0.0;
        bool flagged = all == 0 || tp + fn == 0 || tp + fp == 0 || rec + pre == 0.0;
        REQUIRE(m.accuracy == Catch::Approx(acc).margin(1e-12));
        REQUIRE(m.recall == Catch::Approx(rec).margin(1e-12));
        REQUIRE(m.precision == Catch::Approx(pre).margin(1e-12));
        REQUIRE(m.f1 == Catch::Approx(f1).margin(1e-12));
        REQUIRE(m.zero_denominator == flagged);
    }
}

TEST_CASE("evaluate matches a manual confusion count") {
    ClassifierModel model;
    model.kind = std::string(kBowLogreg);
    std::vector<std::string> words = {"w0", "w1", "w2", "w3", "w4", "w5", "w6", "w7"};
    for (std::size_t i = 0; i < words.size(); ++i) model.vocabulary[words[i]] = static_cast<int>(i);
    model.weights.assign(words.size(), 0.0);
    Rng rng(777u);
    for (int it = 0; it < 200; ++it) {
        for (auto& w : model.weights) w = (rng.unit() - 0.5) * 6.0;
        model.bias = (rng.unit() - 0.5) * 2.0;
        std::vector<LabeledExample> data;
        long long tp = 0, fp = 0, fn = 0, tn = 0;
        for (int i = 0; i < 10; ++i) {
            const std::string& w = words[rng.pick(words.size())];
            int label = static_cast<int>(rng.pick(2));
            data.push_back(example("r", i + 1, w, label));
            bool positive = predict(model, w) > kDecisionThreshold;
            if (label == 1) {
                (positive ? tp : fn) += 1;
            } else {
                (positive ? fp : tn) += 1;
            }
        }
        auto m = evaluate(model, data);
        REQUIRE(m.tp == tp);
        REQUIRE(m.fp == fp);
        REQUIRE(m.fn == fn);
        REQUIRE(m.tn == tn);
    }
}

TEST_CASE("evaluate on an empty set throws") {
    ClassifierModel model;
    model.kind = std::string(kBowLogreg);
    CHECK_THROWS_AS(evaluate(model, {}), ValidationError);
}

TEST_CASE("zero denominators are flagged and reported as zero") {
    auto no_pos = compute_metrics(0, 0, 0, 5);
    CHECK(no_pos.accuracy == 1.0);
    CHECK(no_pos.recall == 0.0);
    CHECK(no_pos.precision == 0.0);
    CHECK(no_pos.f1 == 0.0);
    CHECK(no_pos.zero_denominator);

    auto empty = compute_metrics(0, 0, 0, 0);
    CHECK(empty.accuracy == 0.0);
    CHECK(empty.zero_denominator);

    auto all_fp = compute_metrics(0, 3, 0, 0);
    CHECK(all_fp.precision == 0.0);
    CHECK(all_fp.zero_denominator);
}

TEST_CASE("metrics serialize with every field") {
    auto j = metrics_to_json(compute_metrics(3, 1, 2, 4));
    CHECK(j.at("tp") == 3);
    CHECK(j.at("fp") == 1);
    CHECK(j.at("fn") == 2);
    CHECK(j.at("tn") == 4);
    CHECK(j.at("accuracy") == 0.7);
    CHECK(j.at("recall") == 0.6);
    CHECK(j.at("precision") == 0.75);
    CHECK(j.at("zero_denominator") == false);
    CHECK(j.at("threshold") == 0.5);
}

TEST_CASE("models round-trip through disk bit-exactly") {
    auto data = separable_fixture();
    auto probes = load_labeled(minicorpus_path());
    REQUIRE(probes.size() >= 100);
    for (std::string_view kind : {kBowLogreg, kTfidfLogreg}) {
        auto model = train_logreg(data, kind);
        auto path = temp_path("nspg_model_rt.json");
        save_model(model, path);
        auto loaded = load_model(path);
        INFO(kind);
        CHECK(loaded == model);
        for (std::size_t i = 0; i < 100; ++i)
            REQUIRE(predict(loaded, probes[i].record.text) ==
                    predict(model, probes[i].record.text));
        std::filesystem::remove(path);
    }
}

TEST_CASE("loading a missing model file throws IoError") {
    CHECK_THROWS_AS(load_model(temp_path("nspg_model_missing.json")), IoError);
}

TEST_CASE("loading a truncated model file throws ParseError") {
    auto model = train_logreg(separable_fixture(), kBowLogreg);
    auto path = temp_path("nspg_model_trunc.json");
    save_model(model, path);
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    in.close();
    std::string bytes = buf.str();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes.substr(0, bytes.size() / 2);
    out.close();
    CHECK_THROWS_AS(load_model(path), ParseError);
    std::filesystem::remove(path);
}

TEST_CASE("model header fields are validated on load") {
    auto model = train_logreg(separable_fixture(), kTfidfLogreg);
    auto path = temp_path("nspg_model_bad.json");

    auto rewrite = [&](auto&& mutate) {
        save_model(model, path);
        std::ifstream in(path);
        nlohmann::json j;
        in >> j;
        in.close();
        mutate(j);
        std::ofstream out(path, std::ios::trunc);
        out << j.dump(2);
    };

    rewrite([](nlohmann::json& j) { j["version"] = 99; });
    CHECK_THROWS_AS(load_model(path), ParseError);
    rewrite([](nlohmann::json& j) { j["format"] = "other"; });
    CHECK_THROWS_AS(load_model(path), ParseError);
    rewrite([](nlohmann::json& j) { j["kind"] = "svm"; });
    CHECK_THROWS_AS(load_model(path), ParseError);
    rewrite([](nlohmann::json& j) { j["weights"].erase(0); });
    CHECK_THROWS_AS(load_model(path), ParseError);
    rewrite([](nlohmann::json& j) { j.erase("bias"); });
    CHECK_THROWS_AS(load_model(path), ParseError);
    std::filesystem::remove(path);
}
