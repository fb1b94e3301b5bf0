#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "classify.hpp"
#include "corpus.hpp"
#include "errors.hpp"
#include "extract.hpp"
#include "formalize.hpp"
#include "lexicon.hpp"

namespace nspg {

// Run-wide defaults shared by the subcommands.  Flags override these.
struct RunConfig {
    std::optional<std::filesystem::path> lexicon_dir;
    std::string doc_format = "markdown";
    int min_words = kDefaultMinWords;
    std::optional<std::uint64_t> seed;
    std::string classifier = std::string(kTfidfLogreg);
    Hyperparameters hyper;
    std::string adapter;
    DatasetVariant variant = DatasetVariant::BASELINE;
    double decision_threshold = kDecisionThreshold;
    double sim_threshold = kDefaultSimThreshold;
    std::string clock = "clk";
    std::string reset = "rst";
    double adapter_timeout = 30.0;
};

namespace detail {

inline double config_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double parsed = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + " needs a number, got \"" + value + "\"");
    }
}

inline std::int64_t config_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        std::int64_t parsed = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + " needs an integer, got \"" + value + "\"");
    }
}

inline std::uint64_t config_seed(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        std::uint64_t parsed = std::stoull(value, &used);
        if (used != value.size() || value.front() == '-') throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + " needs an unsigned integer, got \"" + value +
                          "\"");
    }
}

}  // namespace detail

// Lines of key=value; blank lines and # comments are skipped.
inline RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    RunConfig cfg;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected key=value, got \"" + stripped + "\"");
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": empty key");
        if (!seen.insert(key).second)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": duplicate key " + key);

        if (key == "lexicon_dir") {
            cfg.lexicon_dir = std::filesystem::path(value);
        } else if (key == "doc_format") {
            parse_doc_format(value);
            cfg.doc_format = value;
        } else if (key == "min_words") {
            cfg.min_words = static_cast<int>(detail::config_int(key, value));
            if (cfg.min_words < 1) throw ConfigError("min_words must be >= 1");
        } else if (key == "seed") {
            cfg.seed = detail::config_seed(key, value);
        } else if (key == "classifier") {
            if (value != kBowLogreg && value != kTfidfLogreg)
                throw ConfigError("unknown classifier kind: " + value);
            cfg.classifier = value;
        } else if (key == "learning_rate") {
            cfg.hyper.learning_rate = detail::config_double(key, value);
            if (cfg.hyper.learning_rate <= 0.0) throw ConfigError("learning_rate must be > 0");
        } else if (key == "epochs") {
            cfg.hyper.epochs = static_cast<int>(detail::config_int(key, value));
            if (cfg.hyper.epochs < 0) throw ConfigError("epochs must be >= 0");
        } else if (key == "l2") {
            cfg.hyper.l2 = detail::config_double(key, value);
            if (cfg.hyper.l2 < 0.0) throw ConfigError("l2 must be >= 0");
        } else if (key == "adapter") {
            cfg.adapter = value;
        } else if (key == "adapter_timeout") {
            cfg.adapter_timeout = detail::config_double(key, value);
            if (cfg.adapter_timeout <= 0.0) throw ConfigError("adapter_timeout must be > 0");
        } else if (key == "variant") {
            cfg.variant = parse_variant(value);
        } else if (key == "decision_threshold") {
            cfg.decision_threshold = detail::config_double(key, value);
            if (!(cfg.decision_threshold >= 0.0 && cfg.decision_threshold < 1.0))
                throw ConfigError("decision_threshold must be in [0,1)");
        } else if (key == "sim_threshold") {
            cfg.sim_threshold = detail::config_double(key, value);
            if (!(cfg.sim_threshold > 0.0 && cfg.sim_threshold <= 1.0))
                throw ConfigError("sim_threshold must be in (0,1]");
        } else if (key == "clock") {
            if (value.empty()) throw ConfigError("clock must not be empty");
            cfg.clock = value;
        } else if (key == "reset") {
            if (value.empty()) throw ConfigError("reset must not be empty");
            cfg.reset = value;
        } else {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": unknown config key " + key);
        }
    }
    if (cfg.lexicon_dir && !std::filesystem::is_directory(*cfg.lexicon_dir))
        throw ConfigError("lexicon_dir does not exist: " + cfg.lexicon_dir->string());
    return cfg;
}

// Builtin lists, with any list present in the directory replacing its default.
inline Lexicon load_lexicon(const std::optional<std::filesystem::path>& dir) {
    Lexicon lex;
    if (!dir) return lex;
    if (!std::filesystem::is_directory(*dir))
        throw ConfigError("lexicon_dir does not exist: " + dir->string());
    auto maybe = [&](const char* name, auto&& loader) {
        auto path = *dir / name;
        if (std::filesystem::exists(path)) loader(path);
    };
    maybe("conjunctions.txt", [&](const auto& p) { lex.load_conjunctions(p); });
    maybe("verbs.txt", [&](const auto& p) { lex.load_verbs(p); });
    maybe("adjectives.txt", [&](const auto& p) { lex.load_adjectives(p); });
    maybe("adverbs.txt", [&](const auto& p) { lex.load_adverbs(p); });
    maybe("synonyms.tsv", [&](const auto& p) { lex.load_synonyms_tsv(p); });
    return lex;
}

}  // namespace nspg
