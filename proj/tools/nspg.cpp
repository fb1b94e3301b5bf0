#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nspg/adapter.hpp"
#include "nspg/assertgen.hpp"
#include "nspg/augment.hpp"
#include "nspg/classify.hpp"
#include "nspg/config.hpp"
#include "nspg/corpus.hpp"
#include "nspg/errors.hpp"
#include "nspg/extract.hpp"
#include "nspg/formalize.hpp"
#include "nspg/lexicon.hpp"

namespace {

using namespace nspg;

// Data goes to --out when given, otherwise to standard output; the summary
// takes whichever stream the data left free.
void emit_summary(const nlohmann::json& summary, bool data_on_stdout) {
    (data_on_stdout ? std::cerr : std::cout) << summary.dump() << "\n";
}

std::uint64_t require_seed(const CLI::App& sub, std::uint64_t flag_value, const RunConfig& cfg) {
    if (sub.count("--seed") > 0) return flag_value;
    if (cfg.seed) return *cfg.seed;
    throw ValidationError(sub.get_name() + " requires --seed (or seed= in the config file)");
}

// Owns whichever mask filler the flags select.
struct FillerBundle {
    RulesFiller rules;
    std::unique_ptr<AdapterConnection> connection;
    std::unique_ptr<AdapterFiller> adapter;
    MaskFiller* active;

    explicit FillerBundle(const Lexicon& lex) : rules(lex), active(&rules) {}
};

std::unique_ptr<FillerBundle> make_filler(const std::string& kind, const std::string& endpoint,
                                          double timeout, const Lexicon& lex) {
    auto bundle = std::make_unique<FillerBundle>(lex);
    if (kind == "rules") return bundle;
    if (kind != "adapter") throw ConfigError("unknown filler kind: " + kind);
    std::string spec = resolve_adapter_endpoint(endpoint);
    if (spec.empty())
        throw ConfigError("adapter filler needs an endpoint: pass --adapter, set adapter= in the "
                          "config, or export NSPG_ADAPTER");
    AdapterOptions options;
    options.timeout_seconds = timeout;
    bundle->connection = std::make_unique<AdapterConnection>(spec, options);
    bundle->adapter = std::make_unique<AdapterFiller>(*bundle->connection, lex);
    bundle->active = bundle->adapter.get();
    return bundle;
}

void report_filler_warnings(const FillerBundle& bundle) {
    if (!bundle.adapter) return;
    for (const auto& warning : bundle.adapter->warnings())
        std::cerr << "warning: " << warning << "\n";
}

struct IngestOpts {
    std::vector<std::string> docs;
    std::string out;
    std::string format;
    int min_words = kDefaultMinWords;
    bool keep_short = false;
};

int run_ingest(const IngestOpts& opt) {
    DocFormat format = parse_doc_format(opt.format);
    std::vector<CorpusEntry> entries;
    std::size_t segmented = 0;
    for (const auto& doc : opt.docs) {
        std::vector<SentenceRecord> records = ingest_document(doc, format);
        segmented += records.size();
        if (!opt.keep_short) records = filter_short(records, opt.min_words);
        for (auto& rec : records) entries.push_back({std::move(rec), std::nullopt, std::nullopt});
    }
    validate_corpus(entries);
    if (opt.out.empty())
        save_corpus(entries, std::cout);
    else
        save_corpus(entries, opt.out);
    nlohmann::json summary{{"command", "ingest"},
                           {"docs", opt.docs.size()},
                           {"sentences", segmented},
                           {"kept", entries.size()}};
    emit_summary(summary, opt.out.empty());
    return 0;
}

struct AugmentOpts {
    std::string in;
    std::string out;
    std::string ops = "rs,rd,sr,ri";
    std::uint64_t seed = 0;
    int multiplicity = 1;
    bool no_originals = false;
};

int run_augment(const AugmentOpts& opt, const Lexicon& lex) {
    std::vector<CorpusEntry> entries = load_corpus(std::filesystem::path(opt.in));
    AugmentOptions options{opt.multiplicity, !opt.no_originals};
    AugmentResult result = augment_corpus(entries, parse_aug_ops(opt.ops), lex, opt.seed, options);
    if (opt.out.empty())
        save_corpus(result.entries, std::cout);
    else
        save_corpus(result.entries, opt.out);
    nlohmann::json produced(result.produced);
    nlohmann::json summary{{"command", "augment"},
                           {"in", entries.size()},
                           {"out", result.entries.size()},
                           {"produced", produced},
                           {"seed", opt.seed}};
    emit_summary(summary, opt.out.empty());
    return 0;
}

struct FormalizeOpts {
    std::string in;
    std::string out;
    std::string filler = "rules";
    std::string adapter;
    double timeout = 30.0;
};

int run_formalize(const FormalizeOpts& opt, const Lexicon& lex) {
    std::vector<CorpusEntry> entries = load_corpus(std::filesystem::path(opt.in));
    auto filler = make_filler(opt.filler, opt.adapter, opt.timeout, lex);
    for (auto& entry : entries) entry.rec = formalize_sentence(entry.rec, *filler->active, lex);
    report_filler_warnings(*filler);
    if (opt.out.empty())
        save_corpus(entries, std::cout);
    else
        save_corpus(entries, opt.out);
    std::size_t warnings = filler->adapter ? filler->adapter->warnings().size() : 0;
    nlohmann::json summary{{"command", "formalize"},
                           {"sentences", entries.size()},
                           {"filler", opt.filler},
                           {"warnings", warnings}};
    emit_summary(summary, opt.out.empty());
    return 0;
}

struct TrainOpts {
    std::string dataset;
    std::string variant;
    std::string kind;
    std::string out;
    std::uint64_t seed = 0;
    Hyperparameters hyper;
    std::string filler = "rules";
    std::string adapter;
    double timeout = 30.0;
};

int run_train(const TrainOpts& opt, const Lexicon& lex) {
    std::filesystem::path dir(opt.dataset);
    std::vector<LabeledExample> train = load_labeled(dir / "train.jsonl");
    std::vector<LabeledExample> test;
    if (std::filesystem::exists(dir / "test.jsonl")) test = load_labeled(dir / "test.jsonl");

    auto filler = make_filler(opt.filler, opt.adapter, opt.timeout, lex);
    VariantSplit split =
        build_variant(train, test, parse_variant(opt.variant), *filler->active, lex);
    report_filler_warnings(*filler);

    Hyperparameters hyper = opt.hyper;
    hyper.seed = opt.seed;
    std::vector<double> trace;
    ClassifierModel model = train_logreg(split.train, opt.kind, hyper, &trace);
    save_model(model, opt.out);
    nlohmann::json summary{{"command", "train"},        {"variant", opt.variant},
                           {"kind", opt.kind},          {"train_size", split.train.size()},
                           {"test_size", split.test.size()}, {"final_loss", trace.back()},
                           {"model", opt.out}};
    emit_summary(summary, false);
    return 0;
}

struct EvalOpts {
    std::string model;
    std::string dataset;
    double threshold = kDecisionThreshold;
};

int run_eval(const EvalOpts& opt) {
    ClassifierModel model = load_model(opt.model);
    std::vector<LabeledExample> examples = load_labeled(opt.dataset);
    Metrics metrics = evaluate(model, examples, opt.threshold);
    std::cout << metrics_to_json(metrics).dump() << "\n";
    return 0;
}

struct ExtractOpts {
    std::string model;
    std::string adapter;
    std::vector<std::string> docs;
    std::string in;
    std::string out;
    std::string summary_path;
    std::string format;
    int min_words = kDefaultMinWords;
    double threshold = kDecisionThreshold;
    double timeout = 30.0;
};

int run_extract(const ExtractOpts& opt) {
    if (!opt.model.empty() && !opt.adapter.empty())
        throw ValidationError("pass either --model or --adapter, not both");

    std::vector<SentenceRecord> records;
    if (!opt.in.empty())
        for (auto& entry : load_corpus(std::filesystem::path(opt.in)))
            records.push_back(std::move(entry.rec));
    DocFormat format = parse_doc_format(opt.format);
    for (const auto& doc : opt.docs)
        for (auto& rec : ingest_document(doc, format)) records.push_back(std::move(rec));
    if (records.empty()) throw ValidationError("no input sentences: pass --doc and/or --in");

    ClassifierModel model;
    std::unique_ptr<AdapterConnection> connection;
    SentenceScorer scorer;
    if (!opt.model.empty()) {
        model = load_model(opt.model);
        scorer = scorer_for(model);
    } else {
        std::string spec = resolve_adapter_endpoint(opt.adapter);
        if (spec.empty())
            throw ValidationError("pass --model or --adapter (or export NSPG_ADAPTER)");
        AdapterOptions options;
        options.timeout_seconds = opt.timeout;
        connection = std::make_unique<AdapterConnection>(spec, options);
        scorer = [&connection](const SentenceRecord& rec) {
            return connection->classify(rec.text);
        };
    }

    ExtractionResult result = extract_properties(scorer, records, opt.min_words, opt.threshold);
    save_properties(result.properties, opt.out);
    nlohmann::json summary = extraction_to_json(result);
    std::cout << summary.dump() << "\n";
    if (!opt.summary_path.empty()) {
        std::ofstream sout(opt.summary_path);
        if (!sout) throw IoError("cannot write " + opt.summary_path);
        sout << summary.dump() << "\n";
    }
    if (result.failure) {
        std::cerr << "error: extraction stopped early: " << *result.failure << "\n";
        return 2;
    }
    return 0;
}

struct CoverageOpts {
    std::string props;
    std::string dv;
    std::string out;
    double threshold = kDefaultSimThreshold;
};

int run_coverage(const CoverageOpts& opt) {
    std::vector<PropertyRecord> properties = load_properties(opt.props);
    std::vector<DvSentence> dv = load_dv_sentences(opt.dv);
    CoverageReport report = dv_coverage(properties, dv, opt.threshold);
    if (!report.warning.empty()) std::cerr << "warning: " << report.warning << "\n";
    save_properties(properties, opt.out.empty() ? opt.props : opt.out);
    std::cout << coverage_to_json(report).dump() << "\n";
    return 0;
}

struct AssertgenOpts {
    std::string props;
    std::string regmap;
    std::string verbmap;
    std::string out;
    std::string clock = "clk";
    std::string reset = "rst";
};

int run_assertgen(const AssertgenOpts& opt, const Lexicon& lex) {
    std::vector<AssertionRequest> inputs = load_assertion_inputs(opt.props);
    RegisterMap map = load_register_map(opt.regmap);
    VerbOperatorTable verbs =
        opt.verbmap.empty() ? default_verb_table() : load_verb_table(opt.verbmap);
    AssertionConfig config{opt.clock, opt.reset};

    std::vector<Assertion> assertions;
    for (const auto& input : inputs) {
        Assertion a = generate_assertion(input, map, verbs, lex, config);
        for (const auto& note : a.diagnostics)
            std::cerr << "note: " << a.property_id << ": " << note << "\n";
        std::vector<std::string> problems = validate_sva(a.sva_text);
        if (!problems.empty())
            throw GenerationError("generated assertion for " + a.property_id +
                                  " fails validation: " + problems.front());
        assertions.push_back(std::move(a));
    }

    if (opt.out.empty()) {
        for (std::size_t i = 0; i < assertions.size(); ++i) {
            if (i > 0) std::cout << "\n";
            std::cout << render_assertion(assertions[i]);
        }
    } else {
        save_assertions(assertions, opt.out);
    }
    nlohmann::json summary{{"command", "assertgen"},
                           {"design", map.design},
                           {"assertions", assertions.size()}};
    emit_summary(summary, opt.out.empty());
    return 0;
}

struct ReportOpts {
    std::vector<std::string> extraction;
    std::vector<std::string> props;
};

struct ReportRow {
    std::size_t sentences = 0;
    std::size_t extracted = 0;
    std::set<std::string> properties;
    std::size_t covered = 0;
    std::size_t not_covered = 0;
    std::size_t unknown = 0;
};

int run_report(const ReportOpts& opt) {
    std::vector<std::string> order;
    std::map<std::string, ReportRow> rows;
    auto row_for = [&](const std::string& doc) -> ReportRow& {
        if (!rows.count(doc)) order.push_back(doc);
        return rows[doc];
    };

    for (const auto& path : opt.extraction) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open " + path);
        nlohmann::json j;
        try {
            in >> j;
            for (const auto& d : j.at("docs")) {
                ReportRow& row = row_for(d.at("doc").get<std::string>());
                row.sentences += d.at("processed").get<std::size_t>();
                row.extracted += d.at("extracted").get<std::size_t>();
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path + ": invalid extraction summary: " + e.what());
        }
    }
    for (const auto& path : opt.props) {
        for (const auto& p : load_properties(path)) {
            ReportRow& row = row_for(p.sentence.doc);
            row.properties.insert(to_lower(p.sentence.text));
            if (!p.covered_by_dv)
                ++row.unknown;
            else if (*p.covered_by_dv)
                ++row.covered;
            else
                ++row.not_covered;
        }
    }

    const std::vector<std::string> headers = {"IP",         "Sentences",     "Extracted",
                                              "Properties", "Covered by DV", "Not covered by DV"};
    std::vector<std::vector<std::string>> table;
    ReportRow total;
    bool total_known = true;
    for (const auto& doc : order) {
        const ReportRow& row = rows[doc];
        bool known = row.unknown == 0;
        table.push_back({doc, std::to_string(row.sentences), std::to_string(row.extracted),
                         std::to_string(row.properties.size()),
                         known ? std::to_string(row.covered) : "-",
                         known ? std::to_string(row.not_covered) : "-"});
        total.sentences += row.sentences;
        total.extracted += row.extracted;
        for (const auto& text : row.properties) total.properties.insert(doc + "\n" + text);
        total.covered += row.covered;
        total.not_covered += row.not_covered;
        if (!known) total_known = false;
    }
    table.push_back({"TOTAL", std::to_string(total.sentences), std::to_string(total.extracted),
                     std::to_string(total.properties.size()),
                     total_known ? std::to_string(total.covered) : "-",
                     total_known ? std::to_string(total.not_covered) : "-"});

    std::vector<std::size_t> widths(headers.size());
    for (std::size_t c = 0; c < headers.size(); ++c) widths[c] = headers[c].size();
    for (const auto& row : table)
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    auto print_row = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c > 0) std::cout << "  ";
            std::cout << cells[c];
            if (c + 1 < cells.size())
                std::cout << std::string(widths[c] - cells[c].size(), ' ');
        }
        std::cout << "\n";
    };
    print_row(headers);
    for (const auto& row : table) print_row(row);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc)
            config_path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0)
            config_path = arg.substr(9);
    }
    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_run_config(config_path);
    } catch (const nspg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App app{"Mines hardware documentation for security property sentences and turns them "
                 "into SystemVerilog assertions"};
    app.require_subcommand(1);
    std::vector<CLI::App*> subs;

    IngestOpts ingest;
    ingest.format = cfg.doc_format;
    ingest.min_words = cfg.min_words;
    auto* ingest_cmd = app.add_subcommand("ingest", "Segment documents into sentence records");
    subs.push_back(ingest_cmd);
    ingest_cmd->add_option("--doc", ingest.docs, "Input document (repeatable)")
        ->required()
        ->check(CLI::ExistingFile);
    ingest_cmd->add_option("--out", ingest.out, "Output records JSONL (default: stdout)");
    ingest_cmd->add_option("--format", ingest.format, "Document format: markdown|plain")
        ->capture_default_str();
    ingest_cmd->add_option("--min-words", ingest.min_words, "Short-sentence filter threshold")
        ->capture_default_str();
    ingest_cmd->add_flag("--keep-short", ingest.keep_short, "Skip the short-sentence filter");

    AugmentOpts augment;
    auto* augment_cmd =
        app.add_subcommand("augment", "Expand a corpus with data augmentation operators");
    subs.push_back(augment_cmd);
    augment_cmd->add_option("--in", augment.in, "Input corpus JSONL")
        ->required()
        ->check(CLI::ExistingFile);
    augment_cmd->add_option("--out", augment.out, "Output corpus JSONL (default: stdout)");
    augment_cmd->add_option("--ops", augment.ops, "Comma list from rs,rd,sr,ri")
        ->capture_default_str();
    augment_cmd->add_option("--seed", augment.seed, "Random seed (required)");
    augment_cmd->add_option("--multiplicity", augment.multiplicity, "Variants per op per sentence")
        ->capture_default_str();
    augment_cmd->add_flag("--no-originals", augment.no_originals,
                          "Emit augmented sentences only");

    FormalizeOpts formalize;
    formalize.adapter = cfg.adapter;
    formalize.timeout = cfg.adapter_timeout;
    auto* formalize_cmd =
        app.add_subcommand("formalize", "Rewrite sentences into complete clauses");
    subs.push_back(formalize_cmd);
    formalize_cmd->add_option("--in", formalize.in, "Input corpus JSONL")
        ->required()
        ->check(CLI::ExistingFile);
    formalize_cmd->add_option("--out", formalize.out, "Output corpus JSONL (default: stdout)");
    formalize_cmd->add_option("--filler", formalize.filler, "Mask filler: rules|adapter")
        ->capture_default_str();
    formalize_cmd->add_option("--adapter", formalize.adapter,
                              "Adapter endpoint (exec:CMD or tcp://HOST:PORT)");
    formalize_cmd->add_option("--timeout", formalize.timeout, "Adapter timeout seconds")
        ->capture_default_str();

    TrainOpts train;
    train.variant = variant_name(cfg.variant);
    train.kind = cfg.classifier;
    train.hyper = cfg.hyper;
    train.adapter = cfg.adapter;
    train.timeout = cfg.adapter_timeout;
    auto* train_cmd = app.add_subcommand("train", "Train a property-sentence classifier");
    subs.push_back(train_cmd);
    train_cmd->add_option("--dataset", train.dataset, "Directory with train.jsonl [and test.jsonl]")
        ->required()
        ->check(CLI::ExistingDirectory);
    train_cmd->add_option("--variant", train.variant,
                          "Dataset variant: baseline|mt|mot|mtt|motmt")
        ->capture_default_str();
    train_cmd->add_option("--kind", train.kind, "Classifier kind: bow-logreg|tfidf-logreg")
        ->capture_default_str();
    train_cmd->add_option("--out", train.out, "Output model JSON")->required();
    train_cmd->add_option("--seed", train.seed, "Random seed (required)");
    train_cmd->add_option("--epochs", train.hyper.epochs, "Training epochs")
        ->capture_default_str();
    train_cmd->add_option("--learning-rate", train.hyper.learning_rate, "Learning rate")
        ->capture_default_str();
    train_cmd->add_option("--l2", train.hyper.l2, "L2 regularization strength")
        ->capture_default_str();
    train_cmd->add_option("--filler", train.filler, "Mask filler for modified variants")
        ->capture_default_str();
    train_cmd->add_option("--adapter", train.adapter, "Adapter endpoint for --filler adapter");
    train_cmd->add_option("--timeout", train.timeout, "Adapter timeout seconds")
        ->capture_default_str();

    EvalOpts eval;
    eval.threshold = cfg.decision_threshold;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on labeled sentences");
    subs.push_back(eval_cmd);
    eval_cmd->add_option("--model", eval.model, "Model JSON")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--dataset", eval.dataset, "Labeled sentences JSONL")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--threshold", eval.threshold, "Decision threshold")
        ->capture_default_str();

    ExtractOpts extract;
    extract.adapter = cfg.adapter;
    extract.format = cfg.doc_format;
    extract.min_words = cfg.min_words;
    extract.threshold = cfg.decision_threshold;
    extract.timeout = cfg.adapter_timeout;
    auto* extract_cmd =
        app.add_subcommand("extract", "Extract property sentences from documentation");
    subs.push_back(extract_cmd);
    extract_cmd->add_option("--model", extract.model, "Model JSON scorer")
        ->check(CLI::ExistingFile);
    extract_cmd->add_option("--adapter", extract.adapter, "Adapter endpoint scorer");
    extract_cmd->add_option("--doc", extract.docs, "Input document (repeatable)")
        ->check(CLI::ExistingFile);
    extract_cmd->add_option("--in", extract.in, "Pre-segmented records JSONL")
        ->check(CLI::ExistingFile);
    extract_cmd->add_option("--out", extract.out, "Output properties JSONL")->required();
    extract_cmd->add_option("--summary", extract.summary_path, "Also write the summary JSON here");
    extract_cmd->add_option("--format", extract.format, "Document format: markdown|plain")
        ->capture_default_str();
    extract_cmd->add_option("--min-words", extract.min_words, "Short-sentence filter threshold")
        ->capture_default_str();
    extract_cmd->add_option("--threshold", extract.threshold, "Decision threshold")
        ->capture_default_str();
    extract_cmd->add_option("--timeout", extract.timeout, "Adapter timeout seconds")
        ->capture_default_str();

    CoverageOpts coverage;
    coverage.threshold = cfg.sim_threshold;
    auto* coverage_cmd =
        app.add_subcommand("coverage", "Mark properties covered by DV test descriptions");
    subs.push_back(coverage_cmd);
    coverage_cmd->add_option("--props", coverage.props, "Properties JSONL")
        ->required()
        ->check(CLI::ExistingFile);
    coverage_cmd->add_option("--dv", coverage.dv, "DV sentences JSONL")
        ->required()
        ->check(CLI::ExistingFile);
    coverage_cmd->add_option("--out", coverage.out,
                             "Updated properties JSONL (default: rewrite --props)");
    coverage_cmd->add_option("--threshold", coverage.threshold, "Cosine similarity threshold")
        ->capture_default_str();

    AssertgenOpts assertgen;
    assertgen.clock = cfg.clock;
    assertgen.reset = cfg.reset;
    auto* assertgen_cmd =
        app.add_subcommand("assertgen", "Generate SystemVerilog assertions from properties");
    subs.push_back(assertgen_cmd);
    assertgen_cmd->add_option("--props", assertgen.props, "Property sentences JSONL")
        ->required()
        ->check(CLI::ExistingFile);
    assertgen_cmd->add_option("--regmap", assertgen.regmap, "Register map JSON")
        ->required()
        ->check(CLI::ExistingFile);
    assertgen_cmd->add_option("--verbmap", assertgen.verbmap,
                              "Verb operator table JSON (default: built-in table)")
        ->check(CLI::ExistingFile);
    assertgen_cmd->add_option("--out", assertgen.out, "Output .sva file (default: stdout)");
    assertgen_cmd->add_option("--clock", assertgen.clock, "Clock signal")->capture_default_str();
    assertgen_cmd->add_option("--reset", assertgen.reset, "Reset signal")->capture_default_str();

    ReportOpts report;
    auto* report_cmd =
        app.add_subcommand("report", "Render the per-IP extraction and coverage table");
    subs.push_back(report_cmd);
    report_cmd->add_option("--extraction", report.extraction,
                           "Extraction summary JSON (repeatable)")
        ->required()
        ->check(CLI::ExistingFile);
    report_cmd->add_option("--props", report.props, "Properties JSONL (repeatable)")
        ->required()
        ->check(CLI::ExistingFile);

    std::string config_echo;
    app.add_option("--config", config_echo, "Run configuration file (key=value lines)");
    for (auto* sub : subs)
        sub->add_option("--config", config_echo, "Run configuration file (key=value lines)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        Lexicon lex = load_lexicon(cfg.lexicon_dir);
        if (*ingest_cmd) return run_ingest(ingest);
        if (*augment_cmd) {
            augment.seed = require_seed(*augment_cmd, augment.seed, cfg);
            return run_augment(augment, lex);
        }
        if (*formalize_cmd) return run_formalize(formalize, lex);
        if (*train_cmd) {
            train.seed = require_seed(*train_cmd, train.seed, cfg);
            return run_train(train, lex);
        }
        if (*eval_cmd) return run_eval(eval);
        if (*extract_cmd) return run_extract(extract);
        if (*coverage_cmd) return run_coverage(coverage);
        if (*assertgen_cmd) return run_assertgen(assertgen, lex);
        if (*report_cmd) return run_report(report);
        std::cerr << "error: no subcommand selected\n";
        return 1;
    } catch (const AdapterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nspg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
