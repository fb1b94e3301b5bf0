#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "corpus.hpp"
#include "errors.hpp"
#include "formalize.hpp"
#include "lexicon.hpp"
#include "text.hpp"

namespace nspg {

// Maps documentation noun phrases (lowercased) to RTL hierarchy paths.
struct RegisterMap {
    std::string design;
    std::map<std::string, std::string> entries;

    bool operator==(const RegisterMap&) const = default;
};

// Maps predicate word patterns (lowercased) to operator templates.
struct VerbOperatorTable {
    std::map<std::string, std::string> entries;

    bool operator==(const VerbOperatorTable&) const = default;
};

inline const std::set<std::string>& operator_templates() {
    static const std::set<std::string> kTemplates{"==",  "!=",    "|->",  "$past",
                                                  "$stable", "== 0", "== 1", "== X"};
    return kTemplates;
}

namespace detail {

// Dotted RTL path: identifier segments separated by single dots.
inline bool valid_rtl_path(const std::string& path) {
    if (path.empty()) return false;
    bool segment_start = true;
    for (char c : path) {
        if (segment_start) {
            if (!(ascii_alpha(c) || c == '_')) return false;
            segment_start = false;
        } else if (c == '.') {
            segment_start = true;
        } else if (!(ascii_alnum(c) || c == '_' || c == '$')) {
            return false;
        }
    }
    return !segment_start;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return text;
}

// The JSON parser keeps only the last value of a repeated key, so duplicates
// under "entries" are collected from parser key events.
inline nlohmann::json parse_entry_file(const std::filesystem::path& path,
                                       std::vector<std::string>& duplicates) {
    std::string text = read_text_file(path);
    std::map<std::string, int> seen;
    std::string parent;
    nlohmann::json::parser_callback_t cb = [&](int depth, nlohmann::json::parse_event_t event,
                                               nlohmann::json& parsed) {
        if (event == nlohmann::json::parse_event_t::key) {
            if (depth == 1) parent = parsed.get<std::string>();
            if (depth == 2 && parent == "entries") ++seen[parsed.get<std::string>()];
        }
        return true;
    };
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text, cb);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    for (const auto& [key, count] : seen)
        if (count > 1) duplicates.push_back(key);
    return doc;
}

inline std::map<std::string, std::string> read_entries(const nlohmann::json& doc,
                                                       const std::string& what) {
    if (!doc.is_object() || !doc.contains("entries") || !doc.at("entries").is_object())
        throw ValidationError(what + " must be an object with an \"entries\" object");
    std::map<std::string, std::string> out;
    for (const auto& [key, value] : doc.at("entries").items()) {
        std::string phrase = to_lower(normalize_ws(key));
        if (phrase.empty()) throw ValidationError(what + " has an empty phrase");
        if (!value.is_string())
            throw ValidationError(what + " entry \"" + key + "\" must map to a string");
        auto [it, inserted] = out.emplace(phrase, value.get<std::string>());
        if (!inserted)
            throw ValidationError(what + " phrase collision: \"" + key + "\" duplicates \"" +
                                  phrase + "\"");
    }
    if (out.empty()) throw ValidationError(what + " has no entries");
    return out;
}

}  // namespace detail

inline RegisterMap load_register_map(const std::filesystem::path& path) {
    std::vector<std::string> duplicates;
    nlohmann::json doc = detail::parse_entry_file(path, duplicates);
    if (!duplicates.empty())
        throw ValidationError("register map " + path.string() + " phrase collision: \"" +
                              duplicates.front() + "\"");
    RegisterMap map;
    map.entries = detail::read_entries(doc, "register map " + path.string());
    if (!doc.contains("design") || !doc.at("design").is_string() ||
        doc.at("design").get<std::string>().empty())
        throw ValidationError("register map " + path.string() + " needs a \"design\" name");
    map.design = doc.at("design").get<std::string>();
    for (const auto& [phrase, rtl] : map.entries)
        if (!detail::valid_rtl_path(rtl))
            throw ValidationError("register map " + path.string() + " entry \"" + phrase +
                                  "\" has an invalid RTL path \"" + rtl + "\"");
    return map;
}

inline VerbOperatorTable load_verb_table(const std::filesystem::path& path) {
    std::vector<std::string> duplicates;
    nlohmann::json doc = detail::parse_entry_file(path, duplicates);
    if (!duplicates.empty())
        throw ValidationError("verb table " + path.string() + " pattern collision: \"" +
                              duplicates.front() + "\"");
    VerbOperatorTable table;
    table.entries = detail::read_entries(doc, "verb table " + path.string());
    for (const auto& [pattern, tmpl] : table.entries)
        if (!operator_templates().count(tmpl))
            throw ValidationError("verb table " + path.string() + " pattern \"" + pattern +
                                  "\" maps to unknown template \"" + tmpl + "\"");
    return table;
}

inline VerbOperatorTable default_verb_table() {
    VerbOperatorTable table;
    table.entries = {
        {"is set to", "== X"},    {"are set to", "== X"},
        {"is cleared", "== 0"},   {"are cleared", "== 0"},
        {"is wiped", "== 0"},     {"are wiped", "== 0"},
        {"is set", "== 1"},       {"are set", "== 1"},
        {"is asserted", "== 1"},  {"is triggered", "== 1"},
        {"stays", "$stable"},     {"remains", "$stable"},
        {"has not yet been read", "$past"},
        {"has not been read", "$past"},
        {"equals", "=="},         {"matches", "=="},
        {"differs from", "!="},
    };
    return table;
}

// One phrase match, a token span [begin, end) of the sentence.
struct NounBinding {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string phrase;
    std::string path;

    bool operator==(const NounBinding&) const = default;
};

struct BindResult {
    std::vector<NounBinding> bindings;       // textual order
    std::vector<std::string> unbound_nouns;  // NOUN tokens outside every binding
};

// Longest-match, left-to-right phrase binding over lowercased tokens.
// A phrase never straddles clause punctuation.
inline BindResult bind_nouns(const std::vector<WordToken>& tokens, const RegisterMap& map,
                             const Lexicon& lex) {
    struct Candidate {
        std::vector<std::string> words;
        const std::string* phrase;
        const std::string* path;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(map.entries.size());
    for (const auto& [phrase, path] : map.entries)
        candidates.push_back({ws_tokens(phrase), &phrase, &path});

    std::vector<std::string> low(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) low[i] = to_lower(tokens[i].core);

    BindResult out;
    std::size_t i = 0;
    while (i < tokens.size()) {
        const Candidate* best = nullptr;
        for (const auto& c : candidates) {
            if (c.words.size() > tokens.size() - i) continue;
            if (best && c.words.size() <= best->words.size()) continue;
            bool match = true;
            for (std::size_t k = 0; k < c.words.size() && match; ++k) {
                if (low[i + k] != c.words[k]) match = false;
                if (k + 1 < c.words.size() && detail::clause_trail(tokens[i + k].trail))
                    match = false;
            }
            if (match) best = &c;
        }
        if (best) {
            out.bindings.push_back({i, i + best->words.size(), *best->phrase, *best->path});
            i += best->words.size();
        } else {
            ++i;
        }
    }

    std::vector<PosTag> tags = lex.tag_pos(low);
    std::vector<bool> bound(tokens.size(), false);
    for (const auto& b : out.bindings)
        for (std::size_t k = b.begin; k < b.end; ++k) bound[k] = true;
    for (std::size_t k = 0; k < tokens.size(); ++k)
        if (!bound[k] && tags[k] == PosTag::NOUN &&
            std::find(out.unbound_nouns.begin(), out.unbound_nouns.end(), low[k]) ==
                out.unbound_nouns.end())
            out.unbound_nouns.push_back(low[k]);
    return out;
}

inline BindResult bind_nouns(const SentenceRecord& rec, const RegisterMap& map,
                             const Lexicon& lex) {
    return bind_nouns(parse_word_tokens(rec.text), map, lex);
}

struct AssertionConfig {
    std::string clock = "clk";
    std::string reset = "rst";
};

struct AssertionRequest {
    SentenceRecord sentence;
    std::optional<std::string> error_message;

    bool operator==(const AssertionRequest&) const = default;
};

struct Assertion {
    std::string property_id;
    std::string sentence_text;
    std::string body;
    std::string error_message;
    std::string sva_text;
    std::vector<NounBinding> bindings;
    std::vector<std::string> diagnostics;

    bool operator==(const Assertion&) const = default;
};

namespace detail {

struct ClauseSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::optional<std::string> conjunction;  // lowercased
};

// Condition clauses compile to the left of "|->".  "but" joins clauses
// without marking a condition; "to" continues the previous clause.
inline bool condition_conjunction(const std::string& word, const Lexicon& lex) {
    return word != "to" && word != "but" && lex.conjunction_set().count(word) > 0;
}

inline std::vector<ClauseSpan> split_clauses(const std::vector<WordToken>& tokens,
                                             const std::vector<NounBinding>& bindings,
                                             const Lexicon& lex) {
    auto inside = [&](std::size_t j) {
        for (const auto& b : bindings)
            if (j >= b.begin && j < b.end) return true;
        return false;
    };
    auto splits_clause = [&](std::size_t j) {
        std::string word = to_lower(tokens[j].core);
        return (word == "but" || lex.conjunction_set().count(word) > 0) && !inside(j);
    };

    std::vector<ClauseSpan> raw;
    std::size_t start = 0;
    auto flush = [&](std::size_t end) {
        if (end <= start) return;
        ClauseSpan span{start, end, std::nullopt};
        std::string head = to_lower(tokens[start].core);
        if (head == "but" || lex.conjunction_set().count(head) > 0) span.conjunction = head;
        raw.push_back(std::move(span));
        start = end;
    };
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        if (clause_trail(tokens[i].trail))
            flush(i + 1);
        else if (i + 1 > start && splits_clause(i + 1))
            flush(i + 1);
    }
    flush(tokens.size());

    std::vector<ClauseSpan> merged;
    for (auto& span : raw) {
        if (span.conjunction == "to" && !merged.empty())
            merged.back().end = span.end;
        else
            merged.push_back(std::move(span));
    }
    return merged;
}

inline std::string clause_text(const std::vector<WordToken>& tokens, const ClauseSpan& span,
                               bool strip_conjunction) {
    std::size_t begin = span.begin;
    if (strip_conjunction && span.conjunction) ++begin;
    std::vector<WordToken> slice(tokens.begin() + static_cast<std::ptrdiff_t>(begin),
                                 tokens.begin() + static_cast<std::ptrdiff_t>(span.end));
    if (slice.empty()) return "";
    std::string& trail = slice.back().trail;
    while (!trail.empty() && trail_punct(trail.back())) trail.pop_back();
    return join_word_tokens(slice);
}

// One expression contributed by a clause.  Bare atoms are plain RTL paths
// that a later pass may suppress in favor of more specific ones.
struct TermAtom {
    std::string expr;
    bool bare = false;
    std::vector<std::string> paths;
};

struct ClauseTerm {
    bool antecedent = false;
    std::string text;
    std::vector<TermAtom> atoms;
    std::vector<std::string> unmatched_predicates;
};

struct PatternMatch {
    const std::string* pattern = nullptr;
    const std::string* tmpl = nullptr;
    std::size_t begin = 0;
    std::size_t end = 0;
};

// Leftmost match wins; at equal positions the longest pattern wins.
inline std::optional<PatternMatch> match_pattern(const std::vector<std::string>& low,
                                                 const std::vector<bool>& bound,
                                                 const ClauseSpan& span,
                                                 const VerbOperatorTable& verbs) {
    struct Pattern {
        std::vector<std::string> words;
        const std::string* pattern;
        const std::string* tmpl;
    };
    std::vector<Pattern> patterns;
    patterns.reserve(verbs.entries.size());
    for (const auto& [pattern, tmpl] : verbs.entries)
        patterns.push_back({ws_tokens(pattern), &pattern, &tmpl});
    std::sort(patterns.begin(), patterns.end(), [](const Pattern& a, const Pattern& b) {
        if (a.words.size() != b.words.size()) return a.words.size() > b.words.size();
        return *a.pattern < *b.pattern;
    });

    for (std::size_t i = span.begin; i < span.end; ++i) {
        if (bound[i]) continue;
        for (const auto& p : patterns) {
            if (i + p.words.size() > span.end) continue;
            bool match = true;
            for (std::size_t k = 0; k < p.words.size() && match; ++k)
                if (bound[i + k] || low[i + k] != p.words[k]) match = false;
            if (match) return PatternMatch{p.pattern, p.tmpl, i, i + p.words.size()};
        }
    }
    return std::nullopt;
}

inline bool numeric_literal(const std::string& core) {
    if (core.empty() || !ascii_digit(core[0])) return false;
    for (char c : core)
        if (!(ascii_alnum(c) || c == '\'' || c == '_')) return false;
    return true;
}

inline GenerationError clause_error(const std::string& what, const std::string& clause) {
    return GenerationError(what + " in clause \"" + clause + "\"");
}

inline ClauseTerm compile_clause(const std::vector<WordToken>& tokens,
                                 const std::vector<std::string>& low,
                                 const std::vector<PosTag>& tags, const std::vector<bool>& bound,
                                 const ClauseSpan& span, const std::vector<NounBinding>& bindings,
                                 const VerbOperatorTable& verbs, const Lexicon& lex) {
    ClauseTerm term;
    term.text = clause_text(tokens, span, false);
    term.antecedent = span.conjunction && condition_conjunction(*span.conjunction, lex);

    std::vector<const NounBinding*> local;
    for (const auto& b : bindings)
        if (b.begin >= span.begin && b.end <= span.end) local.push_back(&b);

    std::optional<PatternMatch> verb = match_pattern(low, bound, span, verbs);

    std::string predicate;
    for (std::size_t i = span.begin; i < span.end; ++i) {
        if (bound[i] || tags[i] != PosTag::VERB) continue;
        if (verb && i >= verb->begin && i < verb->end) continue;
        if (!predicate.empty()) predicate += " ";
        predicate += low[i];
    }
    if (!verb && !predicate.empty()) term.unmatched_predicates.push_back(predicate);

    if (!verb) {
        // Bare references: keep the most specific paths only.
        std::vector<const NounBinding*> kept;
        for (const NounBinding* b : local) {
            bool shadowed = false;
            for (const NounBinding* other : local)
                if (other != b && starts_with(other->path, b->path + ".")) shadowed = true;
            if (!shadowed) kept.push_back(b);
        }
        std::set<std::string> emitted;
        for (const NounBinding* b : kept)
            if (emitted.insert(b->path).second) term.atoms.push_back({b->path, true, {b->path}});
        return term;
    }

    const std::string& tmpl = *verb->tmpl;
    auto need_subject = [&]() -> const NounBinding& {
        if (local.empty()) throw clause_error("no subject for \"" + *verb->pattern + "\"", term.text);
        return *local.front();
    };
    auto rhs_after_match = [&]() -> std::optional<std::string> {
        std::size_t next = verb->end;
        if (next >= span.end) return std::nullopt;
        for (const NounBinding* b : local)
            if (b->begin == next) return b->path;
        if (numeric_literal(tokens[next].core)) return tokens[next].core;
        return std::nullopt;
    };

    TermAtom atom;
    if (tmpl == "$past") {
        const NounBinding& subject = need_subject();
        if (local.size() >= 2) {
            atom.expr = subject.path + " == $past(" + local[1]->path + ")";
            atom.paths = {subject.path, local[1]->path};
        } else {
            atom.expr = "$past(" + subject.path + ")";
            atom.paths = {subject.path};
        }
    } else if (tmpl == "$stable") {
        const NounBinding& subject = need_subject();
        atom.expr = "$stable(" + subject.path + ")";
        atom.paths = {subject.path};
    } else if (tmpl == "== X") {
        const NounBinding& subject = need_subject();
        std::optional<std::string> rhs = rhs_after_match();
        if (!rhs) throw clause_error("no operand after \"" + *verb->pattern + "\"", term.text);
        atom.expr = subject.path + " == " + *rhs;
        atom.paths = {subject.path};
        if (valid_rtl_path(*rhs)) atom.paths.push_back(*rhs);
    } else if (tmpl == "== 0" || tmpl == "== 1") {
        const NounBinding& subject = need_subject();
        atom.expr = subject.path + " " + tmpl;
        atom.paths = {subject.path};
    } else if (tmpl == "==" || tmpl == "!=" || tmpl == "|->") {
        const NounBinding& subject = need_subject();
        std::optional<std::string> rhs;
        for (const NounBinding* b : local)
            if (b != &subject && b->begin >= verb->end) {
                rhs = b->path;
                break;
            }
        if (!rhs) rhs = rhs_after_match();
        if (!rhs)
            throw clause_error("no right operand for \"" + *verb->pattern + "\"", term.text);
        atom.expr = subject.path + " " + tmpl + " " + *rhs;
        atom.paths = {subject.path};
        if (valid_rtl_path(*rhs)) atom.paths.push_back(*rhs);
    }
    term.atoms.push_back(std::move(atom));
    return term;
}

inline std::string escape_sva_string(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline std::string scaffold_sva(const std::string& body, const std::string& message,
                                const AssertionConfig& config) {
    std::string out;
    out += "assert property (\n";
    out += "  @(posedge " + config.clock + ") disable iff (" + config.reset +
           ") // Security Property\n";
    out += "    " + body + "\n";
    out += "  )\n";
    out += "  else // Error Message\n";
    out += "    $error(\"%m " + escape_sva_string(message) + "\");\n";
    return out;
}

}  // namespace detail

inline Assertion generate_assertion(const AssertionRequest& request, const RegisterMap& map,
                                    const VerbOperatorTable& verbs, const Lexicon& lex,
                                    const AssertionConfig& config = {}) {
    const SentenceRecord& sentence = request.sentence;
    if (trim(sentence.text).empty())
        throw ValidationError("cannot generate an assertion from an empty sentence");

    std::vector<WordToken> tokens = parse_word_tokens(sentence.text);
    BindResult bind = bind_nouns(tokens, map, lex);
    if (bind.bindings.empty())
        throw GenerationError("unmappable property \"" + sentence.id +
                              "\": no register map phrase matches \"" + sentence.text + "\"");

    std::vector<std::string> low(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) low[i] = to_lower(tokens[i].core);
    std::vector<PosTag> tags = lex.tag_pos(low);
    std::vector<bool> bound(tokens.size(), false);
    for (const auto& b : bind.bindings)
        for (std::size_t k = b.begin; k < b.end; ++k) bound[k] = true;

    Assertion out;
    out.property_id = sentence.id;
    out.sentence_text = sentence.text;
    out.bindings = bind.bindings;
    for (const auto& noun : bind.unbound_nouns)
        out.diagnostics.push_back("unbound noun \"" + noun + "\"");

    std::vector<detail::ClauseSpan> spans = detail::split_clauses(tokens, bind.bindings, lex);
    std::vector<detail::ClauseTerm> terms;
    for (const auto& span : spans) {
        terms.push_back(
            detail::compile_clause(tokens, low, tags, bound, span, bind.bindings, verbs, lex));
        if (span.conjunction == "unless")
            out.diagnostics.push_back("clause \"" + terms.back().text +
                                      "\": \"unless\" is treated as a plain condition");
    }

    // Drop bare references whose path another term refines.
    std::set<std::string> all_paths;
    for (const auto& term : terms)
        for (const auto& atom : term.atoms)
            for (const auto& path : atom.paths) all_paths.insert(path);
    std::vector<std::string> antecedent, consequent;
    std::vector<std::string> predicates;
    std::vector<std::size_t> kept(terms.size(), 0);
    for (std::size_t t = 0; t < terms.size(); ++t) {
        detail::ClauseTerm& term = terms[t];
        for (const auto& predicate : term.unmatched_predicates) predicates.push_back(predicate);
        for (const auto& atom : term.atoms) {
            if (atom.bare) {
                const std::string prefix = atom.paths.front() + ".";
                bool refined = false;
                for (const auto& path : all_paths)
                    if (starts_with(path, prefix)) refined = true;
                if (refined) continue;
            }
            (term.antecedent ? antecedent : consequent).push_back(atom.expr);
            ++kept[t];
        }
        if (kept[t] == 0 && !term.atoms.empty())
            out.diagnostics.push_back("clause \"" + term.text +
                                      "\" dropped: bare design reference");
    }

    auto join = [](const std::vector<std::string>& exprs) {
        std::string out_expr;
        for (const auto& e : exprs) {
            if (!out_expr.empty()) out_expr += " && ";
            out_expr += e;
        }
        return out_expr;
    };
    if (antecedent.empty() && consequent.empty())
        throw GenerationError("unmappable property \"" + sentence.id +
                              "\": no clause produced a term");
    if (antecedent.empty())
        out.body = join(consequent);
    else if (consequent.empty())
        out.body = join(antecedent);
    else
        out.body = join(antecedent) + " |-> " + join(consequent);

    bool has_operator = false;
    for (std::string_view op : {" |-> ", " == ", " != ", "$past(", "$stable("})
        if (out.body.find(op) != std::string::npos) has_operator = true;
    if (!has_operator) {
        std::string detail = predicates.empty() ? sentence.text : predicates.front();
        throw GenerationError("no operator for predicate \"" + detail + "\" in \"" + sentence.id +
                              "\"");
    }

    if (request.error_message) {
        out.error_message = *request.error_message;
    } else {
        for (std::size_t t = 0; t < terms.size() && out.error_message.empty(); ++t)
            if (!terms[t].antecedent && kept[t] > 0)
                out.error_message = detail::clause_text(tokens, spans[t], true);
        if (out.error_message.empty()) out.error_message = trim(sentence.text);
    }

    out.sva_text = detail::scaffold_sva(out.body, out.error_message, config);
    return out;
}

inline std::string render_assertion(const Assertion& assertion) {
    return "// " + assertion.property_id + ": " + assertion.sentence_text + "\n" +
           assertion.sva_text;
}

inline void save_assertions(const std::vector<Assertion>& assertions,
                            const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (std::size_t i = 0; i < assertions.size(); ++i) {
        if (i > 0) out << "\n";
        out << render_assertion(assertions[i]);
    }
    if (!out) throw IoError("failed while writing " + path.string());
}

inline std::vector<AssertionRequest> load_assertion_inputs(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<AssertionRequest> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("invalid property input: ") + e.what(), lineno);
        }
        AssertionRequest req;
        try {
            req.sentence.id = j.at("id").get<std::string>();
            req.sentence.doc = j.at("doc").get<std::string>();
            req.sentence.text = normalize_ws(j.at("text").get<std::string>());
            req.sentence.tokens = ws_tokens(req.sentence.text);
            req.sentence.word_count = static_cast<int>(req.sentence.tokens.size());
            if (j.contains("error_message") && !j.at("error_message").is_null())
                req.error_message = j.at("error_message").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("invalid property input: ") + e.what(), lineno);
        }
        if (req.sentence.id.empty()) throw ParseError("property input with empty id", lineno);
        if (req.sentence.text.empty()) throw ParseError("property input with empty text", lineno);
        out.push_back(std::move(req));
    }
    return out;
}

namespace sva {

enum class TokenKind { kIdent, kNumber, kString, kSymbol, kSystem };

struct Token {
    TokenKind kind;
    std::string text;
    std::size_t offset = 0;
};

inline bool lex(std::string_view text, std::vector<Token>& tokens, std::string& error) {
    std::size_t i = 0;
    auto peek = [&](std::size_t k) { return i + k < text.size() ? text[i + k] : '\0'; };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
        } else if (c == '/' && peek(1) == '/') {
            while (i < text.size() && text[i] != '\n') ++i;
        } else if (c == '"') {
            std::size_t start = i++;
            std::string value;
            bool closed = false;
            while (i < text.size()) {
                if (text[i] == '\\' && i + 1 < text.size()) {
                    value += text[i + 1];
                    i += 2;
                } else if (text[i] == '"') {
                    closed = true;
                    ++i;
                    break;
                } else {
                    value += text[i++];
                }
            }
            if (!closed) {
                error = "unterminated string at offset " + std::to_string(start);
                return false;
            }
            tokens.push_back({TokenKind::kString, value, start});
        } else if (c == '$') {
            std::size_t start = i++;
            std::string name = "$";
            while (i < text.size() && (ascii_alnum(text[i]) || text[i] == '_')) name += text[i++];
            tokens.push_back({TokenKind::kSystem, name, start});
        } else if (ascii_alpha(c) || c == '_') {
            std::size_t start = i;
            std::string name;
            while (i < text.size() &&
                   (ascii_alnum(text[i]) || text[i] == '_' || text[i] == '$' || text[i] == '.'))
                name += text[i++];
            tokens.push_back({TokenKind::kIdent, name, start});
        } else if (ascii_digit(c)) {
            std::size_t start = i;
            std::string number;
            while (i < text.size() && (ascii_alnum(text[i]) || text[i] == '\'' || text[i] == '_'))
                number += text[i++];
            tokens.push_back({TokenKind::kNumber, number, start});
        } else if (c == '|' && peek(1) == '-' && peek(2) == '>') {
            tokens.push_back({TokenKind::kSymbol, "|->", i});
            i += 3;
        } else if ((c == '=' || c == '!') && peek(1) == '=') {
            tokens.push_back({TokenKind::kSymbol, std::string(1, c) + "=", i});
            i += 2;
        } else if (c == '&' && peek(1) == '&') {
            tokens.push_back({TokenKind::kSymbol, "&&", i});
            i += 2;
        } else if (c == '(' || c == ')' || c == ';' || c == '@') {
            tokens.push_back({TokenKind::kSymbol, std::string(1, c), i});
            ++i;
        } else {
            error = std::string("unexpected character '") + c + "' at offset " + std::to_string(i);
            return false;
        }
    }
    return true;
}

class Parser {
  public:
    Parser(const std::vector<Token>& tokens, std::vector<std::string>& errors)
        : tokens_(tokens), errors_(errors) {}

    void run() {
        expect_ident("assert");
        expect_ident("property");
        expect_symbol("(");
        expect_symbol("@");
        expect_symbol("(");
        expect_ident("posedge");
        expect_signal();
        expect_symbol(")");
        expect_ident("disable");
        expect_ident("iff");
        expect_symbol("(");
        expect_signal();
        expect_symbol(")");
        expression();
        expect_symbol(")");
        if (!failed_ && at_ident("else")) {
            next();
            if (!failed_ && (at_end() || peek().kind != TokenKind::kSystem ||
                             peek().text != "$error")) {
                fail("expected $error after else");
            } else if (!failed_) {
                next();
                expect_symbol("(");
                if (!failed_ && (at_end() || peek().kind != TokenKind::kString))
                    fail("expected a string literal in $error");
                else if (!failed_)
                    next();
                expect_symbol(")");
            }
        }
        expect_symbol(";");
        if (!failed_ && !at_end()) fail("unexpected trailing token \"" + peek().text + "\"");
    }

  private:
    const std::vector<Token>& tokens_;
    std::vector<std::string>& errors_;
    std::size_t pos_ = 0;
    bool failed_ = false;

    bool at_end() const { return pos_ >= tokens_.size(); }
    const Token& peek() const { return tokens_[pos_]; }
    void next() { ++pos_; }

    void fail(const std::string& message) {
        if (failed_) return;
        failed_ = true;
        errors_.push_back(at_end() ? message + " at end of input"
                                   : message + " at offset " + std::to_string(peek().offset));
    }

    bool at_ident(std::string_view word) const {
        return !at_end() && peek().kind == TokenKind::kIdent && peek().text == word;
    }

    void expect_ident(std::string_view word) {
        if (failed_) return;
        if (!at_ident(word))
            fail("expected \"" + std::string(word) + "\"");
        else
            next();
    }

    void expect_symbol(std::string_view symbol) {
        if (failed_) return;
        if (at_end() || peek().kind != TokenKind::kSymbol || peek().text != symbol)
            fail("expected \"" + std::string(symbol) + "\"");
        else
            next();
    }

    void expect_signal() {
        if (failed_) return;
        if (at_end() || peek().kind != TokenKind::kIdent) {
            fail("expected a signal name");
            return;
        }
        if (!detail::valid_rtl_path(peek().text)) {
            fail("invalid signal name \"" + peek().text + "\"");
            return;
        }
        next();
    }

    void term() {
        if (failed_) return;
        if (at_end()) {
            fail("expected a term");
            return;
        }
        const Token& t = peek();
        if (t.kind == TokenKind::kIdent) {
            expect_signal();
        } else if (t.kind == TokenKind::kNumber) {
            next();
        } else if (t.kind == TokenKind::kSystem && (t.text == "$past" || t.text == "$stable")) {
            next();
            expect_symbol("(");
            expect_signal();
            expect_symbol(")");
        } else if (t.kind == TokenKind::kSymbol && t.text == "(") {
            next();
            expression();
            expect_symbol(")");
        } else {
            fail("expected a term, got \"" + t.text + "\"");
        }
    }

    void expression() {
        if (failed_) return;
        term();
        while (!failed_ && !at_end() && peek().kind == TokenKind::kSymbol &&
               (peek().text == "|->" || peek().text == "==" || peek().text == "!=" ||
                peek().text == "&&")) {
            next();
            term();
        }
    }
};

}  // namespace sva

// Checks one assert block against the supported grammar.  Returns the
// problems found; an empty list means the text parses.
inline std::vector<std::string> validate_sva(std::string_view text) {
    std::vector<std::string> errors;
    std::vector<sva::Token> tokens;
    std::string lex_error;
    if (!sva::lex(text, tokens, lex_error)) {
        errors.push_back(lex_error);
        return errors;
    }
    if (tokens.empty()) {
        errors.push_back("empty assertion");
        return errors;
    }
    sva::Parser parser(tokens, errors);
    parser.run();
    return errors;
}

}  // namespace nspg
