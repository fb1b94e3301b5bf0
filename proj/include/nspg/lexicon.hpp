#pragma once

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nspg/errors.hpp"
#include "nspg/text.hpp"

namespace nspg {

enum class PosTag { NOUN, VERB, ADJ, ADV, DET, CONJ, NUM, OTHER };

inline const char* pos_name(PosTag t) {
    switch (t) {
        case PosTag::NOUN: return "NOUN";
        case PosTag::VERB: return "VERB";
        case PosTag::ADJ: return "ADJ";
        case PosTag::ADV: return "ADV";
        case PosTag::DET: return "DET";
        case PosTag::CONJ: return "CONJ";
        case PosTag::NUM: return "NUM";
        case PosTag::OTHER: return "OTHER";
    }
    return "OTHER";
}

namespace lexdata {

// Fragmentation conjunctions: clause introducers the formalizer splits on.
inline const std::vector<std::string>& default_conjunctions() {
    static const std::vector<std::string> v = {"when",   "if",    "to",   "while",
                                               "before", "after", "until", "unless",
                                               "upon",   "once",  "whenever"};
    return v;
}

// Insertion pool for the random-insertion operator.
inline const std::vector<std::string>& default_adverbs() {
    static const std::vector<std::string> v = {
        "immediately",  "automatically", "always",       "never",        "continuously",
        "periodically", "repeatedly",    "eventually",   "instantly",    "correctly",
        "safely",       "securely",      "silently",     "internally",   "externally",
        "directly",     "independently", "simultaneously", "atomically", "synchronously",
        "asynchronously", "typically",   "normally",     "usually",      "optionally",
        "additionally", "finally",       "initially",    "currently",    "previously",
        "subsequently", "explicitly",    "implicitly",   "strictly",     "fully",
        "partially",    "completely",    "entirely",     "exactly",      "approximately",
        "randomly",     "sequentially",  "concurrently", "temporarily",  "permanently"};
    return v;
}

inline const std::set<std::string>& determiners() {
    static const std::set<std::string> s = {
        "the",  "a",     "an",      "some",  "this",  "that",   "these", "those",
        "no",   "any",   "each",    "every", "all",   "both",   "either", "neither",
        "another", "such", "its",   "their", "his",   "her",    "our",   "your", "my"};
    return s;
}

inline const std::set<std::string>& pronouns() {
    static const std::set<std::string> s = {"it",  "they", "we",  "he",   "she",  "you",
                                            "i",   "them", "him", "us",   "something",
                                            "anything", "everything", "nothing", "one"};
    return s;
}

// Copulas, auxiliaries and modals.  They tag VERB but are excluded from
// synonym replacement.
inline const std::set<std::string>& copulas() {
    static const std::set<std::string> s = {
        "is",   "are",  "was",   "were",  "be",    "been",  "being", "am",
        "do",   "does", "did",   "has",   "have",  "had",   "having",
        "can",  "could", "may",  "might", "must",  "shall", "should", "will",
        "would", "cannot"};
    return s;
}

inline const std::set<std::string>& coordinators() {
    static const std::set<std::string> s = {"and", "or", "but", "nor"};
    return s;
}

inline const std::set<std::string>& prepositions() {
    static const std::set<std::string> s = {
        "of",   "in",    "on",      "at",      "by",      "for",    "with",  "from",
        "into", "onto",  "over",    "under",   "through", "between", "against",
        "during", "without", "within", "about", "above",  "below",  "across", "per",
        "via",  "as",    "than",    "which",   "who",     "whose",  "what",  "where",
        "there", "here"};
    return s;
}

// Function-word adverbs recognized by the tagger but kept out of the
// insertion pool.
inline const std::set<std::string>& grammar_adverbs() {
    static const std::set<std::string> s = {
        "not",   "also",    "only",   "then",    "thus",     "however", "therefore",
        "otherwise", "instead", "moreover", "furthermore", "meanwhile", "again",
        "already", "still",  "yet",    "too",     "rather",   "quite",   "very",
        "least", "most",    "twice",  "soon",    "now",      "later",   "earlier",
        "first", "last",    "together", "above", "below",    "back"};
    return s;
}

inline const std::set<std::string>& adjectives() {
    static const std::set<std::string> s = {
        "main",     "same",      "new",       "old",       "previous", "next",
        "current",  "invalid",   "valid",     "fatal",     "secure",   "internal",
        "external", "default",   "idle",      "busy",      "full",     "empty",
        "ready",    "pending",   "active",    "inactive",  "high",     "low",
        "final",    "initial",   "correct",   "incorrect", "critical", "optional",
        "manual",   "automatic", "separate",  "single",    "multiple", "additional",
        "available", "different", "identical", "important", "complete", "partial",
        "raw",      "own",       "entire",    "whole",     "several",  "various",
        "certain",  "possible",  "necessary", "sufficient", "normal",  "special",
        "specific", "general",   "relevant",  "further",   "extra",    "wrong",
        "bad",      "good",      "large",     "small",     "long",     "short",
        "least",    "early",     "late",      "safe",      "unsafe",   "stale"};
    return s;
}

inline const std::set<std::string>& verb_stems() {
    static const std::set<std::string> s = {
        "occur",     "happen",     "arise",       "read",       "retrieve",  "fetch",
        "write",     "store",      "record",      "clear",      "wipe",      "erase",
        "set",       "assign",     "program",     "enable",     "activate",  "disable",
        "deactivate", "block",     "start",       "begin",      "initiate",  "stop",
        "halt",      "cease",      "stall",       "hang",       "freeze",    "finish",
        "complete",  "conclude",   "stay",        "remain",     "persist",   "continue",
        "proceed",   "resume",     "pass",        "transfer",   "forward",   "send",
        "transmit",  "dispatch",   "receive",     "accept",     "obtain",    "detect",
        "discover",  "identify",   "trigger",     "fire",       "assert",    "raise",
        "deassert",  "release",    "lower",       "reset",      "restart",   "reinitialize",
        "update",    "refresh",    "modify",      "change",     "alter",     "check",
        "verify",    "inspect",    "confirm",     "allow",      "permit",    "let",
        "require",   "need",       "demand",      "request",    "ask",       "respond",
        "reply",     "answer",     "ignore",      "skip",       "discard",   "drop",
        "lose",      "generate",   "produce",     "create",     "compute",   "calculate",
        "derive",    "save",       "keep",        "load",       "copy",      "duplicate",
        "clone",     "move",       "shift",       "lock",       "unlock",    "free",
        "prevent",   "protect",    "guard",       "shield",     "monitor",   "watch",
        "observe",   "sample",     "capture",     "measure",    "report",    "signal",
        "indicate",  "show",       "notify",      "inform",     "alert",     "poll",
        "query",     "flush",      "drain",       "wait",       "pause",     "hold",
        "suspend",   "configure",  "arrange",     "initialize", "prepare",   "terminate",
        "end",       "fail",       "abort",       "cancel",     "revoke",    "retry",
        "repeat",    "redo",       "overflow",    "overrun",    "underflow", "increment",
        "increase",  "advance",    "decrement",   "decrease",   "reduce",    "grow",
        "expire",    "lapse",      "toggle",      "flip",       "switch",    "invert",
        "negate",    "mask",       "unmask",      "expose",     "reveal",    "latch",
        "retain",    "swap",       "exchange",    "trade",      "execute",   "run",
        "perform",   "conduct",    "operate",     "function",   "work",      "process",
        "handle",    "treat",      "manage",      "control",    "govern",    "regulate",
        "restrict",  "limit",      "cap",         "constrain",  "validate",  "invalidate",
        "void",      "synchronize", "align",      "coordinate", "broadcast", "announce",
        "encrypt",   "decrypt",    "encode",      "decode",     "decipher",  "cipher",
        "translate", "hash",       "digest",      "sign",       "authenticate", "endorse",
        "issue",     "emit",       "consume",     "use",        "employ",    "utilize",
        "provide",   "supply",     "furnish",     "give",       "return",    "restore",
        "revert",    "recover",    "depend",      "rely",       "connect",   "attach",
        "link",      "join",       "split",       "divide",     "separate",  "merge",
        "combine",   "compare",    "match",       "contrast",   "fit",       "apply",
        "reject",    "refuse",     "deny",        "grant",      "withdraw",  "display",
        "present",   "notice",     "want",        "get",        "put",       "make",
        "take",      "go",         "come",        "become",     "seem",      "appear",
        "call",      "list",       "describe",    "specify",    "define",    "document",
        "refer",     "see",        "note",        "assume",     "consider",  "support",
        "implement", "contain",    "include",     "consist",    "comprise",  "determine",
        "select",    "choose",     "enter",       "exit",       "leave",     "reach",
        "exceed",    "overwrite",  "override",    "preserve",   "maintain",  "guarantee",
        "ensure",    "affect",     "cause",       "result",     "lead",      "follow",
        "precede",   "succeed",    "attempt",     "try",        "test",      "debug",
        "route",     "buffer",     "queue",       "push",       "pop",       "rotate",
        "extend",    "truncate",   "pad",         "strip",      "parse",     "format",
        "log",       "trace",      "dump",        "flag",       "mark",      "tag",
        "map",       "bind",       "assign",      "allocate",   "zero",      "zeroize",
        "randomize", "seed",       "expand",      "compress",   "pack",      "unpack",
        "serialize", "deserialize", "commit",     "replay",     "inject",    "corrupt",
        "tamper",    "mitigate",   "escalate",    "downgrade",  "upgrade",   "boot",
        "reboot",    "gate",       "count",       "matter",     "drive",     "assemble",
        "disassemble", "mux",      "arbitrate",   "acknowledge", "complete", "finalize",
        "scrub",     "scramble",   "unscramble",  "stretch",    "throttle",  "wish",
        "desire",    "hinge",      "spill",       "lift",       "hide",      "break",
        "cover",     "sustain",    "trail",       "track",      "progress",  "prevail",
        "surpass",   "absorb",     "assure",      "underrun"};
    return s;
}

struct SynonymRow {
    const char* lemma;
    const char* synonyms[3];  // ranked, null-terminated
};

inline const std::vector<SynonymRow>& default_synonyms() {
    static const std::vector<SynonymRow> rows = {
        {"occur", {"happen", "arise", nullptr}},
        {"happen", {"occur", "arise", nullptr}},
        {"arise", {"occur", "happen", nullptr}},
        {"read", {"retrieve", "fetch", nullptr}},
        {"write", {"store", "record", nullptr}},
        {"store", {"save", "keep", nullptr}},
        {"clear", {"wipe", "erase", nullptr}},
        {"wipe", {"clear", "erase", nullptr}},
        {"erase", {"clear", "wipe", nullptr}},
        {"set", {"assign", "program", nullptr}},
        {"enable", {"activate", "permit", nullptr}},
        {"disable", {"deactivate", "block", nullptr}},
        {"start", {"begin", "initiate", nullptr}},
        {"begin", {"start", "initiate", nullptr}},
        {"initiate", {"start", "begin", nullptr}},
        {"stop", {"halt", "cease", nullptr}},
        {"halt", {"stop", "cease", nullptr}},
        {"stall", {"hang", "block", nullptr}},
        {"hang", {"stall", "freeze", nullptr}},
        {"freeze", {"stall", "hang", nullptr}},
        {"finish", {"complete", "conclude", nullptr}},
        {"complete", {"finish", "conclude", nullptr}},
        {"stay", {"remain", "persist", nullptr}},
        {"remain", {"stay", "persist", nullptr}},
        {"persist", {"remain", "stay", nullptr}},
        {"continue", {"proceed", "resume", nullptr}},
        {"proceed", {"continue", "advance", nullptr}},
        {"resume", {"continue", "restart", nullptr}},
        {"pass", {"transfer", "forward", nullptr}},
        {"transfer", {"move", "pass", nullptr}},
        {"send", {"transmit", "dispatch", nullptr}},
        {"transmit", {"send", "broadcast", nullptr}},
        {"receive", {"accept", "obtain", nullptr}},
        {"accept", {"receive", "take", nullptr}},
        {"detect", {"discover", "identify", nullptr}},
        {"trigger", {"initiate", "fire", nullptr}},
        {"assert", {"raise", "activate", nullptr}},
        {"deassert", {"release", "lower", nullptr}},
        {"release", {"free", "unlock", nullptr}},
        {"reset", {"restart", "reinitialize", nullptr}},
        {"update", {"refresh", "modify", nullptr}},
        {"modify", {"change", "alter", nullptr}},
        {"change", {"modify", "alter", nullptr}},
        {"check", {"verify", "inspect", nullptr}},
        {"verify", {"check", "confirm", nullptr}},
        {"allow", {"permit", "let", nullptr}},
        {"permit", {"allow", "let", nullptr}},
        {"require", {"need", "demand", nullptr}},
        {"need", {"require", "demand", nullptr}},
        {"request", {"ask", "demand", nullptr}},
        {"respond", {"reply", "answer", nullptr}},
        {"ignore", {"skip", "discard", nullptr}},
        {"drop", {"discard", "lose", nullptr}},
        {"discard", {"drop", "ignore", nullptr}},
        {"generate", {"produce", "create", nullptr}},
        {"produce", {"generate", "create", nullptr}},
        {"compute", {"calculate", "derive", nullptr}},
        {"calculate", {"compute", "derive", nullptr}},
        {"load", {"fetch", "read", nullptr}},
        {"fetch", {"retrieve", "load", nullptr}},
        {"retrieve", {"fetch", "read", nullptr}},
        {"copy", {"duplicate", "clone", nullptr}},
        {"move", {"transfer", "shift", nullptr}},
        {"lock", {"freeze", "secure", nullptr}},
        {"unlock", {"release", "free", nullptr}},
        {"block", {"stall", "prevent", nullptr}},
        {"prevent", {"block", "stop", nullptr}},
        {"protect", {"guard", "shield", nullptr}},
        {"monitor", {"watch", "observe", nullptr}},
        {"observe", {"monitor", "watch", nullptr}},
        {"sample", {"capture", "measure", nullptr}},
        {"capture", {"sample", "record", nullptr}},
        {"report", {"signal", "indicate", nullptr}},
        {"indicate", {"signal", "show", nullptr}},
        {"signal", {"indicate", "flag", nullptr}},
        {"notify", {"inform", "alert", nullptr}},
        {"poll", {"query", "check", nullptr}},
        {"flush", {"drain", "clear", nullptr}},
        {"drain", {"flush", "clear", nullptr}},
        {"raise", {"assert", "lift", nullptr}},
        {"lower", {"deassert", "drop", nullptr}},
        {"wait", {"pause", "hold", nullptr}},
        {"pause", {"wait", "suspend", nullptr}},
        {"suspend", {"pause", "halt", nullptr}},
        {"configure", {"program", "arrange", nullptr}},
        {"program", {"configure", "write", nullptr}},
        {"initialize", {"prepare", "start", nullptr}},
        {"terminate", {"end", "stop", nullptr}},
        {"end", {"terminate", "finish", nullptr}},
        {"fail", {"abort", "break", nullptr}},
        {"abort", {"cancel", "stop", nullptr}},
        {"cancel", {"abort", "revoke", nullptr}},
        {"retry", {"repeat", "redo", nullptr}},
        {"repeat", {"retry", "redo", nullptr}},
        {"overflow", {"overrun", "spill", nullptr}},
        {"increment", {"increase", "advance", nullptr}},
        {"decrement", {"decrease", "reduce", nullptr}},
        {"increase", {"grow", "raise", nullptr}},
        {"decrease", {"reduce", "drop", nullptr}},
        {"advance", {"proceed", "progress", nullptr}},
        {"expire", {"lapse", "end", nullptr}},
        {"toggle", {"flip", "switch", nullptr}},
        {"switch", {"toggle", "change", nullptr}},
        {"flip", {"toggle", "invert", nullptr}},
        {"invert", {"flip", "negate", nullptr}},
        {"mask", {"hide", "block", nullptr}},
        {"unmask", {"expose", "reveal", nullptr}},
        {"latch", {"capture", "hold", nullptr}},
        {"hold", {"keep", "retain", nullptr}},
        {"retain", {"keep", "hold", nullptr}},
        {"keep", {"retain", "hold", nullptr}},
        {"swap", {"exchange", "switch", nullptr}},
        {"exchange", {"swap", "trade", nullptr}},
        {"execute", {"run", "perform", nullptr}},
        {"run", {"execute", "operate", nullptr}},
        {"perform", {"execute", "conduct", nullptr}},
        {"operate", {"run", "function", nullptr}},
        {"function", {"operate", "work", nullptr}},
        {"work", {"operate", "function", nullptr}},
        {"process", {"handle", "treat", nullptr}},
        {"handle", {"process", "manage", nullptr}},
        {"manage", {"handle", "control", nullptr}},
        {"control", {"manage", "govern", nullptr}},
        {"restrict", {"limit", "constrain", nullptr}},
        {"limit", {"restrict", "cap", nullptr}},
        {"validate", {"verify", "check", nullptr}},
        {"invalidate", {"void", "cancel", nullptr}},
        {"synchronize", {"align", "coordinate", nullptr}},
        {"align", {"synchronize", "arrange", nullptr}},
        {"encrypt", {"encode", "cipher", nullptr}},
        {"decrypt", {"decode", "decipher", nullptr}},
        {"encode", {"encrypt", "translate", nullptr}},
        {"decode", {"decrypt", "translate", nullptr}},
        {"issue", {"emit", "dispatch", nullptr}},
        {"emit", {"issue", "produce", nullptr}},
        {"consume", {"use", "absorb", nullptr}},
        {"use", {"employ", "utilize", nullptr}},
        {"provide", {"supply", "give", nullptr}},
        {"supply", {"provide", "furnish", nullptr}},
        {"return", {"restore", "revert", nullptr}},
        {"restore", {"return", "recover", nullptr}},
        {"recover", {"restore", "resume", nullptr}},
        {"depend", {"rely", "hinge", nullptr}},
        {"connect", {"attach", "link", nullptr}},
        {"attach", {"connect", "link", nullptr}},
        {"link", {"connect", "join", nullptr}},
        {"join", {"link", "connect", nullptr}},
        {"split", {"divide", "separate", nullptr}},
        {"divide", {"split", "separate", nullptr}},
        {"separate", {"split", "divide", nullptr}},
        {"merge", {"combine", "join", nullptr}},
        {"combine", {"merge", "join", nullptr}},
        {"compare", {"match", "contrast", nullptr}},
        {"match", {"compare", "fit", nullptr}},
        {"apply", {"use", "employ", nullptr}},
        {"reject", {"refuse", "deny", nullptr}},
        {"deny", {"reject", "refuse", nullptr}},
        {"refuse", {"reject", "deny", nullptr}},
        {"grant", {"allow", "give", nullptr}},
        {"revoke", {"cancel", "withdraw", nullptr}},
        {"expose", {"reveal", "show", nullptr}},
        {"reveal", {"expose", "show", nullptr}},
        {"show", {"display", "reveal", nullptr}},
        {"display", {"show", "present", nullptr}},
        {"present", {"show", "display", nullptr}},
        {"want", {"wish", "desire", nullptr}},
        {"ensure", {"guarantee", "assure", nullptr}},
        {"guarantee", {"ensure", "assure", nullptr}},
        {"maintain", {"preserve", "keep", nullptr}},
        {"preserve", {"maintain", "keep", nullptr}},
        {"support", {"back", "sustain", nullptr}},
        {"contain", {"hold", "include", nullptr}},
        {"include", {"contain", "cover", nullptr}},
        {"exceed", {"surpass", "overrun", nullptr}},
        {"succeed", {"prevail", "work", nullptr}},
        {"follow", {"track", "trail", nullptr}},
        {"cause", {"trigger", "produce", nullptr}},
        {"matter", {"count", "signify", nullptr}}};
    return rows;
}

}  // namespace lexdata

// Word lists driving tagging, fragmentation and augmentation.  Constructed
// with built-in defaults; each list can be replaced from a file.
class Lexicon {
public:
    Lexicon() {
        conjunctions_.insert(lexdata::default_conjunctions().begin(),
                             lexdata::default_conjunctions().end());
        adverb_pool_ = lexdata::default_adverbs();
        verbs_ = lexdata::verb_stems();
        adjectives_ = lexdata::adjectives();
        for (const auto& row : lexdata::default_synonyms()) {
            auto& list = synonyms_[row.lemma];
            for (const char* const* s = row.synonyms; *s; ++s) list.emplace_back(*s);
        }
    }

    static const Lexicon& builtin() {
        static const Lexicon lex;
        return lex;
    }

    // --- tagging ---

    PosTag tag_word(std::string_view word) const {
        std::string core = word_core(word);
        if (core.empty()) return PosTag::OTHER;
        if (numeric_literal(core)) return PosTag::NUM;
        if (dotted_identifier(core) || identifier_like(core)) return PosTag::NOUN;

        std::string low = to_lower(core);
        if (lexdata::determiners().count(low)) return PosTag::DET;
        if (conjunctions_.count(low) || lexdata::coordinators().count(low)) return PosTag::CONJ;
        if (lexdata::copulas().count(low)) return PosTag::VERB;
        if (lexdata::pronouns().count(low)) return PosTag::NOUN;
        if (lexdata::prepositions().count(low)) return PosTag::OTHER;
        if (lexdata::grammar_adverbs().count(low)) return PosTag::ADV;
        if (std::find(adverb_pool_.begin(), adverb_pool_.end(), low) != adverb_pool_.end())
            return PosTag::ADV;

        if (all_caps_token(core)) return PosTag::NOUN;
        if (adjectives_.count(low)) return PosTag::ADJ;
        if (verbs_.count(low)) return PosTag::VERB;
        if (ends_with(low, "ly") && low.size() > 3) return PosTag::ADV;
        if (!verb_lemma(low).empty()) return PosTag::VERB;
        return PosTag::NOUN;
    }

    std::vector<PosTag> tag_pos(const std::vector<std::string>& tokens) const {
        std::vector<PosTag> out;
        out.reserve(tokens.size());
        for (const auto& t : tokens) out.push_back(tag_word(t));
        // A determiner opens a noun phrase; bare verb stems inside it are
        // nouns ("the digest", "a read request").  Inflected forms keep the
        // verb reading ("the core halts").
        bool in_np = false;
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (out[i] == PosTag::DET) {
                in_np = true;
                continue;
            }
            if (in_np && out[i] == PosTag::VERB && !is_copula(tokens[i])) {
                std::string low = to_lower(word_core(tokens[i]));
                if (verb_lemma(low) == low) out[i] = PosTag::NOUN;
            }
            in_np = in_np && (out[i] == PosTag::ADJ || out[i] == PosTag::NOUN ||
                              out[i] == PosTag::NUM);
        }
        return out;
    }

    // Maps an inflected surface form back to a known verb stem; empty if the
    // word does not stem to one.
    std::string verb_lemma(std::string_view surface) const {
        std::string low = to_lower(word_core(surface));
        if (verbs_.count(low)) return low;
        auto try_stem = [&](const std::string& base) -> std::string {
            if (verbs_.count(base)) return base;
            if (base.size() >= 2 && base[base.size() - 1] == base[base.size() - 2]) {
                std::string undoubled = base.substr(0, base.size() - 1);
                if (verbs_.count(undoubled)) return undoubled;
            }
            std::string with_e = base + "e";
            if (verbs_.count(with_e)) return with_e;
            return {};
        };
        if (ends_with(low, "ies") && low.size() > 4) {
            std::string base = low.substr(0, low.size() - 3) + "y";
            if (verbs_.count(base)) return base;
        }
        for (std::string_view suf : {"ing", "ed", "es", "s", "d"}) {
            if (ends_with(low, suf) && low.size() > suf.size() + 1) {
                std::string r = try_stem(low.substr(0, low.size() - suf.size()));
                if (!r.empty()) return r;
            }
        }
        return {};
    }

    // --- lookups ---

    bool is_conjunction(std::string_view token) const {
        return conjunctions_.count(to_lower(word_core(token))) > 0;
    }

    bool is_copula(std::string_view token) const {
        return lexdata::copulas().count(to_lower(word_core(token))) > 0;
    }

    bool is_verb_stem(std::string_view token) const {
        return verbs_.count(to_lower(word_core(token))) > 0;
    }

    // Ranked synonyms for a verb lemma.  Copulas and non-verbs yield nothing;
    // the query word itself never appears in the result.
    std::vector<std::string> synonyms(std::string_view word, PosTag pos) const {
        if (pos != PosTag::VERB) return {};
        std::string low = to_lower(word_core(word));
        if (lexdata::copulas().count(low)) return {};
        auto it = synonyms_.find(low);
        if (it == synonyms_.end()) return {};
        std::vector<std::string> out;
        for (const auto& s : it->second)
            if (s != low) out.push_back(s);
        return out;
    }

    const std::vector<std::string>& adverb_pool() const { return adverb_pool_; }
    const std::set<std::string>& conjunction_set() const { return conjunctions_; }

    // --- file loading; each loader replaces the corresponding list ---

    void load_synonyms_tsv(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open " + path.string());
        std::map<std::string, std::vector<std::pair<int, std::string>>> table;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (trim(line).empty() || line[0] == '#') continue;
            auto t1 = line.find('\t');
            auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
            if (t2 == std::string::npos)
                throw ParseError("expected lemma<TAB>rank<TAB>synonym", lineno);
            std::string lemma = to_lower(trim(line.substr(0, t1)));
            std::string rank_s = trim(line.substr(t1 + 1, t2 - t1 - 1));
            std::string syn = to_lower(trim(line.substr(t2 + 1)));
            int rank = 0;
            try {
                rank = std::stoi(rank_s);
            } catch (...) {
                throw ParseError("rank is not an integer: " + rank_s, lineno);
            }
            if (rank < 1) throw ParseError("rank must be >= 1", lineno);
            if (lemma.empty() || syn.empty()) throw ParseError("empty lemma or synonym", lineno);
            if (lemma == syn)
                throw ValidationError("line " + std::to_string(lineno) + ": " + lemma +
                                      " listed as its own synonym");
            table[lemma].push_back({rank, syn});
        }
        std::map<std::string, std::vector<std::string>> built;
        for (auto& [lemma, rows] : table) {
            std::stable_sort(rows.begin(), rows.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            for (auto& [rank, syn] : rows) built[lemma].push_back(syn);
        }
        synonyms_ = std::move(built);
    }

    void load_adverbs(const std::filesystem::path& path) {
        adverb_pool_ = load_word_list(path);
        if (adverb_pool_.empty()) throw ValidationError("adverb list is empty: " + path.string());
    }

    void load_conjunctions(const std::filesystem::path& path) {
        auto words = load_word_list(path);
        std::set<std::string> s(words.begin(), words.end());
        for (const char* required : {"when", "if", "to"})
            if (!s.count(required))
                throw ValidationError("conjunction list must contain \"" + std::string(required) +
                                      "\": " + path.string());
        conjunctions_ = std::move(s);
    }

    void load_verbs(const std::filesystem::path& path) {
        auto words = load_word_list(path);
        if (words.empty()) throw ValidationError("verb list is empty: " + path.string());
        verbs_ = std::set<std::string>(words.begin(), words.end());
    }

    void load_adjectives(const std::filesystem::path& path) {
        auto words = load_word_list(path);
        adjectives_ = std::set<std::string>(words.begin(), words.end());
    }

private:
    static std::string word_core(std::string_view word) {
        std::string w(word);
        while (w.size() > 1 && trail_punct(w.back())) w.pop_back();
        return w;
    }

    static std::vector<std::string> load_word_list(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open " + path.string());
        std::vector<std::string> out;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            std::string w = trim(line);
            if (w.empty() || w[0] == '#') continue;
            if (w.find(' ') != std::string::npos || w.find('\t') != std::string::npos)
                throw ParseError("expected one token per line", lineno);
            out.push_back(to_lower(w));
        }
        return out;
    }

    std::set<std::string> conjunctions_;
    std::vector<std::string> adverb_pool_;
    std::set<std::string> verbs_;
    std::set<std::string> adjectives_;
    std::map<std::string, std::vector<std::string>> synonyms_;
};

namespace detail {

inline std::string third_person(const std::string& v) {
    if (v == "have") return "has";
    if (v == "be") return "is";
    if (v == "do") return "does";
    if (ends_with(v, "s") || ends_with(v, "x") || ends_with(v, "z") || ends_with(v, "ch") ||
        ends_with(v, "sh"))
        return v + "es";
    if (v.size() > 1 && v.back() == 'y' && !strchr("aeiou", v[v.size() - 2])) {
        return v.substr(0, v.size() - 1) + "ies";
    }
    return v + "s";
}

inline bool cvc_end(const std::string& v) {
    if (v.size() < 3) return false;
    auto vowel = [](char c) { return strchr("aeiou", c) != nullptr; };
    char a = v[v.size() - 3], b = v[v.size() - 2], c = v[v.size() - 1];
    return !vowel(a) && vowel(b) && !vowel(c) && !strchr("wxy", c);
}

inline std::string gerund(const std::string& v) {
    if (ends_with(v, "e") && !ends_with(v, "ee") && v.size() > 2)
        return v.substr(0, v.size() - 1) + "ing";
    if (cvc_end(v)) return v + v.back() + "ing";
    return v + "ing";
}

inline std::string past_form(const std::string& v) {
    if (ends_with(v, "e")) return v + "d";
    if (v.size() > 1 && v.back() == 'y' && !strchr("aeiou", v[v.size() - 2]))
        return v.substr(0, v.size() - 1) + "ied";
    if (cvc_end(v)) return v + v.back() + "ed";
    return v + "ed";
}

// Carries the inflection of `surface` (a form of `lemma`) over to `synonym`.
inline std::string inflect_like(const std::string& synonym, const std::string& surface,
                                const std::string& lemma) {
    std::string low = to_lower(surface);
    if (low == lemma) return synonym;
    if (low == third_person(lemma)) return third_person(synonym);
    if (low == gerund(lemma)) return gerund(synonym);
    if (low == past_form(lemma)) return past_form(synonym);
    return synonym;
}

inline std::string match_case(const std::string& word, const std::string& like) {
    if (word.empty() || like.empty() || !ascii_upper(like[0]) || !ascii_lower(word[0]))
        return word;
    std::string out = word;
    out[0] = static_cast<char>(out[0] - 'a' + 'A');
    return out;
}

}  // namespace detail

}  // namespace nspg
