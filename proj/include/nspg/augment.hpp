#pragma once

#include <cstdint>
#include <cstring>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nspg/corpus.hpp"
#include "nspg/errors.hpp"
#include "nspg/lexicon.hpp"
#include "nspg/text.hpp"

namespace nspg {

enum class AugOp { RS, RD, SR, RI };

inline const char* aug_op_name(AugOp op) {
    switch (op) {
        case AugOp::RS: return "RS";
        case AugOp::RD: return "RD";
        case AugOp::SR: return "SR";
        case AugOp::RI: return "RI";
    }
    return "RS";
}

inline AugOp parse_aug_op(std::string_view s) {
    std::string u;
    for (char c : s) u.push_back(static_cast<char>(c >= 'a' && c <= 'z' ? c - 'a' + 'A' : c));
    if (u == "RS") return AugOp::RS;
    if (u == "RD") return AugOp::RD;
    if (u == "SR") return AugOp::SR;
    if (u == "RI") return AugOp::RI;
    throw ConfigError("unknown augmentation op: " + std::string(s));
}

inline std::vector<AugOp> parse_aug_ops(std::string_view csv) {
    std::vector<AugOp> out;
    std::string cur;
    auto flush = [&] {
        std::string w = trim(cur);
        if (!w.empty()) out.push_back(parse_aug_op(w));
        cur.clear();
    };
    for (char c : csv) {
        if (c == ',') flush();
        else cur.push_back(c);
    }
    flush();
    return out;
}

namespace detail {

// Register names and dotted paths must survive augmentation untouched.
inline bool protected_token(const WordToken& tok, PosTag tag) {
    return tag == PosTag::NOUN &&
           (dotted_identifier(tok.core) || all_caps_token(tok.core) ||
            tok.core.find('.') != std::string::npos);
}

inline bool has_comma(const std::string& trail) {
    return trail.find(',') != std::string::npos;
}

inline std::vector<PosTag> tag_cores(const std::vector<WordToken>& toks, const Lexicon& lex) {
    std::vector<PosTag> tags;
    tags.reserve(toks.size());
    for (const auto& t : toks) tags.push_back(lex.tag_word(t.core));
    return tags;
}

}  // namespace detail

// Relocates one conjunction-introduced phrase to another conjunction boundary
// or to the end of the sentence.  Token multiset (word cores) is preserved.
// Requires at least two conjunction-delimited phrases.
inline std::optional<std::string> random_swap(const SentenceRecord& rec, const Lexicon& lex,
                                              std::uint64_t seed) {
    auto toks = parse_word_tokens(rec.text);
    const std::size_t n = toks.size();
    if (n < 2) return std::nullopt;

    std::vector<std::size_t> conj;
    for (std::size_t i = 0; i < n; ++i)
        if (lex.is_conjunction(toks[i].core)) conj.push_back(i);
    if (conj.size() < 2) return std::nullopt;

    std::vector<std::size_t> movable;
    for (auto c : conj)
        if (c > 0) movable.push_back(c);
    if (movable.empty()) return std::nullopt;

    auto in_conj = [&](std::size_t i) {
        return std::find(conj.begin(), conj.end(), i) != conj.end();
    };

    Rng rng(seed);
    std::size_t p = movable[rng.pick(movable.size())];
    std::size_t e = p + 1;
    while (e < n) {
        if (in_conj(e)) break;
        if (detail::has_comma(toks[e - 1].trail)) break;
        ++e;
    }

    // Candidate insertion points: before another (non-initial) conjunction,
    // or the end of the sentence.
    std::vector<std::size_t> targets;  // expressed as original token indices; n means end
    for (auto c : conj)
        if (c > 0 && (c < p || c >= e)) targets.push_back(c);
    targets.push_back(n);
    if (targets.empty()) return std::nullopt;

    std::vector<WordToken> moved(toks.begin() + p, toks.begin() + e);
    std::vector<WordToken> rest;
    std::vector<std::size_t> rest_orig;
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= p && i < e) continue;
        rest.push_back(toks[i]);
        rest_orig.push_back(i);
    }
    bool was_final = (e == n);
    if (!moved.empty() && !moved.back().trail.empty() && !was_final) {
        // The phrase-closing comma stays with the clause it closed.
        if (p > 0) rest[p - 1].trail += moved.back().trail;
        moved.back().trail.clear();
    }

    std::size_t first = rng.pick(targets.size());
    for (std::size_t attempt = 0; attempt < targets.size(); ++attempt) {
        std::size_t target = targets[(first + attempt) % targets.size()];
        std::vector<WordToken> out = rest;
        std::vector<WordToken> phrase = moved;
        std::size_t pos = 0;
        if (target >= n) {
            pos = out.size();
            if (!out.empty() && !phrase.empty()) {
                // Sentence-final punctuation migrates to the new last word.
                std::string tail = out.back().trail;
                out.back().trail.clear();
                phrase.back().trail += tail;
            }
        } else {
            while (pos < rest_orig.size() && rest_orig[pos] < target) ++pos;
        }
        out.insert(out.begin() + pos, phrase.begin(), phrase.end());
        std::string text = join_word_tokens(out);
        if (text != rec.text) return text;
    }
    return std::nullopt;
}

// Deletes one adjective, determiner or adverb.
inline std::optional<std::string> random_deletion(const SentenceRecord& rec, const Lexicon& lex,
                                                  std::uint64_t seed) {
    auto toks = parse_word_tokens(rec.text);
    auto tags = detail::tag_cores(toks, lex);
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (detail::protected_token(toks[i], tags[i])) continue;
        if (tags[i] == PosTag::ADJ || tags[i] == PosTag::DET || tags[i] == PosTag::ADV)
            cand.push_back(i);
    }
    if (cand.empty()) return std::nullopt;
    Rng rng(seed);
    std::size_t i = cand[rng.pick(cand.size())];
    if (!toks[i].trail.empty() && i > 0) toks[i - 1].trail += toks[i].trail;
    toks.erase(toks.begin() + i);
    if (toks.empty()) return std::nullopt;
    return join_word_tokens(toks);
}

// Replaces one verb with its top-ranked synonym, carrying the inflection.
inline std::optional<std::string> synonym_replacement(const SentenceRecord& rec,
                                                      const Lexicon& lex, std::uint64_t seed) {
    auto toks = parse_word_tokens(rec.text);
    auto tags = detail::tag_cores(toks, lex);
    struct Cand {
        std::size_t index;
        std::string lemma;
    };
    std::vector<Cand> cand;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (tags[i] != PosTag::VERB) continue;
        if (lex.is_copula(toks[i].core)) continue;
        if (detail::protected_token(toks[i], tags[i])) continue;
        std::string lemma = lex.verb_lemma(toks[i].core);
        if (lemma.empty()) lemma = to_lower(toks[i].core);
        if (!lex.synonyms(lemma, PosTag::VERB).empty()) cand.push_back({i, lemma});
    }
    if (cand.empty()) return std::nullopt;
    Rng rng(seed);
    const Cand& c = cand[rng.pick(cand.size())];
    std::string top = lex.synonyms(c.lemma, PosTag::VERB).front();
    std::string surface;
    bool bare_surface = to_lower(toks[c.index].core) == c.lemma;
    bool after_copula = c.index > 0 && lex.is_copula(toks[c.index - 1].core);
    if (bare_surface && after_copula) {
        // Passive participle whose surface form matches the lemma ("be read"):
        // the replacement needs an explicit participle.
        surface = detail::past_form(top);
    } else {
        surface = detail::inflect_like(top, toks[c.index].core, c.lemma);
    }
    surface = detail::match_case(surface, toks[c.index].core);
    if (surface == toks[c.index].core) return std::nullopt;
    toks[c.index].core = surface;
    return join_word_tokens(toks);
}

// Inserts one adverb from the lexicon pool immediately before or after a verb.
inline std::optional<std::string> random_insertion(const SentenceRecord& rec, const Lexicon& lex,
                                                   std::uint64_t seed) {
    auto toks = parse_word_tokens(rec.text);
    auto tags = detail::tag_cores(toks, lex);
    std::vector<std::size_t> verbs;
    for (std::size_t i = 0; i < toks.size(); ++i)
        if (tags[i] == PosTag::VERB && !detail::protected_token(toks[i], tags[i]))
            verbs.push_back(i);
    if (verbs.empty() || lex.adverb_pool().empty()) return std::nullopt;

    Rng rng(seed);
    std::size_t v = verbs[rng.pick(verbs.size())];
    std::string adverb = lex.adverb_pool()[rng.pick(lex.adverb_pool().size())];
    bool after = rng.pick(2) == 1;

    WordToken inserted{adverb, ""};
    if (after) {
        inserted.trail = toks[v].trail;
        toks[v].trail.clear();
        toks.insert(toks.begin() + v + 1, inserted);
    } else {
        if (v == 0) inserted.core = detail::match_case(inserted.core, toks[0].core);
        toks.insert(toks.begin() + v, inserted);
    }
    return join_word_tokens(toks);
}

inline std::optional<std::string> apply_aug_op(AugOp op, const SentenceRecord& rec,
                                               const Lexicon& lex, std::uint64_t seed) {
    switch (op) {
        case AugOp::RS: return random_swap(rec, lex, seed);
        case AugOp::RD: return random_deletion(rec, lex, seed);
        case AugOp::SR: return synonym_replacement(rec, lex, seed);
        case AugOp::RI: return random_insertion(rec, lex, seed);
    }
    return std::nullopt;
}

struct AugmentOptions {
    int multiplicity = 1;
    bool include_originals = true;
};

struct AugmentResult {
    std::vector<CorpusEntry> entries;
    std::map<std::string, std::size_t> produced;  // op name -> count
};

// Applies each op to each record.  Per-record randomness is derived from
// hash(seed, id), so results do not depend on corpus order.
inline AugmentResult augment_corpus(const std::vector<CorpusEntry>& in,
                                    const std::vector<AugOp>& ops, const Lexicon& lex,
                                    std::uint64_t seed, const AugmentOptions& opt = {}) {
    if (ops.empty()) throw ValidationError("no augmentation ops requested");
    if (opt.multiplicity < 1) throw ValidationError("multiplicity must be >= 1");

    AugmentResult res;
    for (auto op : ops) res.produced[aug_op_name(op)] = 0;

    for (const auto& entry : in) {
        if (opt.include_originals) res.entries.push_back(entry);
        std::uint64_t record_seed = derive_seed(seed, entry.rec.id);
        for (auto op : ops) {
            std::uint64_t op_seed = splitmix64(record_seed ^ hash_str(aug_op_name(op)));
            std::set<std::string> seen;
            for (int k = 1; k <= opt.multiplicity; ++k) {
                std::uint64_t variant_seed = splitmix64(op_seed ^ static_cast<std::uint64_t>(k));
                auto text = apply_aug_op(op, entry.rec, lex, variant_seed);
                if (!text || *text == entry.rec.text) continue;
                if (!seen.insert(*text).second) continue;
                CorpusEntry aug;
                aug.rec = with_text(entry.rec, *text);
                aug.rec.id = entry.rec.id + "~" + aug_op_name(op) + std::to_string(k);
                aug.label = entry.label;
                aug.aug = AugmentInfo{entry.rec.id, aug_op_name(op)};
                res.entries.push_back(std::move(aug));
                ++res.produced[aug_op_name(op)];
            }
        }
    }
    return res;
}

}  // namespace nspg
