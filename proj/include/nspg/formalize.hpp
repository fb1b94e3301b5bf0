#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nspg/corpus.hpp"
#include "nspg/errors.hpp"
#include "nspg/lexicon.hpp"
#include "nspg/text.hpp"

// Sentence formalization: fragment a sentence at commas and conjunctions,
// diagnose which fragments lack a noun or verb, insert [MASK] placeholders
// for the missing roles, fill them, and rejoin.  Also builds the dataset
// variants (baseline/mt/mot/mtt/motmt) used to train classifiers on
// formalized text.

namespace nspg {

inline constexpr std::string_view kMaskToken = "[MASK]";

enum class MaskRole { NOUN, VERB };

// A contiguous token span of the parent sentence.  The separator holds the
// punctuation and spacing that followed the fragment, so concatenating
// text + separator over all fragments reproduces the sentence exactly.
struct Fragment {
    std::vector<WordToken> tokens;
    std::string separator;
    std::optional<std::string> leading_conjunction;  // lowercased
    std::size_t begin = 0;  // token span [begin, end) in the parent sentence
    std::size_t end = 0;

    std::string text() const { return join_word_tokens(tokens); }
};

struct RoleGap {
    bool noun = false;
    bool verb = false;

    bool any() const { return noun || verb; }
    bool operator==(const RoleGap&) const = default;
};

struct MaskedFragment {
    std::vector<WordToken> tokens;
    std::vector<MaskRole> roles;  // one per mask, left to right
    std::optional<std::string> leading_conjunction;

    std::string text() const { return join_word_tokens(tokens); }
};

namespace detail {

inline bool clause_trail(const std::string& trail) {
    return trail.find_first_of(",;:") != std::string::npos;
}

}  // namespace detail

// Splits at commas (and ; :) and before interior ConjunctionSet members.
// A conjunction that opens a fragment does not split again.
inline std::vector<Fragment> split_fragments(const SentenceRecord& rec, const Lexicon& lex) {
    if (rec.text.empty()) throw ValidationError("cannot fragment an empty sentence");
    std::vector<WordToken> toks = parse_word_tokens(rec.text);
    std::vector<Fragment> frags;
    std::size_t start = 0;
    auto flush = [&](std::size_t last, std::string separator, bool strip_trail) {
        Fragment f;
        f.tokens.assign(toks.begin() + static_cast<std::ptrdiff_t>(start),
                        toks.begin() + static_cast<std::ptrdiff_t>(last) + 1);
        if (strip_trail) f.tokens.back().trail.clear();
        f.separator = std::move(separator);
        f.begin = start;
        f.end = last + 1;
        std::string head = to_lower(f.tokens.front().core);
        if (lex.is_conjunction(head)) f.leading_conjunction = head;
        frags.push_back(std::move(f));
        start = last + 1;
    };
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
        if (detail::clause_trail(toks[i].trail)) {
            flush(i, toks[i].trail + " ", true);
        } else if (i + 1 > start && lex.is_conjunction(to_lower(toks[i + 1].core))) {
            flush(i, " ", false);
        }
    }
    flush(toks.size() - 1, toks.back().trail, true);
    return frags;
}

namespace detail {

inline std::vector<PosTag> fragment_tags(const std::vector<WordToken>& toks, const Lexicon& lex) {
    std::vector<std::string> cores;
    cores.reserve(toks.size());
    for (const auto& t : toks) cores.push_back(t.core);
    return lex.tag_pos(cores);
}

}  // namespace detail

inline RoleGap analyze_completeness(const Fragment& frag, const Lexicon& lex) {
    RoleGap gap{true, true};
    for (PosTag tag : detail::fragment_tags(frag.tokens, lex)) {
        if (tag == PosTag::NOUN) gap.noun = false;
        if (tag == PosTag::VERB) gap.verb = false;
    }
    return gap;
}

// Inserts one [MASK] per missing role: the subject NOUN goes after the
// leading conjunction (or at the start), the VERB after the subject.
inline MaskedFragment insert_masks(const Fragment& frag, const Lexicon& lex) {
    MaskedFragment m;
    m.tokens = frag.tokens;
    m.leading_conjunction = frag.leading_conjunction;
    RoleGap gap = analyze_completeness(frag, lex);
    if (!gap.any()) return m;
    auto insert_at = [&](std::size_t pos) {
        if (pos > m.tokens.size()) pos = m.tokens.size();
        m.tokens.insert(m.tokens.begin() + static_cast<std::ptrdiff_t>(pos),
                        WordToken{std::string(kMaskToken), ""});
        return pos;
    };
    std::size_t subject = 0;
    if (gap.noun) {
        subject = insert_at(frag.leading_conjunction ? 1 : 0);
        m.roles.push_back(MaskRole::NOUN);
    } else {
        std::vector<PosTag> tags = detail::fragment_tags(m.tokens, lex);
        for (std::size_t i = 0; i < tags.size(); ++i) {
            if (tags[i] == PosTag::NOUN) {
                subject = i;
                break;
            }
        }
    }
    if (gap.verb) {
        insert_at(subject + 1);
        m.roles.push_back(MaskRole::VERB);
    }
    return m;
}

// Produces replacement text for every [MASK] in a fragment.
class MaskFiller {
  public:
    virtual ~MaskFiller() = default;
    virtual std::string name() const = 0;
    // Returns the fragment text with all masks replaced.
    virtual std::string fill(const MaskedFragment& frag) = 0;
};

// Deterministic dictionary filler: a temporal clause with a bare participle
// gains "system is", a conditional clause gains "value" (plus "is set" before
// a number), and a bare verb phrase gains the subject "module" with the verb
// bent to third person.
class RulesFiller : public MaskFiller {
  public:
    explicit RulesFiller(const Lexicon& lex) : lex_(lex) {}

    std::string name() const override { return "rules"; }

    std::string fill(const MaskedFragment& frag) override {
        std::vector<WordToken> toks = frag.tokens;
        bool conditional = false;
        if (frag.leading_conjunction)
            conditional = *frag.leading_conjunction == "if" || *frag.leading_conjunction == "unless";
        std::vector<std::size_t> repaired_subjects;
        std::size_t role_index = 0;
        for (std::size_t i = 0; i < toks.size(); ++i) {
            if (toks[i].core != kMaskToken) continue;
            MaskRole role = role_index < frag.roles.size() ? frag.roles[role_index]
                                                           : MaskRole::NOUN;
            ++role_index;
            std::string next = next_word(toks, i);
            std::vector<std::string> words;
            if (role == MaskRole::NOUN) {
                if (participle(next)) {
                    words = {"system", "is"};
                } else if (conditional) {
                    words = {"value"};
                } else if (!frag.leading_conjunction) {
                    words = {"module"};
                } else {
                    words = {"system"};
                }
            } else {
                if (numeric_literal(next)) {
                    words = {"is", "set"};
                } else {
                    words = {"is"};
                }
            }
            std::string trail = toks[i].trail;
            toks.erase(toks.begin() + static_cast<std::ptrdiff_t>(i));
            for (std::size_t k = 0; k < words.size(); ++k) {
                toks.insert(toks.begin() + static_cast<std::ptrdiff_t>(i + k),
                            WordToken{words[k], k + 1 == words.size() ? trail : ""});
            }
            if (role == MaskRole::NOUN && words.size() == 1) repaired_subjects.push_back(i);
            i += words.size() - 1;
        }
        for (std::size_t pos : repaired_subjects) agree_after(toks, pos);
        return join_word_tokens(toks);
    }

  private:
    std::string next_word(const std::vector<WordToken>& toks, std::size_t from) const {
        for (std::size_t j = from + 1; j < toks.size(); ++j) {
            if (toks[j].core != kMaskToken) return to_lower(toks[j].core);
        }
        return "";
    }

    bool participle(const std::string& word) const {
        if (word.empty()) return false;
        if (lex_.tag_word(word) != PosTag::VERB) return false;
        return ends_with(word, "ing") || ends_with(word, "ed");
    }

    // "module allow" -> "module allows": an inserted singular subject bends a
    // following bare verb to third person.
    void agree_after(std::vector<WordToken>& toks, std::size_t subject) const {
        std::size_t v = subject + 1;
        if (v >= toks.size()) return;
        std::string low = to_lower(toks[v].core);
        if (lex_.tag_word(low) != PosTag::VERB || lex_.is_copula(low)) return;
        if (lex_.verb_lemma(low) != low) return;
        toks[v].core = detail::match_case(detail::third_person(low), toks[v].core);
    }

    const Lexicon& lex_;
};

inline std::string fill_masks(const MaskedFragment& frag, MaskFiller& filler) {
    bool has_mask = false;
    for (const auto& tok : frag.tokens) has_mask = has_mask || tok.core == kMaskToken;
    if (!has_mask) throw ValidationError("fill_masks: fragment carries no mask");
    std::string out = filler.fill(frag);
    if (out.find(kMaskToken) != std::string::npos)
        throw ValidationError("mask filler left an unfilled placeholder");
    return out;
}

// split -> analyze -> mask -> fill -> join.  Complete sentences come back
// unchanged; id, doc, and section are preserved.
inline SentenceRecord formalize_sentence(const SentenceRecord& rec, MaskFiller& filler,
                                         const Lexicon& lex) {
    std::vector<Fragment> frags = split_fragments(rec, lex);
    std::string out;
    for (const auto& frag : frags) {
        if (analyze_completeness(frag, lex).any()) {
            out += fill_masks(insert_masks(frag, lex), filler);
        } else {
            out += frag.text();
        }
        out += frag.separator;
    }
    return with_text(rec, out);
}

enum class DatasetVariant { BASELINE, MT, MOT, MTT, MOTMT };

inline const char* variant_name(DatasetVariant v) {
    switch (v) {
        case DatasetVariant::BASELINE: return "baseline";
        case DatasetVariant::MT: return "mt";
        case DatasetVariant::MOT: return "mot";
        case DatasetVariant::MTT: return "mtt";
        case DatasetVariant::MOTMT: return "motmt";
    }
    return "baseline";
}

inline DatasetVariant parse_variant(std::string_view name) {
    std::string low = to_lower(name);
    if (low == "baseline") return DatasetVariant::BASELINE;
    if (low == "mt") return DatasetVariant::MT;
    if (low == "mot") return DatasetVariant::MOT;
    if (low == "mtt") return DatasetVariant::MTT;
    if (low == "motmt") return DatasetVariant::MOTMT;
    throw ConfigError("unknown dataset variant: " + std::string(name));
}

struct VariantOptions {
    // Drop formalized training copies whose text is identical to the
    // original (mot/motmt only).
    bool dedup_identity = true;
};

struct VariantSplit {
    std::vector<LabeledExample> train;
    std::vector<LabeledExample> test;
};

// baseline: unchanged.  mt: formalized train.  mtt: both formalized.
// mot: train plus formalized copies (ids suffixed "~mod").  motmt: mot train
// with a formalized test.  Test set size never changes.
inline VariantSplit build_variant(const std::vector<LabeledExample>& train,
                                  const std::vector<LabeledExample>& test, DatasetVariant variant,
                                  MaskFiller& filler, const Lexicon& lex,
                                  const VariantOptions& opts = {}) {
    auto formalized = [&](const LabeledExample& ex) {
        LabeledExample out = ex;
        out.record = formalize_sentence(ex.record, filler, lex);
        return out;
    };
    auto map_all = [&](const std::vector<LabeledExample>& xs) {
        std::vector<LabeledExample> out;
        out.reserve(xs.size());
        for (const auto& ex : xs) out.push_back(formalized(ex));
        return out;
    };
    auto with_copies = [&](const std::vector<LabeledExample>& xs) {
        std::vector<LabeledExample> out = xs;
        out.reserve(xs.size() * 2);
        for (const auto& ex : xs) {
            LabeledExample copy = formalized(ex);
            if (opts.dedup_identity && copy.record.text == ex.record.text) continue;
            copy.record.id += "~mod";
            out.push_back(std::move(copy));
        }
        return out;
    };
    switch (variant) {
        case DatasetVariant::BASELINE: return {train, test};
        case DatasetVariant::MT: return {map_all(train), test};
        case DatasetVariant::MTT: return {map_all(train), map_all(test)};
        case DatasetVariant::MOT: return {with_copies(train), test};
        case DatasetVariant::MOTMT: return {with_copies(train), map_all(test)};
    }
    throw ConfigError("unknown dataset variant");
}

// Renderings of the rejected preprocessing alternatives (verb/noun swapping,
// fragment removal/addition).  Changed material is bracketed.  These feed the
// comparison report only, not the pipeline.
struct ModificationExamples {
    std::string verb_swap;
    std::string noun_swap;
    std::string fragment_removal;
    std::string fragment_addition;
};

namespace detail {

// Surface forms with a preferred replacement that the inflection carry-over
// would miss ("stays" keeps the stative bare form).
inline const std::vector<std::pair<std::string, std::string>>& verb_swap_exceptions() {
    static const std::vector<std::pair<std::string, std::string>> v = {{"stays", "remain"}};
    return v;
}

inline constexpr std::string_view kAddedSubjectPhrase = "system sampling";

}  // namespace detail

inline ModificationExamples export_modification_examples(const SentenceRecord& rec,
                                                          const Lexicon& lex) {
    ModificationExamples out;
    std::vector<WordToken> toks = parse_word_tokens(rec.text);

    {
        std::vector<WordToken> swapped = toks;
        for (auto& tok : swapped) {
            std::string low = to_lower(tok.core);
            if (lex.tag_word(low) != PosTag::VERB || lex.is_copula(low)) continue;
            std::string repl;
            for (const auto& [surface, target] : detail::verb_swap_exceptions()) {
                if (low == surface) repl = target;
            }
            if (repl.empty()) {
                std::string lemma = lex.verb_lemma(low);
                auto syns = lex.synonyms(lemma, PosTag::VERB);
                if (syns.empty()) continue;
                repl = detail::inflect_like(syns.front(), tok.core, lemma);
            }
            tok.core = "[" + repl + "]";
        }
        out.verb_swap = join_word_tokens(swapped);
    }

    {
        std::vector<WordToken> swapped = toks;
        for (auto& tok : swapped) {
            if (dotted_identifier(tok.core)) {
                tok.core = "[register]";
            } else if (all_caps_token(tok.core)) {
                tok.core = "[condition]";
            }
        }
        out.noun_swap = join_word_tokens(swapped);
    }

    std::vector<Fragment> frags = split_fragments(rec, lex);
    std::string final_punct = frags.back().separator;

    {
        std::vector<std::size_t> kept, removed;
        for (std::size_t i = 0; i < frags.size(); ++i) {
            if (analyze_completeness(frags[i], lex).any()) {
                removed.push_back(i);
            } else {
                kept.push_back(i);
            }
        }
        std::string text;
        for (std::size_t k = 0; k < kept.size(); ++k) {
            text += frags[kept[k]].text();
            text += k + 1 == kept.size() ? final_punct : frags[kept[k]].separator;
        }
        for (std::size_t i : removed) {
            text += " [ " + frags[i].text() + trim(frags[i].separator) + "]";
        }
        out.fragment_removal = text;
    }

    {
        std::string text;
        for (const auto& frag : frags) {
            std::vector<WordToken> body = frag.tokens;
            if (analyze_completeness(frag, lex).any()) {
                std::size_t pos = frag.leading_conjunction ? 1 : 0;
                if (pos > body.size()) pos = body.size();
                body.insert(body.begin() + static_cast<std::ptrdiff_t>(pos),
                            WordToken{"[" + std::string(detail::kAddedSubjectPhrase) + "]", ""});
            }
            text += join_word_tokens(body) + frag.separator;
        }
        out.fragment_addition = text;
    }

    return out;
}

}  // namespace nspg
