#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "nspg/augment.hpp"

using namespace nspg;

namespace {

const char* kDebugSentence =
    "If some hang condition were to occur when in this mode, the main state machine debug "
    "register should be read.";

SentenceRecord rec(const std::string& text, int ordinal = 1) {
    return make_sentence_record("doc", "", ordinal, text);
}

std::vector<std::string> cores(const std::string& text) {
    std::vector<std::string> out;
    for (auto& t : parse_word_tokens(text)) out.push_back(t.core);
    return out;
}

std::vector<std::string> sorted_cores(const std::string& text) {
    auto c = cores(text);
    std::sort(c.begin(), c.end());
    return c;
}

}  // namespace

// Documented seeds reproducing the four augmentation rows for the debug
// register sentence: RS=1, RD=6, SR=0, RI=399.
TEST_CASE("random swap relocates the when-phrase to the end (seed 1)") {
    auto out = random_swap(rec(kDebugSentence), Lexicon::builtin(), 1);
    REQUIRE(out.has_value());
    CHECK(*out ==
          "If some hang condition were to occur, the main state machine debug register should "
          "be read when in this mode.");
}

TEST_CASE("random deletion removes the determiner 'some' (seed 6)") {
    auto out = random_deletion(rec(kDebugSentence), Lexicon::builtin(), 6);
    REQUIRE(out.has_value());
    CHECK(*out ==
          "If hang condition were to occur when in this mode, the main state machine debug "
          "register should be read.");
}

TEST_CASE("synonym replacement swaps occur for happen (seed 0)") {
    auto out = synonym_replacement(rec(kDebugSentence), Lexicon::builtin(), 0);
    REQUIRE(out.has_value());
    CHECK(*out ==
          "If some hang condition were to happen when in this mode, the main state machine "
          "debug register should be read.");
}

TEST_CASE("random insertion appends immediately after read (seed 399)") {
    auto out = random_insertion(rec(kDebugSentence), Lexicon::builtin(), 399);
    REQUIRE(out.has_value());
    CHECK(*out ==
          "If some hang condition were to occur when in this mode, the main state machine "
          "debug register should be read immediately.");
}

TEST_CASE("random swap preserves the word multiset and changes the text") {
    const auto& lex = Lexicon::builtin();
    auto r = rec(kDebugSentence);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto out = random_swap(r, lex, seed);
        if (!out) continue;
        CHECK(*out != r.text);
        CHECK(sorted_cores(*out) == sorted_cores(r.text));
    }
}

TEST_CASE("random swap needs two conjunction phrases") {
    const auto& lex = Lexicon::builtin();
    CHECK_FALSE(random_swap(rec("The register holds the previous value."), lex, 1).has_value());
    CHECK_FALSE(random_swap(rec("If the bit is set the engine stops."), lex, 1).has_value());
}

TEST_CASE("random deletion removes exactly one modifier token") {
    const auto& lex = Lexicon::builtin();
    auto r = rec(kDebugSentence);
    auto before = cores(r.text);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto out = random_deletion(r, lex, seed);
        REQUIRE(out.has_value());
        auto after = cores(*out);
        CHECK(after.size() + 1 == before.size());
        // The removed token was ADJ, DET or ADV.
        std::vector<std::string> b = before, a = after;
        std::sort(b.begin(), b.end());
        std::sort(a.begin(), a.end());
        std::vector<std::string> diff;
        std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(diff));
        REQUIRE(diff.size() == 1);
        auto tag = lex.tag_word(diff[0]);
        bool modifier = tag == PosTag::ADJ || tag == PosTag::DET || tag == PosTag::ADV;
        CHECK(modifier);
    }
}

TEST_CASE("random deletion yields nothing without modifiers") {
    CHECK_FALSE(random_deletion(rec("CTRL_SHADOWED gates writes."), Lexicon::builtin(), 3)
                    .has_value());
}

TEST_CASE("synonym replacement changes exactly one verb token") {
    const auto& lex = Lexicon::builtin();
    auto r = rec(kDebugSentence);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto out = synonym_replacement(r, lex, seed);
        REQUIRE(out.has_value());
        auto a = cores(r.text);
        auto b = cores(*out);
        REQUIRE(a.size() == b.size());
        int changed = 0;
        std::size_t where = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) {
                ++changed;
                where = i;
            }
        CHECK(changed == 1);
        CHECK(lex.tag_word(a[where]) == PosTag::VERB);
    }
}

TEST_CASE("synonym replacement skips copulas") {
    const auto& lex = Lexicon::builtin();
    CHECK_FALSE(synonym_replacement(rec("The value is 5 and the flag is 1."), lex, 0)
                    .has_value());
}

TEST_CASE("passive participles get participle synonyms") {
    const auto& lex = Lexicon::builtin();
    // Only one candidate verb here, so every seed picks it.
    auto out = synonym_replacement(rec("The register must be read."), lex, 0);
    REQUIRE(out.has_value());
    CHECK(*out == "The register must be retrieved.");
}

TEST_CASE("random insertion adds one adverb adjacent to a verb") {
    const auto& lex = Lexicon::builtin();
    auto r = rec(kDebugSentence);
    const auto& pool = lex.adverb_pool();
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto out = random_insertion(r, lex, seed);
        REQUIRE(out.has_value());
        auto a = cores(r.text);
        auto b = cores(*out);
        REQUIRE(b.size() == a.size() + 1);
        std::size_t i = 0;
        while (i < a.size() && a[i] == b[i]) ++i;
        std::string added = to_lower(b[i]);
        CHECK(std::find(pool.begin(), pool.end(), added) != pool.end());
        bool verb_before = i > 0 && lex.tag_word(b[i - 1]) == PosTag::VERB;
        bool verb_after = i + 1 < b.size() && lex.tag_word(b[i + 1]) == PosTag::VERB;
        CHECK((verb_before || verb_after));
    }
}

TEST_CASE("protected register names survive every op") {
    const auto& lex = Lexicon::builtin();
    auto r = rec("If KEYMGR.CTRL.STATUS stays the same when CTRL_SHADOWED is set to 1, "
                 "the main FIFO must drop the extra request.");
    for (std::uint64_t seed = 0; seed < 80; ++seed) {
        for (AugOp op : {AugOp::RS, AugOp::RD, AugOp::SR, AugOp::RI}) {
            auto out = apply_aug_op(op, r, lex, seed);
            if (!out) continue;
            for (const char* reg : {"KEYMGR.CTRL.STATUS", "CTRL_SHADOWED", "FIFO"})
                CHECK(out->find(reg) != std::string::npos);
        }
    }
}

TEST_CASE("ops are deterministic per seed") {
    const auto& lex = Lexicon::builtin();
    auto r = rec(kDebugSentence);
    for (AugOp op : {AugOp::RS, AugOp::RD, AugOp::SR, AugOp::RI}) {
        auto a = apply_aug_op(op, r, lex, 77);
        auto b = apply_aug_op(op, r, lex, 77);
        CHECK(a == b);
    }
}

TEST_CASE("augment_corpus tags provenance and counts per op") {
    const auto& lex = Lexicon::builtin();
    std::vector<CorpusEntry> in;
    in.push_back({rec(kDebugSentence, 1), 1, std::nullopt});
    in.push_back({rec("Every output register must be read at least once for the AES unit "
                      "to continue.", 2),
                  0, std::nullopt});

    auto res = augment_corpus(in, {AugOp::RS, AugOp::RD, AugOp::SR, AugOp::RI}, lex, 42);
    REQUIRE(res.entries.size() >= in.size());
    std::size_t augmented = 0;
    for (const auto& e : res.entries) {
        if (!e.aug) continue;
        ++augmented;
        CHECK((e.aug->op == "RS" || e.aug->op == "RD" || e.aug->op == "SR" || e.aug->op == "RI"));
        CHECK(e.rec.id.find(e.aug->origin_id) == 0);
        CHECK(e.rec.id != e.aug->origin_id);
        bool found = false;
        for (const auto& o : in)
            if (o.rec.id == e.aug->origin_id) {
                found = true;
                CHECK(e.rec.text != o.rec.text);
                CHECK(e.label == o.label);
            }
        CHECK(found);
    }
    std::size_t counted = 0;
    for (auto& [op, n] : res.produced) counted += n;
    CHECK(counted == augmented);
    validate_corpus(res.entries);
}

TEST_CASE("augment_corpus results are independent of corpus order") {
    const auto& lex = Lexicon::builtin();
    std::vector<CorpusEntry> in;
    in.push_back({rec(kDebugSentence, 1), std::nullopt, std::nullopt});
    in.push_back({rec("When the engine stalls, the FIFO holds the previous beat until "
                      "software clears it.", 2),
                  std::nullopt, std::nullopt});
    auto forward = augment_corpus(in, {AugOp::RS, AugOp::SR}, lex, 9).entries;
    std::vector<CorpusEntry> rev = {in[1], in[0]};
    auto backward = augment_corpus(rev, {AugOp::RS, AugOp::SR}, lex, 9).entries;

    auto text_of = [](const std::vector<CorpusEntry>& v, const std::string& id) {
        for (auto& e : v)
            if (e.rec.id == id) return e.rec.text;
        return std::string();
    };
    for (const auto& e : forward)
        if (e.aug) CHECK(e.rec.text == text_of(backward, e.rec.id));
}

TEST_CASE("augment_corpus validates its arguments") {
    CHECK_THROWS_AS(augment_corpus({}, {}, Lexicon::builtin(), 1), ValidationError);
    AugmentOptions opt;
    opt.multiplicity = 0;
    CHECK_THROWS_AS(augment_corpus({}, {AugOp::RS}, Lexicon::builtin(), 1, opt),
                    ValidationError);
}

TEST_CASE("multiplicity produces distinct extra variants") {
    const auto& lex = Lexicon::builtin();
    std::vector<CorpusEntry> in = {{rec(kDebugSentence), std::nullopt, std::nullopt}};
    AugmentOptions opt;
    opt.multiplicity = 3;
    opt.include_originals = false;
    auto res = augment_corpus(in, {AugOp::RI}, lex, 5, opt);
    std::set<std::string> texts;
    for (auto& e : res.entries) texts.insert(e.rec.text);
    CHECK(texts.size() == res.entries.size());  // duplicates were dropped
    CHECK(res.entries.size() >= 1);
}

TEST_CASE("aug op parsing") {
    auto ops = parse_aug_ops("rs, RD,sr,RI");
    REQUIRE(ops.size() == 4);
    CHECK(ops[0] == AugOp::RS);
    CHECK(ops[3] == AugOp::RI);
    CHECK_THROWS_AS(parse_aug_op("XX"), ConfigError);
}
