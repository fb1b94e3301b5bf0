#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "nspg/assertgen.hpp"

using namespace nspg;
using Catch::Matchers::ContainsSubstring;

namespace {

std::filesystem::path data_path(const std::string& name) {
    return std::filesystem::path(NSPG_DATA_DIR) / name;
}

std::filesystem::path fixture_path(const std::string& name) {
    return data_path("fixtures/" + name);
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
}

AssertionRequest request_for(const std::string& text) {
    AssertionRequest req;
    req.sentence = make_sentence_record("doc", "", 1, text);
    return req;
}

const char* kListing1Body = "aes.done |-> aes.out == $past(aes.key)";
const char* kListing1Message = "previous key has not been read";

// Every identifier in the body must trace back to a binding path.
void check_identifiers_bound(const Assertion& a) {
    std::set<std::string> paths;
    for (const auto& b : a.bindings) paths.insert(b.path);
    static const std::regex ident(R"((\$|[A-Za-z_])[A-Za-z0-9_$.]*)");
    for (auto it = std::sregex_iterator(a.body.begin(), a.body.end(), ident);
         it != std::sregex_iterator(); ++it) {
        if (it->str()[0] == '$') continue;
        INFO(a.property_id << ": " << a.body);
        CHECK(paths.count(it->str()) == 1);
    }
}

}  // namespace

TEST_CASE("register map loads the bundled aes fixture") {
    RegisterMap map = load_register_map(fixture_path("aes_regmap.json"));
    CHECK(map.design == "aes");
    REQUIRE(map.entries.size() == 5);
    CHECK(map.entries.at("aes unit") == "aes");
    CHECK(map.entries.at("output data") == "aes.out");
    CHECK(map.entries.at("key") == "aes.key");
    CHECK(map.entries.at("finish") == "aes.done");
    CHECK(map.entries.at("processor") == "aes.key");
}

TEST_CASE("bundled verb table matches the built-in default") {
    CHECK(load_verb_table(data_path("verbmap.json")) == default_verb_table());
}

TEST_CASE("register map loader rejects malformed input") {
    CHECK_THROWS_AS(load_register_map(data_path("no_such_map.json")), IoError);
    CHECK_THROWS_AS(load_register_map(temp_file("rm_bad.json", "{not json")), ParseError);
    CHECK_THROWS_AS(load_register_map(temp_file("rm_arr.json", "[1,2]")), ValidationError);
    CHECK_THROWS_AS(
        load_register_map(temp_file("rm_empty.json", R"({"design":"d","entries":{}})")),
        ValidationError);
    CHECK_THROWS_AS(
        load_register_map(temp_file("rm_nodesign.json", R"({"entries":{"key":"a"}})")),
        ValidationError);
    CHECK_THROWS_WITH(
        load_register_map(temp_file("rm_dup.json",
                                    R"({"design":"d","entries":{"key":"a","key":"b"}})")),
        ContainsSubstring("phrase collision"));
    CHECK_THROWS_WITH(
        load_register_map(temp_file("rm_case.json",
                                    R"({"design":"d","entries":{"Key":"a","key":"b"}})")),
        ContainsSubstring("phrase collision"));
    CHECK_THROWS_AS(
        load_register_map(temp_file("rm_blank.json", R"({"design":"d","entries":{" ":"a"}})")),
        ValidationError);
    CHECK_THROWS_AS(
        load_register_map(temp_file("rm_nonstr.json", R"({"design":"d","entries":{"key":3}})")),
        ValidationError);
    for (const std::string bad : {"9bad", "a..b", "a.", ".a", "a b", ""}) {
        auto p = temp_file("rm_path.json", R"({"design":"d","entries":{"key":")" + bad + "\"}}");
        CHECK_THROWS_AS(load_register_map(p), ValidationError);
    }
}

TEST_CASE("verb table loader rejects unknown templates") {
    CHECK_THROWS_WITH(
        load_verb_table(temp_file("vt_bad.json", R"({"entries":{"exceeds":"<="}})")),
        ContainsSubstring("unknown template"));
    CHECK_THROWS_WITH(
        load_verb_table(temp_file("vt_dup.json",
                                  R"({"entries":{"is set":"== 1","is set":"== 0"}})")),
        ContainsSubstring("pattern collision"));
    CHECK_THROWS_AS(load_verb_table(temp_file("vt_empty.json", R"({"entries":{}})")),
                    ValidationError);
}

TEST_CASE("bind_nouns matches longest phrases left to right") {
    Lexicon lex = Lexicon::builtin();
    RegisterMap map = load_register_map(fixture_path("aes_regmap.json"));
    auto inputs = load_assertion_inputs(fixture_path("listing1_property.jsonl"));
    REQUIRE(inputs.size() == 1);

    BindResult bind = bind_nouns(inputs[0].sentence, map, lex);
    REQUIRE(bind.bindings.size() == 5);
    CHECK(bind.bindings[0] == NounBinding{2, 4, "aes unit", "aes"});
    CHECK(bind.bindings[1] == NounBinding{6, 7, "finish", "aes.done"});
    CHECK(bind.bindings[2] == NounBinding{15, 17, "output data", "aes.out"});
    CHECK(bind.bindings[3] == NounBinding{24, 25, "processor", "aes.key"});
    CHECK(bind.bindings[4] == NounBinding{25, 27, "aes unit", "aes"});
    CHECK(std::find(bind.unbound_nouns.begin(), bind.unbound_nouns.end(), "block") !=
          bind.unbound_nouns.end());
}

TEST_CASE("bind_nouns prefers the longer of two overlapping phrases") {
    Lexicon lex = Lexicon::builtin();
    RegisterMap map;
    map.design = "d";
    map.entries = {{"output", "o"}, {"output data", "od"}};
    auto rec = make_sentence_record("doc", "", 1, "The output data arrives now.");
    BindResult bind = bind_nouns(rec, map, lex);
    REQUIRE(bind.bindings.size() == 1);
    CHECK(bind.bindings[0].path == "od");
}

TEST_CASE("bind_nouns scans left to right across overlaps") {
    Lexicon lex = Lexicon::builtin();
    RegisterMap map;
    map.design = "d";
    map.entries = {{"data block", "x"}, {"output data", "y"}};
    auto rec = make_sentence_record("doc", "", 1, "The output data block arrives now.");
    BindResult bind = bind_nouns(rec, map, lex);
    REQUIRE(bind.bindings.size() == 1);
    CHECK(bind.bindings[0].path == "y");
    CHECK(std::find(bind.unbound_nouns.begin(), bind.unbound_nouns.end(), "block") !=
          bind.unbound_nouns.end());
}

TEST_CASE("bind_nouns never crosses clause punctuation") {
    Lexicon lex = Lexicon::builtin();
    RegisterMap map;
    map.design = "d";
    map.entries = {{"output data", "od"}};
    auto rec = make_sentence_record("doc", "", 1, "Check the output, data arrives later.");
    CHECK(bind_nouns(rec, map, lex).bindings.empty());
}

TEST_CASE("listing fixture reproduces the published assertion") {
    Lexicon lex = Lexicon::builtin();
    RegisterMap map = load_register_map(fixture_path("aes_regmap.json"));
    VerbOperatorTable verbs = default_verb_table();
    auto inputs = load_assertion_inputs(fixture_path("listing1_property.jsonl"));
    REQUIRE(inputs.size() == 1);

    Assertion a = generate_assertion(inputs[0], map, verbs, lex);
    CHECK(a.property_id == "listing1#1");
    CHECK(a.body == kListing1Body);
    CHECK(a.error_message == kListing1Message);
    CHECK_THAT(a.sva_text, ContainsSubstring("assert property ("));
    CHECK_THAT(a.sva_text, ContainsSubstring("@(posedge clk) disable iff (rst) // Security Property"));
    CHECK_THAT(a.sva_text, ContainsSubstring("    aes.done |-> aes.out == $past(aes.key)\n"));
    CHECK_THAT(a.sva_text, ContainsSubstring("else // Error Message"));
    CHECK_THAT(a.sva_text,
               ContainsSubstring("$error(\"%m previous key has not been read\");"));
    CHECK(validate_sva(a.sva_text).empty());
    CHECK(validate_sva(render_assertion(a)).empty());

    Assertion again = generate_assertion(inputs[0], map, verbs, lex);
    CHECK(a == again);
}

TEST_CASE("paragraph variant of the stalled sentence compiles to the same body") {
    Lexicon lex = Lexicon::builtin();
    RegisterMap map = load_register_map(fixture_path("aes_regmap.json"));
    auto inputs = load_assertion_inputs(fixture_path("properties_aes.jsonl"));
    REQUIRE(inputs.size() == 4);
    Assertion a = generate_assertion(inputs[0], map, default_verb_table(), lex);
    CHECK(a.body == kListing1Body);
    CHECK(a.error_message == kListing1Message);
}

TEST_CASE("the register phrase to signal pairing drives the compiled body") {
    Lexicon lex = Lexicon::builtin();
    RegisterMap map = load_register_map(fixture_path("lc_regmap.json"));
    auto inputs = load_assertion_inputs(fixture_path("properties_lc.jsonl"));
    REQUIRE(inputs.size() == 3);

    Assertion a = generate_assertion(inputs[0], map, default_verb_table(), lex);
    CHECK(a.body == "fault_det |-> fatal_bus_integ_error_q == 1");
    CHECK(a.error_message == "fatal_bus_integ_error_q is set to 1");

    Assertion b = generate_assertion(inputs[1], map, default_verb_table(), lex);
    CHECK(b.body == "lc_ctrl.cmd == 1 |-> $stable(lc_ctrl.state)");
    bool noted = false;
    for (const auto& d : b.diagnostics)
        if (d.find("unless") != std::string::npos) noted = true;
    CHECK(noted);

    Assertion c = generate_assertion(inputs[2], map, default_verb_table(), lex);
    CHECK(c.body == "fault_det |-> $stable(fatal_bus_integ_error_q)");
}

TEST_CASE("every verb template compiles over the uart fixtures") {
    Lexicon lex = Lexicon::builtin();
    RegisterMap map = load_register_map(fixture_path("uart_regmap.json"));
    auto inputs = load_assertion_inputs(fixture_path("properties_uart.jsonl"));
    REQUIRE(inputs.size() == 6);
    const std::vector<std::string> expected = {
        "uart.break_st |-> uart.intr == 1",
        "uart.parity == 1 |-> uart.err == 1",
        "uart.rx_buf == 0 |-> $stable(uart.cfg)",
        "uart.err == 1 |-> uart.rx_buf != uart.cfg",
        "uart.intr == 1 |-> $stable(uart.parity)",
        "uart.cfg == 0 |-> uart.err == 0",
    };
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        Assertion a = generate_assertion(inputs[i], map, default_verb_table(), lex);
        INFO(inputs[i].sentence.text);
        CHECK(a.body == expected[i]);
    }
}

TEST_CASE("every bundled fixture generates a grammatical assertion") {
    Lexicon lex = Lexicon::builtin();
    const std::vector<std::pair<std::string, std::string>> sets = {
        {"aes_regmap.json", "listing1_property.jsonl"},
        {"aes_regmap.json", "properties_aes.jsonl"},
        {"lc_regmap.json", "properties_lc.jsonl"},
        {"uart_regmap.json", "properties_uart.jsonl"},
    };
    for (const auto& [map_name, props_name] : sets) {
        RegisterMap map = load_register_map(fixture_path(map_name));
        for (const auto& input : load_assertion_inputs(fixture_path(props_name))) {
            Assertion a = generate_assertion(input, map, default_verb_table(), lex);
            INFO(input.sentence.text);
            CHECK(validate_sva(a.sva_text).empty());
            CHECK(validate_sva(render_assertion(a)).empty());
            check_identifiers_bound(a);
        }
    }
}

TEST_CASE("clock and reset names come from the config") {
    Lexicon lex = Lexicon::builtin();
    RegisterMap map = load_register_map(fixture_path("aes_regmap.json"));
    auto inputs = load_assertion_inputs(fixture_path("listing1_property.jsonl"));
    Assertion a =
        generate_assertion(inputs[0], map, default_verb_table(), lex, {"clk_i", "rst_ni"});
    CHECK_THAT(a.sva_text, ContainsSubstring("@(posedge clk_i) disable iff (rst_ni)"));
    CHECK(validate_sva(a.sva_text).empty());
}

TEST_CASE("quotes in an error message are escaped") {
    Lexicon lex = Lexicon::builtin();
    RegisterMap map = load_register_map(fixture_path("aes_regmap.json"));
    auto inputs = load_assertion_inputs(fixture_path("listing1_property.jsonl"));
    AssertionRequest req = inputs[0];
    req.error_message = "the \"previous\" key leaked";
    Assertion a = generate_assertion(req, map, default_verb_table(), lex);
    CHECK_THAT(a.sva_text, ContainsSubstring("$error(\"%m the \\\"previous\\\" key leaked\");"));
    CHECK(validate_sva(a.sva_text).empty());
}

TEST_CASE("unmatched sentences raise generation errors") {
    Lexicon lex = Lexicon::builtin();
    RegisterMap map = load_register_map(fixture_path("aes_regmap.json"));
    VerbOperatorTable verbs = default_verb_table();

    CHECK_THROWS_WITH(
        generate_assertion(request_for("The watchdog barks loudly at midnight."), map, verbs, lex),
        ContainsSubstring("unmappable property"));
    CHECK_THROWS_WITH(generate_assertion(request_for("The output data is sampled."), map, verbs,
                                         lex),
                      ContainsSubstring("no operator for predicate"));
    CHECK_THROWS_WITH(generate_assertion(request_for("If 1 is set to 5, the key is cleared."),
                                         map, verbs, lex),
                      ContainsSubstring("no subject"));
    CHECK_THROWS_WITH(generate_assertion(request_for("The key is set to high."), map, verbs, lex),
                      ContainsSubstring("no operand after"));
    CHECK_THROWS_WITH(
        generate_assertion(request_for("The key matches nothing here."), map, verbs, lex),
        ContainsSubstring("no right operand"));
    CHECK_THROWS_AS(generate_assertion(request_for("   "), map, verbs, lex), ValidationError);
}

TEST_CASE("assertion inputs load with optional fields and line errors") {
    auto good = temp_file("ai_good.jsonl",
                          R"({"id":"d#1","doc":"d","text":"The key is cleared.","score":0.9})"
                          "\n"
                          R"({"id":"d#2","doc":"d","text":"More.","error_message":null})"
                          "\n");
    auto inputs = load_assertion_inputs(good);
    REQUIRE(inputs.size() == 2);
    CHECK(inputs[0].sentence.id == "d#1");
    CHECK(inputs[0].sentence.word_count == 4);
    CHECK_FALSE(inputs[0].error_message.has_value());
    CHECK_FALSE(inputs[1].error_message.has_value());

    auto bad = temp_file("ai_bad.jsonl", "{\"id\":\"d#1\",\"doc\":\"d\",\"text\":\"ok\"}\nnot json\n");
    try {
        load_assertion_inputs(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(load_assertion_inputs(temp_file("ai_miss.jsonl", R"({"id":"d#1","doc":"d"})")),
                    ParseError);
    CHECK_THROWS_AS(
        load_assertion_inputs(temp_file("ai_empty.jsonl", R"({"id":"","doc":"d","text":"x"})")),
        ParseError);
    CHECK_THROWS_AS(load_assertion_inputs(data_path("no_such_inputs.jsonl")), IoError);
}

TEST_CASE("saved assertion files concatenate rendered blocks") {
    Lexicon lex = Lexicon::builtin();
    RegisterMap map = load_register_map(fixture_path("uart_regmap.json"));
    auto inputs = load_assertion_inputs(fixture_path("properties_uart.jsonl"));
    std::vector<Assertion> assertions;
    for (const auto& input : inputs)
        assertions.push_back(generate_assertion(input, map, default_verb_table(), lex));

    auto path = std::filesystem::temp_directory_path() / "nspg_uart.sva";
    save_assertions(assertions, path);
    std::ifstream in(path, std::ios::binary);
    std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::string expected;
    for (std::size_t i = 0; i < assertions.size(); ++i) {
        if (i > 0) expected += "\n";
        expected += render_assertion(assertions[i]);
    }
    CHECK(written == expected);
    CHECK_THAT(written, ContainsSubstring("// uart_doc#1: When the break condition"));
}

TEST_CASE("validator accepts the supported grammar") {
    CHECK(validate_sva("assert property ( @(posedge clk) disable iff (rst) a ) ;").empty());
    CHECK(validate_sva("assert property ( @(posedge clk) disable iff (rst) (a.b == 1) && c ) ;")
              .empty());
    CHECK(validate_sva("assert property ( @(posedge top.clk) disable iff (top.rst) "
                       "$past(a.b) != 2'b01 ) else $error(\"%m oops\") ;")
              .empty());
}

TEST_CASE("validator reports structural problems") {
    CHECK_THAT(validate_sva("").at(0), ContainsSubstring("empty assertion"));
    CHECK_THAT(validate_sva("assert property ( @(posedge clk) disable iff (rst) a )").at(0),
               ContainsSubstring("expected \";\""));
    CHECK_THAT(validate_sva("assert property ( @(posedge clk) disable iff (rst) a = 1 ) ;").at(0),
               ContainsSubstring("unexpected character '='"));
    CHECK_THAT(
        validate_sva("assert property ( @(posedge clk) disable iff (rst) $later(a) ) ;").at(0),
        ContainsSubstring("expected a term"));
    CHECK_THAT(validate_sva("assert property ( @(posedge clk) disable iff (rst) $past() ) ;").at(0),
               ContainsSubstring("expected a signal name"));
    CHECK_THAT(validate_sva("assert property ( @(posedge clk) disable iff (rst) a == ) ;").at(0),
               ContainsSubstring("expected a term"));
    CHECK_THAT(validate_sva("assert property ( @(posedge clk) disable iff (rst) a ) ; extra").at(0),
               ContainsSubstring("unexpected trailing token"));
    CHECK_THAT(validate_sva("assert property ( @(posedge clk) disable iff (rst) a..b ) ;").at(0),
               ContainsSubstring("invalid signal name"));
    CHECK_THAT(validate_sva("assert property ( @(posedge clk) disable iff (rst) a ) else banana ;")
                   .at(0),
               ContainsSubstring("expected $error"));
    CHECK_THAT(
        validate_sva("assert property ( @(posedge clk) disable iff (rst) a ) else $error(\"x ;")
            .at(0),
        ContainsSubstring("unterminated string"));
    CHECK_FALSE(validate_sva("assert assert assert").empty());
}
