#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include <json.hpp>

#include "dfadecomp/io.hpp"

using namespace dfadecomp;

namespace {

LabeledSamples fig1() {
    return LabeledSamples::make(Alphabet::numeric(2),
                                {{0, 0, 1}, {0, 0, 0}, {0, 1}}, {{1}, {0, 1, 0}});
}

Dfa ends_in_a() {
    Dfa dfa(2, 2);
    dfa.set_transition(1, 0, 2);
    dfa.set_transition(1, 1, 1);
    dfa.set_transition(2, 0, 2);
    dfa.set_transition(2, 1, 1);
    dfa.set_accepting(2, true);
    return dfa;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("prefix tree DOT export") {
    const std::string dot = to_dot(build_apta(fig1()));
    CHECK(contains(dot, "digraph apta {"));
    CHECK(contains(dot, "rankdir=LR"));
    CHECK(contains(dot, "__start -> 0;"));
    // Accepting leaf 3, rejecting leaf 6, interior 2.
    CHECK(contains(dot, "3 [shape=doublecircle]"));
    CHECK(contains(dot, "6 [shape=box]"));
    CHECK(contains(dot, "2 [shape=circle]"));
    CHECK(contains(dot, "0 -> 1 [label=\"0\"]"));
    CHECK(contains(dot, "0 -> 6 [label=\"1\"]"));
    CHECK_FALSE(contains(dot, "tooltip"));
}

TEST_CASE("acceptor DOT export labels merged states") {
    const std::string dot = to_dot(reduce_to_3dfa(build_apta(fig1())));
    CHECK(contains(dot, "digraph three_dfa {"));
    CHECK(contains(dot, "__start -> 6;"));
    CHECK(contains(dot, "0 [shape=doublecircle, tooltip=\"preimages: 3 4\"]"));
    CHECK(contains(dot, "1 [shape=box]"));
    // Parallel edges into one target share a single label.
    CHECK(contains(dot, "3 -> 0 [label=\"0,1\"]"));
}

TEST_CASE("complete DFA DOT export") {
    const std::string dot = to_dot(ends_in_a(), Alphabet({"a", "b"}));
    CHECK(contains(dot, "digraph dfa {"));
    CHECK(contains(dot, "__start -> 1;"));
    CHECK(contains(dot, "2 [shape=doublecircle]"));
    CHECK(contains(dot, "1 [shape=box]"));
    CHECK(contains(dot, "1 -> 2 [label=\"a\"]"));
    CHECK(contains(dot, "1 -> 1 [label=\"b\"]"));

    const std::string quoted = to_dot(ends_in_a(), Alphabet({"x\"y", "b"}));
    CHECK(contains(quoted, "label=\"x\\\"y\""));
}

TEST_CASE("decomposition JSON round trip") {
    Decomposition decomposition;
    decomposition.alphabet = Alphabet({"a", "b"});
    decomposition.dfas = {ends_in_a(), ends_in_a()};
    decomposition.dfas[1].set_accepting(1, true);

    const std::string text = decomposition_to_json(decomposition);
    CHECK(text.back() == '\n');
    const Decomposition parsed = decomposition_from_json(text);
    CHECK(parsed.alphabet == decomposition.alphabet);
    REQUIRE(parsed.dfas.size() == 2);
    CHECK(parsed.dfas[0] == decomposition.dfas[0]);
    CHECK(parsed.dfas[1] == decomposition.dfas[1]);

    const nlohmann::json root = nlohmann::json::parse(text);
    CHECK(root.at("alphabet") == nlohmann::json({"a", "b"}));
    CHECK(root.at("dfas").size() == 2);
    CHECK(root.at("dfas")[0].at("num_states") == 2);
    CHECK(root.at("dfas")[0].at("initial") == 1);
    CHECK(root.at("dfas")[0].at("accepting") == nlohmann::json({2}));
    CHECK(root.at("dfas")[0].at("delta").size() == 4);
}

TEST_CASE("decomposition JSON parse errors") {
    const auto code_of = [](const std::string& text) {
        try {
            decomposition_from_json(text);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InternalInconsistency;
    };

    CHECK(code_of("not json") == ErrorCode::MalformedInput);
    CHECK(code_of("{}") == ErrorCode::MalformedInput);
    CHECK(code_of(R"({"alphabet": ["a"], "dfas": "x"})") == ErrorCode::MalformedInput);

    const std::string valid = decomposition_to_json([] {
        Decomposition d;
        d.alphabet = Alphabet({"a", "b"});
        d.dfas = {ends_in_a()};
        return d;
    }());
    nlohmann::json root = nlohmann::json::parse(valid);

    nlohmann::json bad_letter = root;
    bad_letter["dfas"][0]["delta"][0]["letter"] = "z";
    CHECK(code_of(bad_letter.dump()) == ErrorCode::UnknownSymbol);

    nlohmann::json bad_initial = root;
    bad_initial["dfas"][0]["initial"] = 9;
    CHECK(code_of(bad_initial.dump()) == ErrorCode::MalformedInput);

    nlohmann::json bad_accepting = root;
    bad_accepting["dfas"][0]["accepting"] = {0};
    CHECK(code_of(bad_accepting.dump()) == ErrorCode::MalformedInput);

    nlohmann::json bad_target = root;
    bad_target["dfas"][0]["delta"][0]["to"] = 7;
    CHECK(code_of(bad_target.dump()) == ErrorCode::MalformedInput);

    nlohmann::json duplicate = root;
    duplicate["dfas"][0]["delta"].push_back(duplicate["dfas"][0]["delta"][0]);
    CHECK(code_of(duplicate.dump()) == ErrorCode::MalformedInput);

    // Dropping one edge leaves the DFA incomplete; validate() rejects it.
    nlohmann::json partial = root;
    partial["dfas"][0]["delta"].erase(0);
    CHECK(code_of(partial.dump()) == ErrorCode::InvalidAutomaton);
}

TEST_CASE("acceptor JSON export") {
    const ThreeDfa acceptor = reduce_to_3dfa(build_apta(fig1()));
    const nlohmann::json root = nlohmann::json::parse(three_dfa_to_json(acceptor));
    CHECK(root.at("alphabet") == nlohmann::json({"0", "1"}));
    CHECK(root.at("num_states") == 7);
    CHECK(root.at("initial") == 6);
    CHECK(root.at("accepting") == nlohmann::json({0, 4}));
    CHECK(root.at("rejecting") == nlohmann::json({1, 2}));
    CHECK(root.at("merged") == nlohmann::json({0}));
    CHECK(root.at("provenance")[0] == nlohmann::json({3, 4}));
    CHECK(root.at("provenance")[6] == nlohmann::json({0}));

    bool found = false;
    for (const auto& edge : root.at("delta")) {
        if (edge.at("from") == 6 && edge.at("letter") == "0") {
            CHECK(edge.at("to") == 5);
            found = true;
        }
    }
    CHECK(found);
    // Leaves contribute no edges.
    for (const auto& edge : root.at("delta")) CHECK(edge.at("from") != 0);
}
