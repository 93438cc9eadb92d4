// Copyright 2026 The discoq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include "discoq/circuit.hpp"

using namespace discoq;

namespace {

Lexicon tiny_lexicon() {
    Lexicon lex;
    for (const char* w : {"man", "meal"}) lex[w] = make_entry(w, WordCategory::Noun);
    lex["prepares"] = make_entry("prepares", WordCategory::TransitiveVerb);
    lex["skillful"] = make_entry("skillful", WordCategory::Adjective);
    lex["tasty"] = make_entry("tasty", WordCategory::Adjective);
    return lex;
}

double bound_angle(const Gate& g) { return std::get<double>(g.angle); }

}  // namespace

TEST_CASE("three-word sentence compiles to the expected gate list", "[circuit]") {
    const Diagram d = parse_sentence({"man", "prepares", "meal"}, tiny_lexicon());
    const Circuit c = compile_diagram(d, AnsatzConfig{});

    CHECK(c.n_qubits() == 5);
    CHECK(c.sentence_qubits() == std::vector<int>{2});
    CHECK(c.post_select() == std::map<int, int>{{0, 0}, {1, 0}, {3, 0}, {4, 0}});
    CHECK(c.free_symbols() == std::set<std::string>{"man__0", "man__1", "man__2", "prepares__0",
                                                    "prepares__1", "meal__0", "meal__1",
                                                    "meal__2"});
    CHECK_FALSE(c.is_bound());

    const std::string expected =
        "RX 0 man__0\n"
        "RZ 0 man__1\n"
        "RX 0 man__2\n"
        "H 1\n"
        "H 2\n"
        "H 3\n"
        "CRZ 1,2 prepares__0\n"
        "CRZ 2,3 prepares__1\n"
        "RX 4 meal__0\n"
        "RZ 4 meal__1\n"
        "RX 4 meal__2\n"
        "CX 0,1\n"
        "H 0\n"
        "CX 3,4\n"
        "H 3\n"
        "POSTSELECT 0=0\n"
        "POSTSELECT 1=0\n"
        "POSTSELECT 3=0\n"
        "POSTSELECT 4=0\n"
        "SENTENCE 2\n";
    CHECK(dump(c) == expected);
}

TEST_CASE("five-word sentence sizes: wires, gates and symbols", "[circuit]") {
    const Diagram d =
        parse_sentence({"skillful", "man", "prepares", "tasty", "meal"}, tiny_lexicon());
    const Circuit c = compile_diagram(d, AnsatzConfig{});

    CHECK(c.n_qubits() == 9);
    CHECK(c.gates().size() == 25);
    CHECK(c.sentence_qubits() == std::vector<int>{4});
    CHECK(c.post_select().size() == 8);
    // 2 nouns x 3 + 2 adjectives x 1 + 1 transitive verb x 2
    CHECK(c.free_symbols().size() == 10);
}

TEST_CASE("symbol counts follow word categories", "[circuit]") {
    // Repeated words share symbols: both "man" boxes contribute the same 3.
    Lexicon lex = tiny_lexicon();
    lex["admires"] = make_entry("admires", WordCategory::TransitiveVerb);
    const Diagram d = parse_sentence({"man", "admires", "man"}, lex);
    const Circuit c = compile_diagram(d, AnsatzConfig{});
    CHECK(c.free_symbols() == std::set<std::string>{"man__0", "man__1", "man__2", "admires__0",
                                                    "admires__1"});
}

TEST_CASE("unsupported ansatz shapes are rejected", "[circuit]") {
    const Diagram d = parse_sentence({"man", "prepares", "meal"}, tiny_lexicon());
    CHECK_THROWS_AS(compile_diagram(d, AnsatzConfig{2, 1, 1}), UnsupportedAnsatz);
    CHECK_THROWS_AS(compile_diagram(d, AnsatzConfig{1, 2, 1}), UnsupportedAnsatz);
    CHECK_THROWS_AS(compile_diagram(d, AnsatzConfig{1, 1, 2}), UnsupportedAnsatz);

    Diagram broken;
    broken.wires = {{Base::N, 0}};
    broken.open_wires = {0};
    CHECK_THROWS_AS(compile_diagram(broken, AnsatzConfig{}), DiagramNotSentence);
}

TEST_CASE("bind substitutes values and applies adjoint signs", "[circuit]") {
    Circuit c(1);
    c.add_gate(Gate::rx(0, SymbolRef{"a"}));
    c.add_gate(Gate::rz(0, SymbolRef{"a", true}));
    c.add_gate(Gate::rx(0, SymbolRef{"b"}));

    const Circuit b = discoq::bind(c, {{"a", 0.7}, {"b", -0.2}});
    REQUIRE(b.is_bound());
    CHECK(bound_angle(b.gates()[0]) == 0.7);
    CHECK(bound_angle(b.gates()[1]) == -0.7);
    CHECK(bound_angle(b.gates()[2]) == -0.2);

    CHECK_THROWS_AS(discoq::bind(c, {{"a", 0.7}}), MissingSymbol);
}

TEST_CASE("adjoint reverses gates, negates angles, drops measurements", "[circuit]") {
    Circuit c(2);
    c.add_gate(Gate::h(0));
    c.add_gate(Gate::rx(0, 0.5));
    c.add_gate(Gate::crz(0, 1, 0.3));
    c.set_sentence_qubits({0});
    c.post_select_qubit(1, 0);

    const Circuit a = adjoint(c);
    REQUIRE(a.gates().size() == 3);
    CHECK(a.gates()[0].kind == GateKind::CRZ);
    CHECK(bound_angle(a.gates()[0]) == -0.3);
    CHECK(a.gates()[1].kind == GateKind::RX);
    CHECK(bound_angle(a.gates()[1]) == -0.5);
    CHECK(a.gates()[2].kind == GateKind::H);
    CHECK(a.post_select().empty());
    CHECK(a.sentence_qubits().empty());

    CHECK(adjoint(a).gates() == c.gates());

    Circuit sym(1);
    sym.add_gate(Gate::rz(0, SymbolRef{"w__0"}));
    const Circuit sadj = adjoint(sym);
    CHECK(bound_angle(discoq::bind(sadj, {{"w__0", 0.4}}).gates()[0]) == -0.4);
}

TEST_CASE("compose remaps wires and merges measurements", "[circuit]") {
    Circuit a(2);
    a.add_gate(Gate::cx(0, 1));
    a.set_sentence_qubits({0});
    a.post_select_qubit(1, 0);

    Circuit b(2);
    b.add_gate(Gate::h(0));
    b.add_gate(Gate::crz(0, 1, 0.9));
    b.post_select_qubit(1, 1);

    const Circuit out = compose(a, b, {{0, 2}, {1, 3}});
    CHECK(out.n_qubits() == 4);
    REQUIRE(out.gates().size() == 3);
    CHECK(out.gates()[1].qubits[0] == 2);
    CHECK(out.gates()[2].qubits[0] == 2);
    CHECK(out.gates()[2].qubits[1] == 3);
    CHECK(out.sentence_qubits() == std::vector<int>{0});
    CHECK(out.post_select() == std::map<int, int>{{1, 0}, {3, 1}});

    SECTION("identity mapping reuses a's qubits") {
        Circuit plain(2);
        plain.add_gate(Gate::h(0));
        const Circuit same = compose(a, plain);
        CHECK(same.n_qubits() == 2);
        CHECK(same.gates().size() == a.gates().size() + 1);
        CHECK_THROWS_AS(compose(a, b, {{0, 1}, {1, 1}}), WireMapNotInjective);
        // an explicit target colliding with an implicit identity wire
        CHECK_THROWS_AS(compose(a, b, {{1, 0}}), WireMapNotInjective);
    }
    SECTION("conflicting post-selections are rejected") {
        Circuit p(1);
        p.post_select_qubit(0, 1);
        CHECK_THROWS_AS(compose(a, p, {{0, 1}}), PostSelectConflict);
        // b's post-selection landing on a's sentence qubit
        CHECK_THROWS_AS(compose(a, p, {{0, 0}}), PostSelectConflict);
    }
}

TEST_CASE("parallel places the second circuit on fresh qubits", "[circuit]") {
    Circuit a(2);
    a.add_gate(Gate::h(1));
    a.set_sentence_qubits({1});
    a.post_select_qubit(0, 0);

    Circuit b(2);
    b.add_gate(Gate::cx(0, 1));
    b.set_sentence_qubits({0});
    b.post_select_qubit(1, 1);

    const Circuit out = parallel(a, b);
    CHECK(out.n_qubits() == 4);
    REQUIRE(out.gates().size() == 2);
    CHECK(out.gates()[1].qubits == std::array<int, 3>{2, 3, -1});
    CHECK(out.sentence_qubits() == std::vector<int>{1, 2});
    CHECK(out.post_select() == std::map<int, int>{{0, 0}, {3, 1}});
}

TEST_CASE("circuit construction guards its invariants", "[circuit]") {
    Circuit c(2);
    CHECK_THROWS_AS(c.add_gate(Gate::h(2)), Error);
    CHECK_THROWS_AS(Gate::crz(1, 1, 0.3), Error);
    CHECK_THROWS_AS(Gate::cswap(0, 1, 1), Error);
    CHECK_THROWS_AS(Gate::rx(0, Angle{}), Error);

    c.post_select_qubit(0, 0);
    CHECK_THROWS_AS(c.post_select_qubit(0, 1), PostSelectConflict);
    c.post_select_qubit(0, 0);  // re-asserting the same bit is fine
    CHECK_THROWS_AS(c.set_sentence_qubits({0}), PostSelectConflict);
    c.set_sentence_qubits({1});
    CHECK_THROWS_AS(c.post_select_qubit(1, 0), PostSelectConflict);
    CHECK_THROWS_AS(c.set_sentence_qubits({1, 1}), Error);
}

TEST_CASE("angle formatting distinguishes symbols, signs and values", "[circuit]") {
    CHECK(format_angle(Angle{0.5}) == "0.5");
    CHECK(format_angle(Angle{SymbolRef{"w__1"}}) == "w__1");
    CHECK(format_angle(Angle{SymbolRef{"w__1", true}}) == "-w__1");
    CHECK(format_angle(Angle{}) == "");
    CHECK(symbol_name("man", 2) == "man__2");
}
