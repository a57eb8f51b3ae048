#include <doctest.h>

#include <random>

#include "protolearn/dot.hpp"
#include "protolearn/errors.hpp"
#include "protolearn/mealy.hpp"
#include "support.hpp"

using namespace protolearn;
using namespace testsupport;

namespace {

// q0 -i1/o1-> q1, q0 -i2/o1-> q0, q1 -i1/o2-> q0, q1 -i2/o1-> q1
MealyMachine two_state() {
    MealyBuilder b;
    const auto q0 = b.add_state("q0");
    const auto q1 = b.add_state("q1");
    const auto i1 = Symbol::of("i1");
    const auto i2 = Symbol::of("i2");
    const auto o1 = Symbol::of("o1");
    const auto o2 = Symbol::of("o2");
    b.set_initial(q0);
    b.add_transition(q0, i1, o1, q1).add_transition(q0, i2, o1, q0);
    b.add_transition(q1, i1, o2, q0).add_transition(q1, i2, o1, q1);
    return b.build();
}

// Lexicographically least word of minimal length reaching each state, by
// dynamic programming over lengths.
std::vector<std::vector<std::size_t>> access_oracle(const Table& t) {
    std::vector<std::optional<std::vector<std::size_t>>> best(t.nq);
    std::vector<std::optional<std::vector<std::size_t>>> layer(t.nq);
    layer[0] = std::vector<std::size_t>{};
    best[0] = layer[0];
    for (std::size_t len = 1; len < t.nq; ++len) {
        std::vector<std::optional<std::vector<std::size_t>>> next(t.nq);
        for (std::size_t p = 0; p < t.nq; ++p) {
            if (!layer[p]) {
                continue;
            }
            for (std::size_t k = 0; k < t.inputs.size(); ++k) {
                auto w = *layer[p];
                w.push_back(k);
                auto& slot = next[t.next[p][k]];
                if (!slot || w < *slot) {
                    slot = w;
                }
            }
        }
        for (std::size_t q = 0; q < t.nq; ++q) {
            if (!best[q] && next[q]) {
                best[q] = next[q];
            }
        }
        layer = std::move(next);
    }
    std::vector<std::vector<std::size_t>> out;
    for (auto& b : best) {
        out.push_back(b.value());
    }
    return out;
}

}  // namespace

TEST_CASE("symbols intern by name and words order shortlex") {
    CHECK(Symbol::of("abc") == Symbol::of("abc"));
    CHECK_FALSE(Symbol::of("abc") == Symbol::of("abd"));
    CHECK(Symbol::of("x").name() == "x");
    CHECK(shortlex_less(make_word({"b"}), make_word({"a", "a"})));
    CHECK(shortlex_less(make_word({"a", "b"}), make_word({"b", "a"})));
    CHECK_FALSE(shortlex_less(make_word({"a"}), make_word({"a"})));
    CHECK(to_string(make_word({"a", "b"})) == "a b");
}

TEST_CASE("step and run on the two-state machine") {
    const auto m = two_state();
    CHECK(m.num_states() == 2);
    CHECK(m.num_inputs() == 2);
    const auto [q, o] = step(m, 0, Symbol::of("i1"));
    CHECK(q == 1);
    CHECK(o.name() == "o1");
    CHECK(run(m, make_word({"i1", "i1", "i1"})) == make_word({"o1", "o2", "o1"}));
    CHECK(run(m, make_word({"i2", "i1"})) == make_word({"o1", "o1"}));
    CHECK(run(m, {}).empty());
    CHECK(run_trace(m, make_word({"i2", "i1"})).str() == "i2/o1 i1/o1");
    CHECK(reach(m, make_word({"i1", "i2"})) == std::optional<StateId>(1));
    CHECK_THROWS_AS(run(m, make_word({"i3"})), InvalidArgument);
}

TEST_CASE("builder rejects nondeterminism and incomplete machines") {
    MealyBuilder b;
    const auto q0 = b.add_state("q0");
    b.set_initial(q0);
    b.add_transition(q0, Symbol::of("a"), Symbol::of("x"), q0);
    CHECK_THROWS_AS(b.add_transition(q0, Symbol::of("a"), Symbol::of("y"), q0), NonDeterminismError);
    b.declare_input(Symbol::of("b"));
    CHECK_THROWS_AS(b.build(), InvalidArgument);
    const auto p = b.build_partial();
    CHECK_FALSE(p.is_complete());
    CHECK(p.num_defined_transitions() == 1);
    const auto c = p.sink_completed();
    CHECK(c.is_complete());
    CHECK(c.num_states() == 2);
    CHECK(run(c, make_word({"b", "a"})) == Word{Symbol::of(kSinkOutput), Symbol::of(kSinkOutput)});
    CHECK_THROWS_AS(run(p, make_word({"b"})), InvalidArgument);
    CHECK_FALSE(reach(p, make_word({"b"})).has_value());
    CHECK_THROWS_AS(MealyBuilder{}.build(), InvalidArgument);
}

TEST_CASE("run agrees with the table and preserves length on random machines") {
    std::mt19937_64 g(101);
    for (int c = 0; c < 300; ++c) {
        const auto t = random_table(g, 1 + g() % 8, 1 + g() % 6, 1 + g() % 3);
        const auto m = to_mealy(t);
        for (int w = 0; w < 5; ++w) {
            const auto idx = random_idx_word(g, t.inputs.size(), g() % 15);
            const Word out = run(m, word_of(t, idx));
            REQUIRE(out.size() == idx.size());
            const auto expect = outputs_of(t, 0, idx);
            for (std::size_t k = 0; k < idx.size(); ++k) {
                CHECK(out[k].name() == expect[k]);
            }
            CHECK(*reach(m, word_of(t, idx)) == state_after(t, idx));
        }
    }
}

TEST_CASE("access sequences are the shortlex-least shortest words") {
    std::mt19937_64 g(7);
    for (int c = 0; c < 300; ++c) {
        const auto t = random_table(g, 1 + g() % 8, 1 + g() % 6, 2);
        const auto m = to_mealy(t);
        const auto acc = access_sequences(m);
        const auto oracle = access_oracle(t);
        REQUIRE(acc.size() == t.nq);
        for (StateId q = 0; q < t.nq; ++q) {
            CHECK(acc[q] == word_of(t, oracle[q]));
        }
        const auto order = acc.ordered_states();
        for (std::size_t k = 1; k < order.size(); ++k) {
            CHECK(shortlex_less(acc[order[k - 1]], acc[order[k]]));
        }
    }
}

TEST_CASE("unreachable states are reported") {
    MealyBuilder b;
    const auto q0 = b.add_state("q0");
    const auto q1 = b.add_state("q1");
    b.set_initial(q0);
    b.add_transition(q0, Symbol::of("a"), Symbol::of("x"), q0);
    b.add_transition(q1, Symbol::of("a"), Symbol::of("x"), q0);
    CHECK_THROWS_AS(access_sequences(b.build()), UnreachableStateError);
}

TEST_CASE("characterization set separates every pair of a minimal machine") {
    std::mt19937_64 g(11);
    for (int c = 0; c < 200; ++c) {
        const auto t = random_minimal_table(g, 1 + g() % 8, 1 + g() % 6, 2 + g() % 2);
        const auto m = to_mealy(t);
        const auto w = characterization_set(m);
        for (std::size_t p = 0; p < t.nq; ++p) {
            for (std::size_t r = p + 1; r < t.nq; ++r) {
                bool split = false;
                for (const auto& suffix : w.suffixes) {
                    std::vector<std::size_t> idx;
                    for (auto s : suffix) {
                        idx.push_back(static_cast<std::size_t>(s.name()[0] - 'a'));
                    }
                    split = split || outputs_of(t, p, idx) != outputs_of(t, r, idx);
                }
                CHECK(split);
            }
        }
        CHECK(distinguishes_all_pairs(m, w.suffixes));
        if (t.nq == 1) {
            CHECK(w.empty());
        }
    }
}

TEST_CASE("characterization set rejects a redundant machine") {
    MealyBuilder b;
    const auto q0 = b.add_state("q0");
    const auto q1 = b.add_state("q1");
    b.set_initial(q0);
    b.add_transition(q0, Symbol::of("a"), Symbol::of("x"), q1);
    b.add_transition(q1, Symbol::of("a"), Symbol::of("x"), q0);
    CHECK_THROWS_AS(characterization_set(b.build()), NotMinimalError);
}

TEST_CASE("equivalence matches the product oracle and its witness is shortest") {
    std::mt19937_64 g(23);
    for (int c = 0; c < 300; ++c) {
        const std::size_t ni = 1 + g() % 4;
        const auto ta = random_table(g, 1 + g() % 6, ni, 2);
        auto tb = (g() % 2) ? ta : random_table(g, 1 + g() % 6, ni, 2);
        if (g() % 3 == 0) {
            tb.out[g() % tb.nq][g() % ni] = "o9";
        }
        const auto res = equivalent(to_mealy(ta), to_mealy(tb));
        CHECK(res.equal == tables_equivalent(ta, tb));
        if (!res.equal) {
            // disjoint union: states of b shifted by |Qa|
            Table u = ta;
            u.nq = ta.nq + tb.nq;
            for (std::size_t q = 0; q < tb.nq; ++q) {
                std::vector<std::size_t> nx;
                for (auto r : tb.next[q]) {
                    nx.push_back(r + ta.nq);
                }
                u.next.push_back(nx);
                u.out.push_back(tb.out[q]);
            }
            const auto shortest = separate(u, 0, ta.nq);
            REQUIRE(shortest.has_value());
            CHECK(res.witness.size() == shortest->size());
            std::vector<std::size_t> idx;
            for (auto s : res.witness) {
                idx.push_back(static_cast<std::size_t>(s.name()[0] - 'a'));
            }
            CHECK(outputs_of(ta, 0, idx) != outputs_of(tb, 0, idx));
        }
    }
}

TEST_CASE("same_minimal_model needs equivalence and equal size") {
    const auto m = two_state();
    CHECK(same_minimal_model(m, m));
    CHECK(same_minimal_model(m.as_partial(), m));
    // unrolled copy: equivalent, one state more
    MealyBuilder b;
    const auto a = b.add_state("a");
    const auto c = b.add_state("c");
    const auto d = b.add_state("d");
    b.set_initial(a);
    const auto i1 = Symbol::of("i1");
    const auto i2 = Symbol::of("i2");
    b.add_transition(a, i1, Symbol::of("o1"), c).add_transition(a, i2, Symbol::of("o1"), d);
    b.add_transition(d, i1, Symbol::of("o1"), c).add_transition(d, i2, Symbol::of("o1"), a);
    b.add_transition(c, i1, Symbol::of("o2"), a).add_transition(c, i2, Symbol::of("o1"), c);
    const auto big = b.build();
    CHECK(equivalent(big, m).equal);
    CHECK_FALSE(same_minimal_model(big, m));
}

TEST_CASE("DOT round trip keeps the machine") {
    std::mt19937_64 g(5);
    for (int c = 0; c < 200; ++c) {
        const auto t = random_table(g, 1 + g() % 8, 1 + g() % 6, 3);
        const auto m = to_mealy(t);
        const auto back = parse_dot(serialize_dot(m));
        CHECK(back.num_states() == m.num_states());
        CHECK(back.state_names() == m.state_names());
        CHECK(tables_equivalent(to_table(back), t));
        CHECK(to_table(back).next == t.next);
        CHECK(to_table(back).out == t.out);
    }
}

TEST_CASE("DOT parser reads the corpus dialect") {
    const char* text = R"(digraph g {
        __start0 [label="" shape="none"];
        s0 [label="s0"];
        s1 [label="s1"];
        // comment
        s0 -> s1 [label="i1/o1"];
        s0 -> s0 [label="i2/o1"];
        s1 -> s0 [label="i1/o2"];
        s1 -> s1 [label="i2/o1"];
        __start0 -> s0;
    })";
    const auto m = parse_dot(text);
    CHECK(equivalent(m, two_state()).equal);
    CHECK(m.state_name(m.initial()) == "s0");
}

TEST_CASE("DOT parser errors") {
    CHECK_THROWS_AS(parse_dot("graph g { }"), ParseError);
    CHECK_THROWS_AS(parse_dot("digraph g { s0 -> s0 [label=\"a/x\"]; }"), ParseError);
    CHECK_THROWS_AS(parse_dot("digraph g { s0 -> s0 [label=\"ax\"]; __start0 -> s0; }"), ParseError);
    CHECK_THROWS_AS(parse_dot("digraph g { s0 -> s0 [label=\"a/x\"]; s0 -> s0 [label=\"a/y\"]; __start0 -> s0; }"),
                    NonDeterminismError);
    CHECK_THROWS_AS(
        parse_dot("digraph g { s0 -> s1 [label=\"a/x\"]; s0 -> s0 [label=\"b/x\"]; s1 -> s0 [label=\"a/x\"]; "
                  "__start0 -> s0; }"),
        InvalidArgument);
    CHECK_NOTHROW(parse_dot_partial(
        "digraph g { s0 -> s1 [label=\"a/x\"]; s0 -> s0 [label=\"b/x\"]; s1 -> s0 [label=\"a/x\"]; __start0 -> s0; }"));
    try {
        parse_dot("digraph g {\n s0 -> s0 [label=\"a/x\"];\n s0 -- s0;\n __start0 -> s0; }");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}
