#include <doctest.h>

#include <random>

#include "protolearn/conformance.hpp"
#include "protolearn/errors.hpp"
#include "protolearn/rpni.hpp"
#include "support.hpp"

using namespace protolearn;
using namespace testsupport;

namespace {

std::vector<std::size_t> indices(const Word& w) {
    std::vector<std::size_t> out;
    for (auto s : w) {
        out.push_back(static_cast<std::size_t>(s.name()[0] - 'a'));
    }
    return out;
}

std::vector<std::string> names(const Word& w) {
    std::vector<std::string> out;
    for (auto s : w) {
        out.push_back(s.name());
    }
    return out;
}

}  // namespace

TEST_CASE("random suite: size, length bounds, expected outputs, seed determinism") {
    std::mt19937_64 g(51);
    for (int c = 0; c < 100; ++c) {
        const auto t = random_table(g, 1 + g() % 8, 1 + g() % 6, 3);
        const auto m = to_mealy(t);
        const std::size_t lo = 1 + g() % 5;
        const std::size_t hi = lo + g() % 10;
        const std::uint64_t seed = g();
        const auto s = gen_random_suite(m, 200, lo, hi, seed);
        REQUIRE(s.size() == 200);
        CHECK(s.kind == SuiteKind::Random);
        for (const auto& tc : s.cases) {
            CHECK(tc.inputs.size() >= lo);
            CHECK(tc.inputs.size() <= hi);
            CHECK(names(tc.expected) == outputs_of(t, 0, indices(tc.inputs)));
        }
        const auto again = gen_random_suite(m, 200, lo, hi, seed);
        bool same = true;
        for (std::size_t k = 0; k < s.size(); ++k) {
            same = same && s.cases[k].inputs == again.cases[k].inputs;
        }
        CHECK(same);
    }
    const auto m = to_mealy(random_table(g, 3, 2, 2));
    CHECK_THROWS_AS(gen_random_suite(m, 10, 5, 4, 0), InvalidArgument);
}

TEST_CASE("coverage suite: ceil(total/|Q|) tests per state, each access(q) then a random word") {
    std::mt19937_64 g(53);
    for (int c = 0; c < 100; ++c) {
        const auto t = random_table(g, 1 + g() % 8, 1 + g() % 6, 3);
        const auto m = to_mealy(t);
        const std::size_t total = 1 + g() % 300;
        const std::size_t len = g() % 12;
        const auto s = gen_coverage_suite(m, total, len, g());
        const std::size_t per = (total + t.nq - 1) / t.nq;
        REQUIRE(s.size() == per * t.nq);
        const auto acc = access_sequences(m);
        std::vector<std::size_t> hits(t.nq, 0);
        for (const auto& tc : s.cases) {
            const auto idx = indices(tc.inputs);
            // the prefix is the access sequence of some state
            bool found = false;
            for (StateId q = 0; q < t.nq && !found; ++q) {
                if (acc[q].size() + len == tc.inputs.size() &&
                    std::equal(acc[q].begin(), acc[q].end(), tc.inputs.begin())) {
                    ++hits[q];
                    found = true;
                }
            }
            CHECK(found);
            CHECK(names(tc.expected) == outputs_of(t, 0, idx));
        }
        for (auto h : hits) {
            CHECK(h == per);
        }
    }
}

TEST_CASE("conformance of the reference itself is 100%") {
    std::mt19937_64 g(57);
    for (int c = 0; c < 50; ++c) {
        const auto m = to_mealy(random_table(g, 1 + g() % 8, 1 + g() % 6, 3));
        const auto s = gen_random_suite(m, 500, 1, 20, g());
        const auto r = conformance_pct(m, s);
        CHECK(r.passed == r.total);
        CHECK(r.percentage == 100.0);
        CHECK(r.first_failures.empty());
    }
}

TEST_CASE("conformance matches a per-test oracle with sink semantics; parallel equals serial") {
    std::mt19937_64 g(59);
    for (int c = 0; c < 100; ++c) {
        const auto t = random_table(g, 1 + g() % 8, 1 + g() % 6, 2);
        const auto gt = to_mealy(t);
        // a partial hypothesis: rpni on a handful of traces
        std::vector<Trace> traces;
        for (int k = 0; k < 5; ++k) {
            traces.push_back(run_trace(gt, word_of(t, random_idx_word(g, t.inputs.size(), 1 + g() % 6))));
        }
        const auto learned = rpni(SampleSet(traces, SampleConfig{5, 1, 6, 0, "t"}, gt.inputs()));
        const auto suite = gen_random_suite(gt, 400, 1, 10, g());
        const Table lt = completed_table(learned, t.inputs);
        std::size_t passed = 0;
        for (const auto& tc : suite.cases) {
            passed += outputs_of(lt, 0, indices(tc.inputs)) == names(tc.expected) ? 1 : 0;
        }
        const auto par = conformance_pct(learned, suite, 7);
        const auto ser = conformance_pct_serial(learned, suite, 7);
        CHECK(par.passed == passed);
        CHECK(par.total == suite.size());
        CHECK(par.percentage == doctest::Approx(100.0 * passed / suite.size()));
        CHECK(ser.passed == par.passed);
        CHECK(ser.percentage == par.percentage);
        CHECK(ser.first_failures == par.first_failures);
        CHECK(par.first_failures.size() == std::min<std::size_t>(7, suite.size() - passed));
    }
}

TEST_CASE("empty suite is degenerate") {
    std::mt19937_64 g(61);
    const auto m = to_mealy(random_table(g, 2, 2, 2));
    const TestSuite s;
    const auto r = conformance_pct(m, s);
    CHECK(r.degenerate());
    CHECK(r.percentage == 0.0);
}

TEST_CASE("inputs unknown to the learned machine fail") {
    std::mt19937_64 g(63);
    const auto gt = to_mealy(random_table(g, 2, 2, 2));
    MealyBuilder b;
    b.set_initial(b.add_state("q"));
    b.add_transition(0, Symbol::of("a"), gt.output(0, 0), 0);
    const auto learned = b.build_partial();
    TestCase tc{make_word({"b"}), run(gt, make_word({"b"}))};
    CHECK_FALSE(passes(learned, tc));
    TestCase empty{};
    CHECK(passes(learned, empty));
}

TEST_CASE("oracle config validation") {
    CHECK_THROWS_AS((OracleConfig{0, 30, 0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((OracleConfig{25, 0, 0}.validate()), InvalidArgument);
    CHECK_NOTHROW((OracleConfig{1, 1, 0}.validate()));
}
