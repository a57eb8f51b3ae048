#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "protolearn/dot.hpp"
#include "protolearn/errors.hpp"
#include "protolearn/experiment.hpp"
#include "protolearn/synth.hpp"
#include "support.hpp"

using namespace protolearn;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (!line.empty() && line.back() == ',') {
            cells.emplace_back();
        }
        rows.push_back(cells);
    }
    return rows;
}

std::shared_ptr<const MealyMachine> corpus_model(const std::string& family, const std::string& name) {
    const auto c = load_manifest(std::string(PROTOLEARN_CORPUS_DIR) + "/" + family + "/manifest.json");
    for (const auto& e : c.entries) {
        if (e.name == name) {
            return std::make_shared<const MealyMachine>(load_corpus_model(c, e));
        }
    }
    throw InvalidArgument("no corpus entry " + name);
}

ExperimentSpec small_spec(const std::string& name, std::size_t reps = 5) {
    ExperimentSpec s;
    s.model_name = name;
    s.reps = reps;
    s.seed = 1;
    s.suite_size = 500;
    return s;
}

}  // namespace

TEST_CASE("aggregate uses the n-1 denominator") {
    const auto a = aggregate({2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0});
    CHECK(a.mean == doctest::Approx(5.0));
    CHECK(a.stddev == doctest::Approx(std::sqrt(32.0 / 7.0)));
    CHECK(aggregate({3.0}).stddev == 0.0);
    CHECK(aggregate({}).mean == 0.0);
}

TEST_CASE("run record CSV: header, rows, and aggregates recomputable from the rows") {
    RunRecord r("demo", "m", {"x", "y"});
    r.add_row(1, {1.0, 0.5});
    r.add_row(2, {2.0, 1.5});
    r.add_row(3, {4.0, 2.25});
    CHECK_THROWS_AS(r.add_row(4, {1.0}), InvalidArgument);
    std::ostringstream os;
    r.write_csv(os);
    const auto rows = parse_csv(os.str());
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == std::vector<std::string>{"experiment", "model", "rep", "seed", "x", "y"});
    CHECK(rows[1] == std::vector<std::string>{"demo", "m", "0", "1", "1", "0.5000"});
    CHECK(rows[4][2] == "mean");
    CHECK(rows[5][2] == "std");
    for (std::size_t col = 4; col < 6; ++col) {
        std::vector<double> v;
        for (std::size_t k = 1; k <= 3; ++k) {
            v.push_back(std::stod(rows[k][col]));
        }
        double mean = (v[0] + v[1] + v[2]) / 3.0;
        double ss = 0.0;
        for (double x : v) {
            ss += (x - mean) * (x - mean);
        }
        CHECK(std::stod(rows[4][col]) == doctest::Approx(mean).epsilon(1e-4));
        CHECK(std::stod(rows[5][col]) == doctest::Approx(std::sqrt(ss / 2.0)).epsilon(1e-4));
    }
    CHECK_THROWS_AS(r.column("z"), InvalidArgument);
}

TEST_CASE("synth_model: exact shape, minimal, strongly connected, deterministic") {
    std::mt19937_64 g(97);
    for (int c = 0; c < 60; ++c) {
        const std::size_t nq = 1 + g() % 8;
        const std::size_t ni = 1 + g() % 6;
        const auto seed = g();
        const auto m = synth_model(nq, ni, seed);
        CHECK(m.num_states() == nq);
        CHECK(m.num_inputs() == ni);
        const auto t = to_table(m);
        CHECK(is_minimal(t));
        CHECK(reachable_count(t) == nq);
        CHECK(strongly_connected(m));
        CHECK(serialize_dot(synth_model(nq, ni, seed)) == serialize_dot(m));
    }
    const auto one = synth_model(1, 1, 3);
    CHECK(one.num_states() == 1);
    CHECK(one.next(0, 0) == 0);
    const auto four = synth_model(4, 7, 11, SynthOptions::ble());
    CHECK(parse_dot(serialize_dot(four)).num_states() == 4);
    CHECK_THROWS_AS(synth_model(0, 3, 1), InvalidArgument);
    SynthOptions impossible;
    impossible.min_depth = 50;
    impossible.budget = 20;
    CHECK_THROWS_AS(synth_model(3, 2, 1, impossible), LearningFailure);
}

TEST_CASE("separation depth equals the longest shortest separating word") {
    std::mt19937_64 g(101);
    for (int c = 0; c < 100; ++c) {
        const auto t = random_minimal_table(g, 1 + g() % 8, 1 + g() % 4, 2);
        std::size_t longest = 0;
        for (std::size_t p = 0; p < t.nq; ++p) {
            for (std::size_t r = p + 1; r < t.nq; ++r) {
                longest = std::max(longest, separate(t, p, r)->size());
            }
        }
        CHECK(separation_depth(to_mealy(t)) == std::optional<std::size_t>(longest));
    }
}

TEST_CASE("manifest round trip and shape check") {
    const fs::path dir = fs::temp_directory_path() / "protolearn_manifest_test";
    fs::create_directories(dir);
    save_dot(synth_model(3, 2, 1), (dir / "a.dot").string());
    Corpus c;
    c.dir = dir.string();
    c.entries.push_back(CorpusEntry{"a", "a.dot", "ble", 3, 2, "synthetic", 1});
    c.entries.push_back(CorpusEntry{"wrong", "a.dot", "ble", 4, 2, "synthetic", 1});
    save_manifest(c, (dir / "manifest.json").string());
    const auto back = load_manifest((dir / "manifest.json").string());
    REQUIRE(back.entries.size() == 2);
    CHECK(back.entries[0].name == "a");
    CHECK(back.entries[0].seed == 1);
    CHECK(back.entries[1].states == 4);
    CHECK(load_corpus_model(back, back.entries[0]).num_states() == 3);
    CHECK_THROWS_AS(load_corpus_model(back, back.entries[1]), InvalidArgument);
    CHECK_THROWS_AS(load_manifest((dir / "missing.json").string()), InvalidArgument);
    fs::remove_all(dir);
}

TEST_CASE("corpus manifests match the model files") {
    std::size_t n = 0;
    for (const char* family : {"ble", "mqtt"}) {
        const auto c = load_manifest(std::string(PROTOLEARN_CORPUS_DIR) + "/" + family + "/manifest.json");
        for (const auto& e : c.entries) {
            const auto m = load_corpus_model(c, e);
            CHECK(e.provenance == "synthetic");
            CHECK(is_minimal(to_table(m)));
            CHECK(strongly_connected(m));
            ++n;
        }
    }
    CHECK(n == 12);
}

TEST_CASE("learn-active on a corpus model reproduces it and scores 100% on both suites") {
    const auto gt = corpus_model("ble", "CC2652R1");
    MealyMachine learned;
    const auto rec = cmd_learn_active(gt, small_spec("CC2652R1"), &learned);
    CHECK(rec.reps() == 5);
    CHECK(same_minimal_model(learned, *gt));
    for (std::size_t r = 0; r < 5; ++r) {
        CHECK(rec.value(r, "correct") == 1.0);
        CHECK(rec.value(r, "conf_random") == 100.0);
        CHECK(rec.value(r, "conf_coverage") == 100.0);
        CHECK(rec.value(r, "conformance_tests") == 25.0 * 4.0 * rec.value(r, "rounds"));
        CHECK(rec.value(r, "sum_queries") == rec.value(r, "output_queries") + rec.value(r, "conformance_tests"));
        CHECK(rec.value(r, "optimized_queries") < rec.value(r, "n_data"));
    }
}

TEST_CASE("learn-passive sample 2 has fixed n_data = 2 |S| in every repetition") {
    const auto gt = corpus_model("ble", "CC2652R1");
    const auto spec = small_spec("CC2652R1");
    const auto base = run_active(gt, spec.seed, spec.oracle).stats.distinct_count();
    const auto rec = cmd_learn_passive(gt, spec, 2);
    for (std::size_t r = 0; r < rec.reps(); ++r) {
        CHECK(rec.value(r, "n_data") == 2.0 * base);
    }
    CHECK(rec.stat("n_data").stddev == 0.0);
    CHECK_THROWS_AS(cmd_learn_passive(gt, spec, 4), InvalidArgument);
}

TEST_CASE("learn-passive sample 1 on a 2-input toy machine is always correct") {
    Table t;
    t.nq = 3;
    t.inputs = {"a", "b"};
    t.next = {{1, 0}, {2, 0}, {2, 0}};
    t.out = {{"x", "y"}, {"x", "z"}, {"w", "y"}};
    REQUIRE(is_minimal(t));
    const auto gt = std::make_shared<const MealyMachine>(to_mealy(t));
    const auto rec = cmd_learn_passive(gt, small_spec("toy"), 1);
    CHECK(rec.stat("correct").mean == 1.0);
}

TEST_CASE("one repetition reports zero spread") {
    const auto gt = corpus_model("ble", "CYBLE-416045-02");
    const auto rec = cmd_learn_passive(gt, small_spec("x", 1), 1);
    std::ostringstream os;
    rec.write_csv(os);
    const auto rows = parse_csv(os.str());
    REQUIRE(rows.size() == 4);
    for (std::size_t col = 4; col < rows[3].size(); ++col) {
        CHECK(std::stod(rows[3][col]) == 0.0);
    }
}

TEST_CASE("cache priming: self gives no extra SUL queries, empty gives no hits") {
    const auto gt = corpus_model("ble", "CYW43455");
    const auto self = cmd_cache_experiment(gt, small_spec("x", 2), PrimeKind::Self);
    const auto empty = cmd_cache_experiment(gt, small_spec("x", 2), PrimeKind::Empty);
    const auto random = cmd_cache_experiment(gt, small_spec("x", 2), PrimeKind::Random);
    for (std::size_t r = 0; r < 2; ++r) {
        CHECK(self.value(r, "primed_sul_queries") == 0.0);
        CHECK(self.value(r, "additional_fraction") == 0.0);
        CHECK(self.value(r, "hit_fraction") == 1.0);
        CHECK(empty.value(r, "hit_fraction") == 0.0);
        CHECK(empty.value(r, "additional_fraction") == 1.0);
        CHECK(random.value(r, "additional_fraction") > 0.0);
        CHECK(random.value(r, "additional_fraction") < 1.0);
        CHECK(random.value(r, "correct") == 1.0);
        // every query is answered once, by the cache or by the SUL
        CHECK(random.value(r, "primed_queries") ==
              random.value(r, "cache_hits") + random.value(r, "primed_sul_queries"));
    }
    CHECK(parse_prime("self") == PrimeKind::Self);
    CHECK_THROWS_AS(parse_prime("full"), InvalidArgument);
}

TEST_CASE("experiments are deterministic under a fixed seed, in parallel or not") {
    const auto gt = corpus_model("ble", "CYBLE-416045-02");
    auto spec = small_spec("x", 3);
    const auto a = cmd_learn_passive(gt, spec, 1);
    spec.parallel = false;
    const auto b = cmd_learn_passive(gt, spec, 1);
    CHECK_NOTHROW(verify_determinism(a, b));
    spec.seed = 2;
    const auto other = cmd_learn_active(gt, spec);
    const auto again = cmd_learn_active(gt, spec);
    CHECK_NOTHROW(verify_determinism(other, again));
    RunRecord x("e", "m", {"v"});
    RunRecord y("e", "m", {"v"});
    x.add_row(1, {1.0});
    y.add_row(1, {2.0});
    CHECK_THROWS_AS(verify_determinism(x, y), DeterminismViolation);
}

TEST_CASE("optimize on a corpus model: smaller, shorter, sufficient") {
    const auto gt = corpus_model("mqtt", "VerneMQ");
    SampleSet opt;
    const auto rec = cmd_optimize(gt, small_spec("VerneMQ", 2), &opt);
    for (std::size_t r = 0; r < 2; ++r) {
        CHECK(rec.value(r, "correct") == 1.0);
        CHECK(rec.value(r, "size_ratio") <= 0.30);
        CHECK(rec.value(r, "optimized_mean_len") < rec.value(r, "original_mean_len"));
    }
    CHECK(opt.size() == rec.value(0, "optimized_size"));
}

TEST_CASE("heatmap CSV has one row per cell") {
    const auto gt = corpus_model("ble", "CYBLE-416045-02");
    const auto spec = small_spec("x", 2);
    const auto grid = cmd_heatmap(gt, spec, {1, 2, 3}, {2.0, 5.0});
    std::ostringstream os;
    write_heatmap_csv(os, grid, 100, 2);
    const auto rows = parse_csv(os.str());
    CHECK(rows.size() == 1 + 3 * 2);
    CHECK(rows[0][0] == "mean_length");
    CHECK(rows[1][2] == "100");
    CHECK(rows[1][3] == "3");
}

TEST_CASE("conformance summary of a learned model") {
    const auto gt = corpus_model("ble", "CC2650");
    const auto s = cmd_conformance(*gt, gt->as_partial(), 4, 300);
    CHECK(s.correct);
    CHECK(s.random.percentage == 100.0);
    CHECK(s.coverage.total >= 300);
}
