#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "protolearn/conformance.hpp"
#include "protolearn/lstar.hpp"
#include "protolearn/mealy.hpp"
#include "protolearn/sampling.hpp"

namespace protolearn {

// ---------------------------------------------------------------- corpus

struct CorpusEntry {
    std::string name;
    std::string file;    // relative to the manifest's directory
    std::string family;  // ble | mqtt
    std::size_t states{0};
    std::size_t inputs{0};
    std::string provenance{"synthetic"};  // "synthetic" or "supplemental"
    std::uint64_t seed{0};                // generator seed for synthetic entries
};

struct Corpus {
    std::string dir;
    std::vector<CorpusEntry> entries;

    std::string path_of(const CorpusEntry& e) const;
};

// manifest.json: {"family": "...", "models": [{"name", "file", "states",
// "inputs", "provenance", "seed"}, ...]}
Corpus load_manifest(const std::string& manifest_path);
void save_manifest(const Corpus& c, const std::string& manifest_path);

// Parses the model and checks |Q| and |I| against the entry.
MealyMachine load_corpus_model(const Corpus& c, const CorpusEntry& e);

// ---------------------------------------------------------------- statistics

struct Aggregate {
    double mean{0.0};
    double stddev{0.0};  // n-1 denominator; 0 for a single value
};

Aggregate aggregate(const std::vector<double>& values);

// One table: named columns, one row per repetition, then mean and std rows.
class RunRecord {
public:
    RunRecord(std::string experiment, std::string model, std::vector<std::string> columns);

    void add_row(std::uint64_t seed, std::vector<double> values);

    const std::string& experiment() const { return experiment_; }
    const std::string& model() const { return model_; }
    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t reps() const { return rows_.size(); }
    double value(std::size_t rep, const std::string& column) const;
    std::vector<double> column(const std::string& name) const;
    Aggregate stat(const std::string& column) const { return aggregate(this->column(column)); }

    // experiment,model,rep,seed,<columns...>; rep is 0.., "mean" or "std".
    void write_csv(std::ostream& os, bool header = true) const;

private:
    std::string experiment_;
    std::string model_;
    std::vector<std::string> columns_;
    std::vector<std::uint64_t> seeds_;
    std::vector<std::vector<double>> rows_;
};

// ---------------------------------------------------------------- experiments

struct ExperimentSpec {
    std::string model_path;
    std::string model_name;
    std::size_t reps{5};
    std::uint64_t seed{1};
    OracleConfig oracle{};
    std::size_t suite_size{10000};
    std::size_t coverage_word_len{10};
    // repetitions run in parallel when true
    bool parallel{true};

    void validate() const;
};

// Active baseline of repetition r: oracle seed = base + r.
LStarResult run_active(std::shared_ptr<const MealyMachine> gt, std::uint64_t seed, const OracleConfig& oracle = {});

// Evaluation suites for one model; the seed only fixes the random words.
struct EvalSuites {
    TestSuite random;
    TestSuite coverage;
};
EvalSuites make_suites(const MealyMachine& gt, std::uint64_t seed, std::size_t size = 10000,
                       std::size_t coverage_word_len = 10);

// output_queries, output_query_steps, conformance_tests, conformance_test_steps,
// rounds, sum_queries, sum_steps, n_data, mean_len, optimized_queries,
// optimized_mean_len, learned_states, correct, conf_random, conf_coverage, wall_ms
RunRecord cmd_learn_active(std::shared_ptr<const MealyMachine> gt, const ExperimentSpec& spec,
                           MealyMachine* learned_out = nullptr);

// n_data, mean_len, n_min, n_max, conf_random, conf_coverage, correct,
// learned_states, wall_ms
RunRecord cmd_learn_passive(std::shared_ptr<const MealyMachine> gt, const ExperimentSpec& spec, int sample);

enum class PrimeKind { Random, Self, Empty };
PrimeKind parse_prime(const std::string& s);
const char* to_string(PrimeKind k);

// baseline_sul_queries, prime_traces, prime_cache_nodes, primed_queries,
// cache_hits, primed_sul_queries, hit_fraction, additional_fraction, correct,
// wall_ms. Both runs use a cache and the same oracle seed; the baseline starts
// empty, so repeats inside one run never count as priming hits.
// additional_fraction = primed_sul_queries / baseline_sul_queries and
// hit_fraction = 1 - additional_fraction.
RunRecord cmd_cache_experiment(std::shared_ptr<const MealyMachine> gt, const ExperimentSpec& spec,
                               PrimeKind prime = PrimeKind::Random);

// original_size, original_mean_len, optimized_size, optimized_mean_len,
// size_ratio, w_size, correct
RunRecord cmd_optimize(std::shared_ptr<const MealyMachine> gt, const ExperimentSpec& spec,
                       SampleSet* optimized_out = nullptr);

// Base size from the repetition-0 active baseline.
HeatmapGrid cmd_heatmap(std::shared_ptr<const MealyMachine> gt, const ExperimentSpec& spec,
                        const std::vector<std::size_t>& factors, const std::vector<double>& mean_lengths,
                        bool parallel = true);

// mean_length,factor,n_data,n_max,conformance,std,correct,reps (one row per cell)
void write_heatmap_csv(std::ostream& os, const HeatmapGrid& g, std::size_t base_size, std::size_t reps);

// Conformance of a learned (possibly partial) model against a reference.
// suite,total,passed,percentage
struct ConformanceSummary {
    ConformanceReport random;
    ConformanceReport coverage;
    bool correct{false};
};
ConformanceSummary cmd_conformance(const MealyMachine& gt, const MealyTable& learned, std::uint64_t seed,
                                   std::size_t suite_size = 10000);

// Reruns repetition 0 and throws DeterminismViolation when any value differs.
void verify_determinism(const RunRecord& first, const RunRecord& again);

}  // namespace protolearn
