#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "protolearn/conformance.hpp"
#include "protolearn/lstar.hpp"
#include "protolearn/mealy.hpp"
#include "protolearn/sample_set.hpp"
#include "protolearn/sul.hpp"

namespace protolearn {

// Random input/output traces: each length uniform in [n_min, n_max], each
// input uniform over the SUL alphabet, outputs from the SUL (counters advance).
SampleSet random_sample(SulSession& sul, const SampleConfig& cfg);

// Nearest natural number to 2*mean - 1, halves rounded up; never below 1.
std::size_t max_length_for_mean(double mean);

// n_data = |active sample|, lengths in [1, round(2*mean - 1)].
SampleConfig sample1_config(std::size_t active_size, double active_mean, std::uint64_t seed = 0);
SampleConfig sample1_config(const LearningStats& stats, std::uint64_t seed = 0);
// As sample 1 with twice the traces.
SampleConfig sample2_config(std::size_t active_size, double active_mean, std::uint64_t seed = 0);
SampleConfig sample2_config(const LearningStats& stats, std::uint64_t seed = 0);
// n_data = |active sample|, lengths in [|Q|, 2|Q|].
SampleConfig sample3_config(std::size_t active_size, std::size_t num_states, std::uint64_t seed = 0);
SampleConfig sample3_config(const LearningStats& stats, std::size_t num_states, std::uint64_t seed = 0);

// Drops every trace whose input word is a prefix of (or equal to) another kept
// trace. The prefix tree of the result equals that of the input.
std::vector<Trace> prefix_reduce(const std::vector<Trace>& traces);
SampleSet prefix_reduce(const SampleSet& s);

struct OptimizationReport {
    std::size_t original_size{0};
    std::size_t optimized_size{0};
    double original_mean_len{0.0};
    double optimized_mean_len{0.0};
    CharacterizationSet w_set;
};

struct OptimizedSample {
    SampleSet sample;
    OptimizationReport report;
};

// access(q) . x . w for every state q, x in {eps} u I and w in the
// characterization set, simulated on gt and prefix-reduced. A single-state
// machine (empty W) gets one trace per input. `original` fills the report's
// baseline columns. Throws NotMinimalError for non-minimal gt.
OptimizedSample optimize_sample(const MealyMachine& gt, const SampleSet* original = nullptr);

struct HeatmapSpec {
    std::size_t base_size{0};              // |active sample|
    std::vector<std::size_t> factors;      // multipliers of base_size
    std::vector<double> mean_lengths;      // target mean trace lengths
    std::size_t reps{5};
    std::uint64_t seed{0};
    std::size_t suite_size{10000};
    std::size_t suite_word_len{10};
};

struct HeatmapGrid {
    std::vector<std::size_t> factors;
    std::vector<double> mean_lengths;
    // cells[length][factor]: mean coverage conformance over reps
    std::vector<std::vector<double>> cells;
    // per_rep[length][factor][rep]
    std::vector<std::vector<std::vector<double>>> per_rep;
    std::vector<std::vector<std::size_t>> correct;
};

// Sample-4 sweep. Every (cell, rep) draws from its own seed, so the OpenMP and
// serial versions produce identical grids.
HeatmapGrid heatmap_grid(std::shared_ptr<const MealyMachine> gt, const HeatmapSpec& spec);
HeatmapGrid heatmap_grid_serial(std::shared_ptr<const MealyMachine> gt, const HeatmapSpec& spec);

}  // namespace protolearn
