#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "protolearn/mealy.hpp"

namespace protolearn {

struct SampleConfig {
    std::size_t n_data{0};
    std::size_t n_min{1};
    std::size_t n_max{1};
    std::uint64_t seed{0};
    // sample-1 | sample-2 | sample-3 | sample-4-cell | optimized | active | ...
    std::string label;

    // Throws InvalidArgument unless 1 <= n_min <= n_max.
    void validate() const;

    friend bool operator==(const SampleConfig&, const SampleConfig&) = default;
};

// Traces plus the configuration and input alphabet they were drawn with.
class SampleSet {
public:
    SampleSet() = default;
    SampleSet(std::vector<Trace> traces, SampleConfig config, std::vector<Symbol> alphabet);

    const std::vector<Trace>& traces() const { return traces_; }
    const SampleConfig& config() const { return config_; }
    const std::vector<Symbol>& alphabet() const { return alphabet_; }

    std::size_t size() const { return traces_.size(); }
    bool empty() const { return traces_.empty(); }
    std::size_t total_steps() const;
    // Mean trace length; 0 for an empty set.
    double mean_length() const;

    friend bool operator==(const SampleSet&, const SampleSet&) = default;

private:
    std::vector<Trace> traces_;
    SampleConfig config_;
    std::vector<Symbol> alphabet_;
};

// Trace file:
//
//   # protolearn-traces v1
//   # inputs: i1 i2
//   # config: label=sample-1 n_data=2 n_min=1 n_max=3 seed=7
//   i1/o1 i1/o2 i1/o1
//   i2/o1 i1/o1
//
// One trace per line as space-separated input/output pairs; "-" is the empty
// trace. Symbols must not contain whitespace and inputs must not contain '/'.
std::string serialize_traces(const SampleSet& s);
SampleSet parse_traces(const std::string& text);

SampleSet load_traces(const std::string& path);
void save_traces(const SampleSet& s, const std::string& path);

}  // namespace protolearn
