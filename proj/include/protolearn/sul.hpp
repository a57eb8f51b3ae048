#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "protolearn/mealy.hpp"
#include "protolearn/pta.hpp"
#include "protolearn/sample_set.hpp"

namespace protolearn {

struct QueryStats {
    std::size_t queries{0};     // output queries executed on the SUL
    std::size_t steps{0};       // input symbols executed on the SUL
    std::size_t cache_hits{0};  // queries answered from the cache

    friend bool operator==(const QueryStats&, const QueryStats&) = default;
};

// Black-box view of a Mealy machine: callers see output sequences and
// counters, never the model. Every query starts from the reset state.
// Single owner; independent sessions may share one model across threads.
class SulSession {
public:
    explicit SulSession(std::shared_ptr<const MealyMachine> model, bool with_cache = false);

    const std::vector<Symbol>& alphabet() const;

    // Always executes on the SUL: +1 query, +|inputs| steps.
    Word output_query(const Word& inputs);

    // Answers from the cache when the whole input word is a cached path;
    // otherwise runs output_query and records the trace. Throws
    // NonDeterminismError when the SUL contradicts the cache.
    Word cached_query(const Word& inputs);

    // cached_query when the cache is enabled, output_query otherwise.
    Word query(const Word& inputs) { return cache_ ? cached_query(inputs) : output_query(inputs); }

    void enable_cache();
    bool cache_enabled() const { return cache_.has_value(); }
    const Pta* cache() const { return cache_ ? &*cache_ : nullptr; }

    // Inserts the traces into the cache (enabling it if needed) without touching
    // the SUL. Returns the cache node count.
    std::size_t prime_cache(std::span<const Trace> traces);
    std::size_t prime_cache(const SampleSet& traces) { return prime_cache(std::span(traces.traces())); }

    const QueryStats& stats() const { return stats_; }

    // Every trace executed on the SUL, in execution order.
    const std::vector<Trace>& executed() const { return executed_; }

private:
    std::shared_ptr<const MealyMachine> model_;
    std::optional<Pta> cache_;
    QueryStats stats_;
    std::vector<Trace> executed_;
};

}  // namespace protolearn
