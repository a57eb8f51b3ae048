#pragma once

#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "protolearn/mealy.hpp"
#include "protolearn/sample_set.hpp"
#include "protolearn/sul.hpp"

namespace protolearn {

// <S, E, T> for Mealy machines. S is prefix-closed and starts as {eps}; E
// starts as the single-input words. Cells hold the last |e| outputs of the
// query s.e. Rows of S are pairwise distinct (no consistency check needed
// with suffix-only counterexample processing).
class ObservationTable {
public:
    using Row = std::vector<Word>;

    explicit ObservationTable(std::vector<Symbol> alphabet);

    const std::vector<Symbol>& alphabet() const { return alphabet_; }
    // Shortlex ordered.
    const std::vector<Word>& short_prefixes() const { return short_; }
    // S.I minus S, shortlex ordered.
    std::vector<Word> long_prefixes() const;
    // Insertion ordered.
    const std::vector<Word>& suffixes() const { return suffixes_; }

    bool in_short(const Word& s) const;
    bool has_suffix(const Word& e) const;

    // Throws InvalidArgument when the row is not present or not filled.
    Row row(const Word& prefix) const;
    const Word& cell(const Word& prefix, std::size_t suffix_index) const;

    // One query per missing cell, rows in shortlex order, columns in E order.
    // Returns the number of cells filled.
    std::size_t fill(SulSession& sul);
    bool filled() const;

    // First long prefix (shortlex) whose row matches no row of S.
    std::optional<Word> first_unclosed() const;
    bool is_closed() const { return !first_unclosed(); }

    void promote(const Word& prefix);
    // False when e is already present.
    bool add_suffix(Word e);

private:
    void ensure_row(const Word& prefix);

    std::vector<Symbol> alphabet_;
    std::vector<Word> short_;
    std::vector<Word> suffixes_;
    std::unordered_map<Word, std::vector<std::optional<Word>>> cells_;
};

// Hypothesis plus, per state, the S element it was built from.
struct Hypothesis {
    MealyMachine machine;
    std::vector<Word> representatives;
};

// Promotes unmatched long rows (shortlex order) until closed, filling as needed.
void make_closed(ObservationTable& table, SulSession& sul);

// Requires a closed, filled table; throws InvalidArgument otherwise.
Hypothesis build_hypothesis(const ObservationTable& table);

// Rivest-Schapire: binary search over the counterexample for the split point
// whose remaining suffix separates a long row from its S representative. Adds
// exactly one new suffix to E and fills its column. Throws
// InvalidCounterexample when the hypothesis already reproduces cex.
Word process_counterexample(ObservationTable& table, SulSession& sul, const Hypothesis& hyp, const Trace& cex);

using EquivalenceOracle = std::function<std::optional<Trace>(const MealyMachine&, SulSession&)>;

struct LearningStats {
    std::size_t rounds{0};
    std::size_t output_queries{0};
    std::size_t output_query_steps{0};
    std::size_t conformance_tests{0};
    std::size_t conformance_test_steps{0};
    std::size_t cache_hits{0};
    // Every trace executed on the SUL, including conformance tests.
    std::vector<Trace> all_traces;

    std::size_t sum_queries() const { return output_queries + conformance_tests; }
    std::size_t sum_steps() const { return output_query_steps + conformance_test_steps; }

    // The active learning sample: executed traces with repeated input words
    // removed (first occurrence kept, execution order).
    SampleSet distinct_traces() const;
    std::size_t distinct_count() const { return distinct_traces().size(); }
    // Mean trace length over distinct_traces().
    double mean_length() const { return distinct_traces().mean_length(); }
};

struct LStarOptions {
    std::size_t max_rounds{1000};
};

struct LStarResult {
    MealyMachine model;
    LearningStats stats;
    std::size_t final_short_prefixes{0};
    std::size_t final_suffixes{0};
};

// Throws LearningFailure when max_rounds is exceeded.
LStarResult learn_lstar(SulSession& sul, const std::vector<Symbol>& alphabet, const EquivalenceOracle& oracle,
                        LStarOptions options = {});

}  // namespace protolearn
