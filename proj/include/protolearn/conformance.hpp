#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "protolearn/mealy.hpp"
#include "protolearn/rng.hpp"
#include "protolearn/sul.hpp"

namespace protolearn {

struct OracleConfig {
    std::size_t n_walks{25};  // walks per hypothesis state
    std::size_t n_step{30};   // random suffix length
    std::uint64_t seed{0};

    void validate() const;
};

// Equivalence oracle by state coverage: every hypothesis state (in shortlex
// order of its access sequence) gets n_walks tests access(q) . random word.
// Returns the first diverging test truncated after the first differing output,
// or nullopt when all tests pass. The rng advances across calls, so successive
// learning rounds draw fresh walks.
std::optional<Trace> state_coverage_oracle(const MealyMachine& hyp, SulSession& sul, const OracleConfig& cfg,
                                           Rng& rng);

class StateCoverageOracle {
public:
    explicit StateCoverageOracle(OracleConfig cfg) : cfg_(cfg), rng_(cfg.seed) { cfg_.validate(); }

    std::optional<Trace> operator()(const MealyMachine& hyp, SulSession& sul) {
        return state_coverage_oracle(hyp, sul, cfg_, rng_);
    }

private:
    OracleConfig cfg_;
    Rng rng_;
};

enum class SuiteKind { Random, Coverage };

const char* to_string(SuiteKind k);

struct TestCase {
    Word inputs;
    Word expected;
};

struct TestSuite {
    SuiteKind kind{SuiteKind::Random};
    std::vector<TestCase> cases;

    std::size_t size() const { return cases.size(); }
    double mean_length() const;
};

// n traces, lengths uniform in [n_min, n_max], inputs uniform over the
// alphabet, expected outputs from gt. Each trace draws from its own stream,
// so the suite is independent of thread count.
TestSuite gen_random_suite(const MealyMachine& gt, std::size_t n = 10000, std::size_t n_min = 3,
                           std::size_t n_max = 32, std::uint64_t seed = 0);

// ceil(total/|Q|) traces per state, each access(q) . random word of word_len.
TestSuite gen_coverage_suite(const MealyMachine& gt, std::size_t total = 10000, std::size_t word_len = 10,
                             std::uint64_t seed = 0);

struct ConformanceReport {
    std::size_t total{0};
    std::size_t passed{0};
    double percentage{0.0};
    std::vector<Trace> first_failures;  // expected behaviour of failing tests

    bool degenerate() const { return total == 0; }
};

// Pass iff the learned machine, completed with an absorbing sink that emits a
// reserved output on every undefined (state, input), reproduces every
// expected output. Inputs unknown to the learned machine lead to the sink too.
// OpenMP-parallel over test cases.
ConformanceReport conformance_pct(const MealyTable& learned, const TestSuite& suite, std::size_t keep_failures = 5);

// Single-threaded reference of conformance_pct.
ConformanceReport conformance_pct_serial(const MealyTable& learned, const TestSuite& suite,
                                         std::size_t keep_failures = 5);

bool passes(const MealyTable& learned, const TestCase& test);

}  // namespace protolearn
