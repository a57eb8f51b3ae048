#include "protolearn/conformance.hpp"

#include <algorithm>

#include "protolearn/errors.hpp"

namespace protolearn {

void OracleConfig::validate() const {
    if (n_walks < 1) {
        throw InvalidArgument("n_walks must be at least 1");
    }
    if (n_step < 1) {
        throw InvalidArgument("n_step must be at least 1");
    }
}

namespace {

Word random_word(const std::vector<Symbol>& alphabet, std::size_t len, Rng& rng) {
    Word w;
    w.reserve(len);
    for (std::size_t k = 0; k < len; ++k) {
        w.push_back(alphabet[rng.uniform(0, alphabet.size() - 1)]);
    }
    return w;
}

}  // namespace

std::optional<Trace> state_coverage_oracle(const MealyMachine& hyp, SulSession& sul, const OracleConfig& cfg,
                                           Rng& rng) {
    cfg.validate();
    const auto access = access_sequences(hyp);
    const auto& alphabet = sul.alphabet();
    for (StateId q : access.ordered_states()) {
        for (std::size_t walk = 0; walk < cfg.n_walks; ++walk) {
            Word test = access[q];
            Word suffix = random_word(alphabet, cfg.n_step, rng);
            test.insert(test.end(), suffix.begin(), suffix.end());
            const Word observed = sul.query(test);
            const Word predicted = run(hyp, test);
            for (std::size_t k = 0; k < test.size(); ++k) {
                if (observed[k] != predicted[k]) {
                    const auto end = static_cast<std::ptrdiff_t>(k + 1);
                    return Trace(Word(test.begin(), test.begin() + end), Word(observed.begin(), observed.begin() + end));
                }
            }
        }
    }
    return std::nullopt;
}

const char* to_string(SuiteKind k) { return k == SuiteKind::Random ? "random" : "coverage"; }

double TestSuite::mean_length() const {
    if (cases.empty()) {
        return 0.0;
    }
    std::size_t n = 0;
    for (const auto& c : cases) {
        n += c.inputs.size();
    }
    return static_cast<double>(n) / static_cast<double>(cases.size());
}

TestSuite gen_random_suite(const MealyMachine& gt, std::size_t n, std::size_t n_min, std::size_t n_max,
                           std::uint64_t seed) {
    if (n_min > n_max) {
        throw InvalidArgument("random suite needs n_min <= n_max");
    }
    if (gt.num_inputs() == 0 && n_max > 0) {
        throw InvalidArgument("machine has no inputs");
    }
    TestSuite suite{SuiteKind::Random, std::vector<TestCase>(n)};
    const Rng base(seed);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < count; ++t) {
        Rng rng = base.split(static_cast<std::uint64_t>(t));
        const std::size_t len = rng.uniform(n_min, n_max);
        auto& c = suite.cases[static_cast<std::size_t>(t)];
        c.inputs = random_word(gt.inputs(), len, rng);
        c.expected = run(gt, c.inputs);
    }
    return suite;
}

TestSuite gen_coverage_suite(const MealyMachine& gt, std::size_t total, std::size_t word_len, std::uint64_t seed) {
    const auto access = access_sequences(gt);
    const std::size_t per_state = (total + gt.num_states() - 1) / gt.num_states();
    const auto order = access.ordered_states();
    TestSuite suite{SuiteKind::Coverage, std::vector<TestCase>(per_state * order.size())};
    const Rng base(seed);
    const auto count = static_cast<std::ptrdiff_t>(suite.cases.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < count; ++t) {
        Rng rng = base.split(static_cast<std::uint64_t>(t));
        auto& c = suite.cases[static_cast<std::size_t>(t)];
        c.inputs = access[order[static_cast<std::size_t>(t) / per_state]];
        Word suffix = random_word(gt.inputs(), word_len, rng);
        c.inputs.insert(c.inputs.end(), suffix.begin(), suffix.end());
        c.expected = run(gt, c.inputs);
    }
    return suite;
}

bool passes(const MealyTable& learned, const TestCase& test) {
    StateId q = learned.initial();
    for (std::size_t k = 0; k < test.inputs.size(); ++k) {
        auto i = learned.input_index(test.inputs[k]);
        // sink: the reserved output never matches a ground-truth output
        if (!i || !learned.defined(q, *i) || learned.output(q, *i) != test.expected[k]) {
            return false;
        }
        q = learned.next(q, *i);
    }
    return true;
}

namespace {

ConformanceReport summarize(const TestSuite& suite, const std::vector<char>& ok, std::size_t keep_failures) {
    ConformanceReport r;
    r.total = suite.cases.size();
    for (std::size_t t = 0; t < ok.size(); ++t) {
        if (ok[t]) {
            ++r.passed;
        } else if (r.first_failures.size() < keep_failures) {
            r.first_failures.emplace_back(suite.cases[t].inputs, suite.cases[t].expected);
        }
    }
    r.percentage = r.total == 0 ? 0.0 : 100.0 * static_cast<double>(r.passed) / static_cast<double>(r.total);
    return r;
}

}  // namespace

ConformanceReport conformance_pct(const MealyTable& learned, const TestSuite& suite, std::size_t keep_failures) {
    std::vector<char> ok(suite.cases.size(), 0);
    const auto count = static_cast<std::ptrdiff_t>(suite.cases.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < count; ++t) {
        ok[static_cast<std::size_t>(t)] = passes(learned, suite.cases[static_cast<std::size_t>(t)]) ? 1 : 0;
    }
    return summarize(suite, ok, keep_failures);
}

ConformanceReport conformance_pct_serial(const MealyTable& learned, const TestSuite& suite,
                                         std::size_t keep_failures) {
    std::vector<char> ok(suite.cases.size(), 0);
    for (std::size_t t = 0; t < suite.cases.size(); ++t) {
        ok[t] = passes(learned, suite.cases[t]) ? 1 : 0;
    }
    return summarize(suite, ok, keep_failures);
}

}  // namespace protolearn
