#include "protolearn/lstar.hpp"

#include <algorithm>
#include <unordered_set>

#include "protolearn/errors.hpp"

namespace protolearn {

namespace {

Word concat(const Word& a, const Word& b) {
    Word w = a;
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

Word concat(const Word& a, Symbol s) {
    Word w = a;
    w.push_back(s);
    return w;
}

}  // namespace

ObservationTable::ObservationTable(std::vector<Symbol> alphabet) : alphabet_(std::move(alphabet)) {
    std::sort(alphabet_.begin(), alphabet_.end(), by_name{});
    alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
    if (alphabet_.empty()) {
        throw InvalidArgument("observation table needs a non-empty alphabet");
    }
    short_.push_back(Word{});
    for (auto i : alphabet_) {
        suffixes_.push_back(Word{i});
    }
    ensure_row(Word{});
    for (auto i : alphabet_) {
        ensure_row(Word{i});
    }
}

void ObservationTable::ensure_row(const Word& prefix) {
    auto& cells = cells_[prefix];
    cells.resize(suffixes_.size());
}

bool ObservationTable::in_short(const Word& s) const { return std::find(short_.begin(), short_.end(), s) != short_.end(); }

bool ObservationTable::has_suffix(const Word& e) const {
    return std::find(suffixes_.begin(), suffixes_.end(), e) != suffixes_.end();
}

std::vector<Word> ObservationTable::long_prefixes() const {
    std::vector<Word> out;
    for (const auto& s : short_) {
        for (auto i : alphabet_) {
            Word w = concat(s, i);
            if (!in_short(w)) {
                out.push_back(std::move(w));
            }
        }
    }
    std::sort(out.begin(), out.end(), shortlex_less);
    return out;
}

ObservationTable::Row ObservationTable::row(const Word& prefix) const {
    auto it = cells_.find(prefix);
    if (it == cells_.end()) {
        throw InvalidArgument("no row for [" + to_string(prefix) + "]");
    }
    Row r;
    r.reserve(suffixes_.size());
    for (std::size_t e = 0; e < suffixes_.size(); ++e) {
        if (e >= it->second.size() || !it->second[e]) {
            throw InvalidArgument("row [" + to_string(prefix) + "] is not filled");
        }
        r.push_back(*it->second[e]);
    }
    return r;
}

const Word& ObservationTable::cell(const Word& prefix, std::size_t suffix_index) const {
    auto it = cells_.find(prefix);
    if (it == cells_.end() || suffix_index >= it->second.size() || !it->second[suffix_index]) {
        throw InvalidArgument("cell not filled");
    }
    return *it->second[suffix_index];
}

std::size_t ObservationTable::fill(SulSession& sul) {
    std::vector<Word> rows = short_;
    for (auto& w : long_prefixes()) {
        rows.push_back(std::move(w));
    }
    std::sort(rows.begin(), rows.end(), shortlex_less);
    std::size_t filled_cells = 0;
    for (const auto& prefix : rows) {
        auto& cells = cells_[prefix];
        cells.resize(suffixes_.size());
        for (std::size_t e = 0; e < suffixes_.size(); ++e) {
            if (cells[e]) {
                continue;
            }
            const Word out = sul.query(concat(prefix, suffixes_[e]));
            cells[e] = Word(out.end() - static_cast<std::ptrdiff_t>(suffixes_[e].size()), out.end());
            ++filled_cells;
        }
    }
    return filled_cells;
}

bool ObservationTable::filled() const {
    auto check = [&](const Word& p) {
        auto it = cells_.find(p);
        return it != cells_.end() && it->second.size() == suffixes_.size() &&
               std::all_of(it->second.begin(), it->second.end(), [](const auto& c) { return c.has_value(); });
    };
    if (!std::all_of(short_.begin(), short_.end(), check)) {
        return false;
    }
    auto lp = long_prefixes();
    return std::all_of(lp.begin(), lp.end(), check);
}

std::optional<Word> ObservationTable::first_unclosed() const {
    std::vector<Row> short_rows;
    short_rows.reserve(short_.size());
    for (const auto& s : short_) {
        short_rows.push_back(row(s));
    }
    for (const auto& lp : long_prefixes()) {
        const Row r = row(lp);
        if (std::find(short_rows.begin(), short_rows.end(), r) == short_rows.end()) {
            return lp;
        }
    }
    return std::nullopt;
}

void ObservationTable::promote(const Word& prefix) {
    if (in_short(prefix)) {
        return;
    }
    if (prefix.empty() || !in_short(Word(prefix.begin(), prefix.end() - 1))) {
        throw InvalidArgument("promoting [" + to_string(prefix) + "] would break prefix-closedness of S");
    }
    short_.push_back(prefix);
    std::sort(short_.begin(), short_.end(), shortlex_less);
    for (auto i : alphabet_) {
        ensure_row(concat(prefix, i));
    }
}

bool ObservationTable::add_suffix(Word e) {
    if (e.empty() || has_suffix(e)) {
        return false;
    }
    suffixes_.push_back(std::move(e));
    return true;
}

void make_closed(ObservationTable& table, SulSession& sul) {
    table.fill(sul);
    while (auto lp = table.first_unclosed()) {
        table.promote(*lp);
        table.fill(sul);
    }
}

Hypothesis build_hypothesis(const ObservationTable& table) {
    if (!table.filled()) {
        throw InvalidArgument("hypothesis requires a filled observation table");
    }
    if (auto lp = table.first_unclosed()) {
        throw InvalidArgument("hypothesis requires a closed table; row [" + to_string(*lp) + "] is unmatched");
    }
    const auto& S = table.short_prefixes();
    std::vector<ObservationTable::Row> rows;
    rows.reserve(S.size());
    for (const auto& s : S) {
        rows.push_back(table.row(s));
    }
    auto state_of = [&](const Word& w) {
        const auto r = table.row(w);
        return static_cast<StateId>(std::find(rows.begin(), rows.end(), r) - rows.begin());
    };

    // column k of E is the single input alphabet[k]
    const auto& alphabet = table.alphabet();
    MealyBuilder b;
    for (std::size_t q = 0; q < S.size(); ++q) {
        b.add_state("s" + std::to_string(q));
    }
    b.set_initial(state_of(Word{}));
    for (std::size_t q = 0; q < S.size(); ++q) {
        for (std::size_t k = 0; k < alphabet.size(); ++k) {
            Word ext = S[q];
            ext.push_back(alphabet[k]);
            b.add_transition(static_cast<StateId>(q), alphabet[k], table.cell(S[q], k).front(), state_of(ext));
        }
    }
    return Hypothesis{b.build(), S};
}

Word process_counterexample(ObservationTable& table, SulSession& sul, const Hypothesis& hyp, const Trace& cex) {
    const Word& x = cex.inputs();
    const Word predicted = run(hyp.machine, x);
    if (predicted == cex.outputs()) {
        throw InvalidCounterexample("hypothesis already produces [" + cex.str() + "]");
    }
    const std::size_t m = x.size();

    // state reached by the hypothesis after x[0..i), as its S representative
    std::vector<StateId> states(m + 1);
    states[0] = hyp.machine.initial();
    for (std::size_t i = 0; i < m; ++i) {
        states[i + 1] = step(hyp.machine, states[i], x[i]).first;
    }

    // agrees(i): the SUL, started in rep(i), reproduces the hypothesis on x[i..)
    std::vector<std::optional<bool>> memo(m + 1);
    memo[0] = false;
    memo[m] = true;
    auto agrees = [&](std::size_t i) {
        if (!memo[i]) {
            const Word& u = hyp.representatives[states[i]];
            Word q = u;
            q.insert(q.end(), x.begin() + static_cast<std::ptrdiff_t>(i), x.end());
            const Word out = sul.query(q);
            memo[i] = std::equal(out.begin() + static_cast<std::ptrdiff_t>(u.size()), out.end(),
                                 predicted.begin() + static_cast<std::ptrdiff_t>(i));
        }
        return *memo[i];
    };

    std::size_t lo = 0;
    std::size_t hi = m;
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (agrees(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Word suffix(x.begin() + static_cast<std::ptrdiff_t>(hi), x.end());
    if (!table.add_suffix(suffix)) {
        // fall back to any other breakpoint that yields a fresh suffix
        bool found = false;
        for (std::size_t i = 0; i + 1 < m && !found; ++i) {
            if (!agrees(i) && agrees(i + 1)) {
                suffix.assign(x.begin() + static_cast<std::ptrdiff_t>(i + 1), x.end());
                found = table.add_suffix(suffix);
            }
        }
        if (!found) {
            throw LearningFailure("counterexample [" + cex.str() + "] yields no new distinguishing suffix");
        }
    }
    table.fill(sul);
    return suffix;
}

SampleSet LearningStats::distinct_traces() const {
    std::unordered_set<Word> seen;
    std::vector<Trace> out;
    std::vector<Symbol> alphabet;
    for (const auto& t : all_traces) {
        if (seen.insert(t.inputs()).second) {
            out.push_back(t);
        }
        for (auto i : t.inputs()) {
            if (std::find(alphabet.begin(), alphabet.end(), i) == alphabet.end()) {
                alphabet.push_back(i);
            }
        }
    }
    std::sort(alphabet.begin(), alphabet.end(), by_name{});
    SampleConfig cfg;
    cfg.label = "active";
    cfg.n_data = out.size();
    return SampleSet(std::move(out), cfg, std::move(alphabet));
}

LStarResult learn_lstar(SulSession& sul, const std::vector<Symbol>& alphabet, const EquivalenceOracle& oracle,
                        LStarOptions options) {
    {
        auto a = alphabet;
        std::sort(a.begin(), a.end(), by_name{});
        if (a != sul.alphabet()) {
            throw InvalidArgument("learning alphabet differs from the SUL alphabet");
        }
    }
    LearningStats stats;
    const std::size_t log_start = sul.executed().size();
    const QueryStats start = sul.stats();
    QueryStats mark = start;
    auto charge_queries = [&](bool conformance) {
        const QueryStats now = sul.stats();
        if (conformance) {
            stats.conformance_tests += now.queries - mark.queries;
            stats.conformance_test_steps += now.steps - mark.steps;
        } else {
            stats.output_queries += now.queries - mark.queries;
            stats.output_query_steps += now.steps - mark.steps;
        }
        mark = now;
    };

    ObservationTable table(alphabet);
    make_closed(table, sul);
    charge_queries(false);

    std::optional<Hypothesis> hyp;
    while (true) {
        if (stats.rounds >= options.max_rounds) {
            throw LearningFailure("no conforming hypothesis within " + std::to_string(options.max_rounds) + " rounds");
        }
        hyp = build_hypothesis(table);
        ++stats.rounds;
        auto cex = oracle(hyp->machine, sul);
        charge_queries(true);
        if (!cex) {
            break;
        }
        process_counterexample(table, sul, *hyp, *cex);
        make_closed(table, sul);
        charge_queries(false);
    }

    stats.cache_hits = sul.stats().cache_hits - start.cache_hits;
    stats.all_traces.assign(sul.executed().begin() + static_cast<std::ptrdiff_t>(log_start), sul.executed().end());
    LStarResult result{std::move(hyp->machine), std::move(stats), table.short_prefixes().size(),
                       table.suffixes().size()};
    return result;
}

}  // namespace protolearn
