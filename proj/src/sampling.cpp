#include "protolearn/sampling.hpp"

#include <cmath>
#include <unordered_map>

#include "protolearn/errors.hpp"
#include "protolearn/rng.hpp"
#include "protolearn/rpni.hpp"

namespace protolearn {

SampleSet random_sample(SulSession& sul, const SampleConfig& cfg) {
    cfg.validate();
    const auto& alphabet = sul.alphabet();
    if (alphabet.empty()) {
        throw InvalidArgument("SUL has an empty input alphabet");
    }
    Rng rng(cfg.seed);
    std::vector<Trace> traces;
    traces.reserve(cfg.n_data);
    for (std::size_t t = 0; t < cfg.n_data; ++t) {
        const auto len = static_cast<std::size_t>(rng.uniform(cfg.n_min, cfg.n_max));
        Word w;
        w.reserve(len);
        for (std::size_t j = 0; j < len; ++j) {
            w.push_back(alphabet[static_cast<std::size_t>(rng.uniform(0, alphabet.size() - 1))]);
        }
        Word out = sul.output_query(w);
        traces.emplace_back(std::move(w), std::move(out));
    }
    return SampleSet(std::move(traces), cfg, alphabet);
}

std::size_t max_length_for_mean(double mean) {
    // the epsilon keeps x.5 cases that print as x.5 from rounding down
    const double v = std::floor(2.0 * mean - 1.0 + 0.5 + 1e-9);
    return v < 1.0 ? 1 : static_cast<std::size_t>(v);
}

namespace {

void require_baseline(std::size_t active_size) {
    if (active_size == 0) {
        throw InvalidArgument("the active learning sample is empty");
    }
}

// round-half-up(2 * steps / n - 1) without floating point
std::size_t exact_max_length(const SampleSet& s) {
    const std::size_t n = s.size();
    const std::size_t num = 4 * s.total_steps();
    if (num <= n) {
        return 1;
    }
    return std::max<std::size_t>(1, (num - n) / (2 * n));
}

}  // namespace

SampleConfig sample1_config(std::size_t active_size, double active_mean, std::uint64_t seed) {
    require_baseline(active_size);
    return SampleConfig{active_size, 1, max_length_for_mean(active_mean), seed, "sample-1"};
}

SampleConfig sample1_config(const LearningStats& stats, std::uint64_t seed) {
    const auto s = stats.distinct_traces();
    require_baseline(s.size());
    return SampleConfig{s.size(), 1, exact_max_length(s), seed, "sample-1"};
}

SampleConfig sample2_config(std::size_t active_size, double active_mean, std::uint64_t seed) {
    auto cfg = sample1_config(active_size, active_mean, seed);
    cfg.n_data *= 2;
    cfg.label = "sample-2";
    return cfg;
}

SampleConfig sample2_config(const LearningStats& stats, std::uint64_t seed) {
    auto cfg = sample1_config(stats, seed);
    cfg.n_data *= 2;
    cfg.label = "sample-2";
    return cfg;
}

SampleConfig sample3_config(std::size_t active_size, std::size_t num_states, std::uint64_t seed) {
    require_baseline(active_size);
    if (num_states == 0) {
        throw InvalidArgument("sample 3 needs |Q| >= 1");
    }
    return SampleConfig{active_size, num_states, 2 * num_states, seed, "sample-3"};
}

SampleConfig sample3_config(const LearningStats& stats, std::size_t num_states, std::uint64_t seed) {
    return sample3_config(stats.distinct_count(), num_states, seed);
}

std::vector<Trace> prefix_reduce(const std::vector<Trace>& traces) {
    // input trie; a trace survives iff it ends on a leaf and is the first to do so
    struct Node {
        std::unordered_map<std::uint32_t, std::size_t> kids;
    };
    std::vector<Node> trie(1);
    std::vector<std::size_t> end(traces.size());
    for (std::size_t t = 0; t < traces.size(); ++t) {
        std::size_t v = 0;
        for (auto s : traces[t].inputs()) {
            auto [it, fresh] = trie[v].kids.try_emplace(s.id(), trie.size());
            const std::size_t next = it->second;
            if (fresh) {
                trie.emplace_back();
            }
            v = next;
        }
        end[t] = v;
    }
    std::vector<bool> taken(trie.size(), false);
    std::vector<Trace> out;
    for (std::size_t t = 0; t < traces.size(); ++t) {
        const std::size_t v = end[t];
        if (!trie[v].kids.empty() || taken[v]) {
            continue;
        }
        taken[v] = true;
        out.push_back(traces[t]);
    }
    return out;
}

SampleSet prefix_reduce(const SampleSet& s) {
    auto kept = prefix_reduce(s.traces());
    auto cfg = s.config();
    cfg.n_data = kept.size();
    return SampleSet(std::move(kept), cfg, s.alphabet());
}

OptimizedSample optimize_sample(const MealyMachine& gt, const SampleSet* original) {
    CharacterizationSet w = characterization_set(gt);
    const AccessMap access = access_sequences(gt);
    std::vector<Word> queries;
    for (StateId q : access.ordered_states()) {
        const Word& u = access[q];
        if (w.suffixes.empty()) {
            for (auto x : gt.inputs()) {
                Word v = u;
                v.push_back(x);
                queries.push_back(std::move(v));
            }
            continue;
        }
        for (std::size_t xi = 0; xi <= gt.num_inputs(); ++xi) {
            for (const auto& suffix : w.suffixes) {
                Word v = u;
                if (xi > 0) {
                    v.push_back(gt.inputs()[xi - 1]);
                }
                v.insert(v.end(), suffix.begin(), suffix.end());
                queries.push_back(std::move(v));
            }
        }
    }
    std::vector<Trace> traces;
    traces.reserve(queries.size());
    for (const auto& v : queries) {
        traces.push_back(run_trace(gt, v));
    }
    traces = prefix_reduce(traces);

    SampleConfig cfg;
    cfg.label = "optimized";
    cfg.n_data = traces.size();
    SampleSet sample(std::move(traces), cfg, gt.inputs());

    OptimizationReport report;
    report.optimized_size = sample.size();
    report.optimized_mean_len = sample.mean_length();
    if (original) {
        report.original_size = original->size();
        report.original_mean_len = original->mean_length();
    }
    report.w_set = std::move(w);
    return OptimizedSample{std::move(sample), std::move(report)};
}

namespace {

struct CellJob {
    std::size_t li;
    std::size_t fi;
    std::size_t rep;
};

std::uint64_t cell_seed(std::uint64_t base, std::size_t li, std::size_t fi, std::size_t nf) {
    return splitmix64(base ^ splitmix64(0x9e37ULL + li * nf + fi));
}

void check_spec(const HeatmapSpec& spec) {
    if (spec.base_size == 0) {
        throw InvalidArgument("heatmap needs a non-empty active sample size");
    }
    if (spec.factors.empty() || spec.mean_lengths.empty() || spec.reps == 0) {
        throw InvalidArgument("heatmap needs at least one factor, one length and one repetition");
    }
    for (auto f : spec.factors) {
        if (f == 0) {
            throw InvalidArgument("heatmap size factors must be >= 1");
        }
    }
    for (auto l : spec.mean_lengths) {
        if (!(l >= 1.0)) {
            throw InvalidArgument("heatmap mean lengths must be >= 1");
        }
    }
}

struct CellResult {
    double pct{0.0};
    bool correct{false};
};

CellResult run_cell(const std::shared_ptr<const MealyMachine>& gt, const HeatmapSpec& spec, const TestSuite& suite,
                    const CellJob& job) {
    SulSession sul(gt);
    SampleConfig cfg{spec.base_size * spec.factors[job.fi], 1, max_length_for_mean(spec.mean_lengths[job.li]),
                     cell_seed(spec.seed, job.li, job.fi, spec.factors.size()) + job.rep, "sample-4-cell"};
    const auto sample = random_sample(sul, cfg);
    const auto learned = rpni(sample);
    // cells already run in parallel; score each one serially
    const auto report = conformance_pct_serial(learned, suite, 0);
    return {report.percentage, same_minimal_model(learned, *gt)};
}

HeatmapGrid assemble(const HeatmapSpec& spec, const std::vector<CellJob>& jobs, const std::vector<CellResult>& res) {
    HeatmapGrid g;
    g.factors = spec.factors;
    g.mean_lengths = spec.mean_lengths;
    const std::size_t nl = spec.mean_lengths.size();
    const std::size_t nf = spec.factors.size();
    g.per_rep.assign(nl, std::vector<std::vector<double>>(nf, std::vector<double>(spec.reps, 0.0)));
    g.correct.assign(nl, std::vector<std::size_t>(nf, 0));
    g.cells.assign(nl, std::vector<double>(nf, 0.0));
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        g.per_rep[jobs[j].li][jobs[j].fi][jobs[j].rep] = res[j].pct;
        g.correct[jobs[j].li][jobs[j].fi] += res[j].correct ? 1 : 0;
    }
    for (std::size_t li = 0; li < nl; ++li) {
        for (std::size_t fi = 0; fi < nf; ++fi) {
            double sum = 0.0;
            for (double v : g.per_rep[li][fi]) {
                sum += v;
            }
            g.cells[li][fi] = sum / static_cast<double>(spec.reps);
        }
    }
    return g;
}

std::vector<CellJob> make_jobs(const HeatmapSpec& spec) {
    std::vector<CellJob> jobs;
    for (std::size_t li = 0; li < spec.mean_lengths.size(); ++li) {
        for (std::size_t fi = 0; fi < spec.factors.size(); ++fi) {
            for (std::size_t r = 0; r < spec.reps; ++r) {
                jobs.push_back({li, fi, r});
            }
        }
    }
    return jobs;
}

}  // namespace

HeatmapGrid heatmap_grid(std::shared_ptr<const MealyMachine> gt, const HeatmapSpec& spec) {
    check_spec(spec);
    const auto suite = gen_coverage_suite(*gt, spec.suite_size, spec.suite_word_len, spec.seed);
    const auto jobs = make_jobs(spec);
    std::vector<CellResult> res(jobs.size());
    std::vector<std::string> errors(jobs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        try {
            res[j] = run_cell(gt, spec, suite, jobs[j]);
        } catch (const std::exception& e) {
            errors[j] = e.what();
        }
    }
    for (const auto& e : errors) {
        if (!e.empty()) {
            throw LearningFailure("heatmap cell failed: " + e);
        }
    }
    return assemble(spec, jobs, res);
}

HeatmapGrid heatmap_grid_serial(std::shared_ptr<const MealyMachine> gt, const HeatmapSpec& spec) {
    check_spec(spec);
    const auto suite = gen_coverage_suite(*gt, spec.suite_size, spec.suite_word_len, spec.seed);
    const auto jobs = make_jobs(spec);
    std::vector<CellResult> res;
    res.reserve(jobs.size());
    for (const auto& job : jobs) {
        res.push_back(run_cell(gt, spec, suite, job));
    }
    return assemble(spec, jobs, res);
}

}  // namespace protolearn
