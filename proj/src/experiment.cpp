#include "protolearn/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "protolearn/dot.hpp"
#include "protolearn/errors.hpp"
#include "protolearn/rng.hpp"
#include "protolearn/rpni.hpp"

namespace protolearn {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string Corpus::path_of(const CorpusEntry& e) const { return (fs::path(dir) / e.file).string(); }

Corpus load_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) {
        throw InvalidArgument("cannot open manifest " + manifest_path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(0, manifest_path + ": " + e.what());
    }
    Corpus c;
    c.dir = fs::path(manifest_path).parent_path().string();
    const std::string family = j.value("family", "");
    for (const auto& m : j.at("models")) {
        CorpusEntry e;
        e.name = m.at("name").get<std::string>();
        e.file = m.at("file").get<std::string>();
        e.family = m.value("family", family);
        e.states = m.at("states").get<std::size_t>();
        e.inputs = m.at("inputs").get<std::size_t>();
        e.provenance = m.value("provenance", "synthetic");
        e.seed = m.value("seed", std::uint64_t{0});
        c.entries.push_back(std::move(e));
    }
    return c;
}

void save_manifest(const Corpus& c, const std::string& manifest_path) {
    json j;
    j["family"] = c.entries.empty() ? "" : c.entries.front().family;
    j["models"] = json::array();
    for (const auto& e : c.entries) {
        j["models"].push_back({{"name", e.name},
                               {"file", e.file},
                               {"family", e.family},
                               {"states", e.states},
                               {"inputs", e.inputs},
                               {"provenance", e.provenance},
                               {"seed", e.seed}});
    }
    std::ofstream out(manifest_path);
    if (!out) {
        throw InvalidArgument("cannot write " + manifest_path);
    }
    out << j.dump(2) << '\n';
}

MealyMachine load_corpus_model(const Corpus& c, const CorpusEntry& e) {
    MealyMachine m = load_dot(c.path_of(e));
    if (m.num_states() != e.states || m.num_inputs() != e.inputs) {
        throw InvalidArgument(e.name + ": expected " + std::to_string(e.states) + " states / " +
                              std::to_string(e.inputs) + " inputs, file has " + std::to_string(m.num_states()) +
                              " / " + std::to_string(m.num_inputs()));
    }
    return m;
}

Aggregate aggregate(const std::vector<double>& values) {
    Aggregate a;
    if (values.empty()) {
        return a;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    a.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - a.mean) * (v - a.mean);
        }
        a.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return a;
}

RunRecord::RunRecord(std::string experiment, std::string model, std::vector<std::string> columns)
    : experiment_(std::move(experiment)), model_(std::move(model)), columns_(std::move(columns)) {}

void RunRecord::add_row(std::uint64_t seed, std::vector<double> values) {
    if (values.size() != columns_.size()) {
        throw InvalidArgument("row has " + std::to_string(values.size()) + " values for " +
                              std::to_string(columns_.size()) + " columns");
    }
    seeds_.push_back(seed);
    rows_.push_back(std::move(values));
}

std::vector<double> RunRecord::column(const std::string& name) const {
    auto it = std::find(columns_.begin(), columns_.end(), name);
    if (it == columns_.end()) {
        throw InvalidArgument("no column " + name);
    }
    const auto c = static_cast<std::size_t>(it - columns_.begin());
    std::vector<double> out;
    for (const auto& r : rows_) {
        out.push_back(r[c]);
    }
    return out;
}

double RunRecord::value(std::size_t rep, const std::string& column) const { return this->column(column).at(rep); }

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
        os << static_cast<long long>(v);
    } else {
        os << std::fixed << std::setprecision(4) << v;
    }
    return os.str();
}

std::string fmt_fixed(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << v;
    return os.str();
}

}  // namespace

void RunRecord::write_csv(std::ostream& os, bool header) const {
    if (header) {
        os << "experiment,model,rep,seed";
        for (const auto& c : columns_) {
            os << ',' << c;
        }
        os << '\n';
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        os << experiment_ << ',' << model_ << ',' << r << ',' << seeds_[r];
        for (double v : rows_[r]) {
            os << ',' << fmt(v);
        }
        os << '\n';
    }
    for (int which = 0; which < 2; ++which) {
        os << experiment_ << ',' << model_ << ',' << (which == 0 ? "mean" : "std") << ',';
        for (const auto& c : columns_) {
            const auto a = stat(c);
            os << ',' << fmt_fixed(which == 0 ? a.mean : a.stddev);
        }
        os << '\n';
    }
}

void ExperimentSpec::validate() const {
    if (reps == 0) {
        throw InvalidArgument("repetitions must be >= 1");
    }
    oracle.validate();
    if (suite_size == 0) {
        throw InvalidArgument("suite size must be >= 1");
    }
}

LStarResult run_active(std::shared_ptr<const MealyMachine> gt, std::uint64_t seed, const OracleConfig& oracle) {
    SulSession sul(gt);
    OracleConfig cfg = oracle;
    cfg.seed = seed;
    StateCoverageOracle eq(cfg);
    return learn_lstar(sul, gt->inputs(), std::ref(eq));
}

EvalSuites make_suites(const MealyMachine& gt, std::uint64_t seed, std::size_t size, std::size_t coverage_word_len) {
    const Rng base(seed);
    return EvalSuites{gen_random_suite(gt, size, 3, 32, base.split(11).seed()),
                      gen_coverage_suite(gt, size, coverage_word_len, base.split(12).seed())};
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// seed of the sample drawn in a repetition, kept apart from the oracle stream
std::uint64_t sample_seed(std::uint64_t rep_seed) { return Rng(rep_seed).split(1).seed(); }

// Runs body(r) for every repetition, in parallel when asked, and rethrows the
// first failure in repetition order.
template <typename Row, typename Body>
std::vector<Row> run_reps(const ExperimentSpec& spec, Body body) {
    std::vector<Row> rows(spec.reps);
    std::vector<std::exception_ptr> errors(spec.reps);
    const auto n = static_cast<long>(spec.reps);
#pragma omp parallel for schedule(dynamic) if (spec.parallel)
    for (long r = 0; r < n; ++r) {
        try {
            rows[static_cast<std::size_t>(r)] = body(static_cast<std::size_t>(r));
        } catch (...) {
            errors[static_cast<std::size_t>(r)] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return rows;
}

}  // namespace

RunRecord cmd_learn_active(std::shared_ptr<const MealyMachine> gt, const ExperimentSpec& spec,
                           MealyMachine* learned_out) {
    spec.validate();
    const auto suites = make_suites(*gt, spec.seed, spec.suite_size, spec.coverage_word_len);
    struct Row {
        std::vector<double> values;
        std::optional<MealyMachine> model;
    };
    auto rows = run_reps<Row>(spec, [&](std::size_t r) {
        const auto t0 = Clock::now();
        auto res = run_active(gt, spec.seed + r, spec.oracle);
        const auto& st = res.stats;
        const auto active = st.distinct_traces();
        const auto opt = optimize_sample(*gt, &active);
        const bool correct = same_minimal_model(res.model, *gt);
        const auto cr = conformance_pct_serial(res.model, suites.random, 0).percentage;
        const auto cc = conformance_pct_serial(res.model, suites.coverage, 0).percentage;
        Row row;
        row.values = {double(st.output_queries),
                      double(st.output_query_steps),
                      double(st.conformance_tests),
                      double(st.conformance_test_steps),
                      double(st.rounds),
                      double(st.sum_queries()),
                      double(st.sum_steps()),
                      double(active.size()),
                      active.mean_length(),
                      double(opt.report.optimized_size),
                      opt.report.optimized_mean_len,
                      double(res.model.num_states()),
                      correct ? 1.0 : 0.0,
                      cr,
                      cc,
                      ms_since(t0)};
        row.model = std::move(res.model);
        return row;
    });
    RunRecord rec("active", spec.model_name,
                  {"output_queries", "output_query_steps", "conformance_tests", "conformance_test_steps", "rounds",
                   "sum_queries", "sum_steps", "n_data", "mean_len", "optimized_queries", "optimized_mean_len",
                   "learned_states", "correct", "conf_random", "conf_coverage", "wall_ms"});
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rec.add_row(spec.seed + r, rows[r].values);
    }
    if (learned_out) {
        *learned_out = *rows.front().model;
    }
    return rec;
}

RunRecord cmd_learn_passive(std::shared_ptr<const MealyMachine> gt, const ExperimentSpec& spec, int sample) {
    spec.validate();
    if (sample < 1 || sample > 3) {
        throw InvalidArgument("sample must be 1, 2 or 3");
    }
    // one baseline fixes n_data and the length law for every repetition
    const auto baseline = run_active(gt, spec.seed, spec.oracle);
    const auto suites = make_suites(*gt, spec.seed, spec.suite_size, spec.coverage_word_len);
    auto rows = run_reps<std::vector<double>>(spec, [&](std::size_t r) {
        const auto t0 = Clock::now();
        const std::uint64_t seed = sample_seed(spec.seed + r);
        SampleConfig cfg;
        switch (sample) {
            case 1:
                cfg = sample1_config(baseline.stats, seed);
                break;
            case 2:
                cfg = sample2_config(baseline.stats, seed);
                break;
            default:
                cfg = sample3_config(baseline.stats, gt->num_states(), seed);
                break;
        }
        SulSession sul(gt);
        const auto data = random_sample(sul, cfg);
        const auto learned = rpni(data);
        const bool correct = same_minimal_model(learned, *gt);
        return std::vector<double>{double(data.size()),
                                   data.mean_length(),
                                   double(cfg.n_min),
                                   double(cfg.n_max),
                                   conformance_pct_serial(learned, suites.random, 0).percentage,
                                   conformance_pct_serial(learned, suites.coverage, 0).percentage,
                                   correct ? 1.0 : 0.0,
                                   double(learned.num_states()),
                                   ms_since(t0)};
    });
    RunRecord rec("passive-sample" + std::to_string(sample), spec.model_name,
                  {"n_data", "mean_len", "n_min", "n_max", "conf_random", "conf_coverage", "correct",
                   "learned_states", "wall_ms"});
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rec.add_row(spec.seed + r, rows[r]);
    }
    return rec;
}

PrimeKind parse_prime(const std::string& s) {
    if (s == "random") {
        return PrimeKind::Random;
    }
    if (s == "self") {
        return PrimeKind::Self;
    }
    if (s == "empty") {
        return PrimeKind::Empty;
    }
    throw InvalidArgument("unknown priming '" + s + "' (random|self|empty)");
}

const char* to_string(PrimeKind k) {
    switch (k) {
        case PrimeKind::Self:
            return "self";
        case PrimeKind::Empty:
            return "empty";
        default:
            return "random";
    }
}

namespace {

struct CachedRun {
    LStarResult result;
    QueryStats sul;
};

CachedRun cached_lstar(std::shared_ptr<const MealyMachine> gt, std::uint64_t oracle_seed, const OracleConfig& oracle,
                       const std::vector<Trace>& prime, std::size_t* cache_nodes) {
    SulSession sul(gt, true);
    const std::size_t nodes = sul.prime_cache(std::span(prime));
    if (cache_nodes) {
        *cache_nodes = nodes;
    }
    OracleConfig cfg = oracle;
    cfg.seed = oracle_seed;
    StateCoverageOracle eq(cfg);
    auto res = learn_lstar(sul, gt->inputs(), std::ref(eq));
    return CachedRun{std::move(res), sul.stats()};
}

}  // namespace

RunRecord cmd_cache_experiment(std::shared_ptr<const MealyMachine> gt, const ExperimentSpec& spec, PrimeKind prime) {
    spec.validate();
    auto rows = run_reps<std::vector<double>>(spec, [&](std::size_t r) {
        const auto t0 = Clock::now();
        const std::uint64_t seed = spec.seed + r;
        // the cache also answers repeats inside one run; measure against that
        const auto empty = cached_lstar(gt, seed, spec.oracle, {}, nullptr);
        std::vector<Trace> data;
        if (prime == PrimeKind::Self) {
            data = empty.result.stats.all_traces;
        } else if (prime == PrimeKind::Random) {
            const auto cfg = sample1_config(empty.result.stats, sample_seed(seed));
            SulSession gen(gt);
            data = random_sample(gen, cfg).traces();
        }
        std::size_t nodes = 0;
        const auto primed = cached_lstar(gt, seed, spec.oracle, data, &nodes);
        const double base = static_cast<double>(empty.sul.queries);
        const double additional = base == 0.0 ? 0.0 : static_cast<double>(primed.sul.queries) / base;
        return std::vector<double>{base,
                                   double(data.size()),
                                   double(nodes),
                                   double(primed.sul.queries + primed.sul.cache_hits),
                                   double(primed.sul.cache_hits),
                                   double(primed.sul.queries),
                                   1.0 - additional,
                                   additional,
                                   same_minimal_model(primed.result.model, *gt) ? 1.0 : 0.0,
                                   ms_since(t0)};
    });
    RunRecord rec(std::string("cache-") + to_string(prime), spec.model_name,
                  {"baseline_sul_queries", "prime_traces", "prime_cache_nodes", "primed_queries", "cache_hits",
                   "primed_sul_queries", "hit_fraction", "additional_fraction", "correct", "wall_ms"});
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rec.add_row(spec.seed + r, rows[r]);
    }
    return rec;
}

RunRecord cmd_optimize(std::shared_ptr<const MealyMachine> gt, const ExperimentSpec& spec, SampleSet* optimized_out) {
    spec.validate();
    struct Row {
        std::vector<double> values;
        std::optional<SampleSet> sample;
    };
    auto rows = run_reps<Row>(spec, [&](std::size_t r) {
        const auto res = run_active(gt, spec.seed + r, spec.oracle);
        const auto active = res.stats.distinct_traces();
        auto opt = optimize_sample(*gt, &active);
        const bool correct = same_minimal_model(rpni(opt.sample), *gt);
        const auto& rep = opt.report;
        Row row;
        row.values = {double(rep.original_size),
                      rep.original_mean_len,
                      double(rep.optimized_size),
                      rep.optimized_mean_len,
                      rep.original_size == 0 ? 0.0 : double(rep.optimized_size) / double(rep.original_size),
                      double(rep.w_set.suffixes.size()),
                      correct ? 1.0 : 0.0};
        row.sample = std::move(opt.sample);
        return row;
    });
    RunRecord rec("optimize", spec.model_name,
                  {"original_size", "original_mean_len", "optimized_size", "optimized_mean_len", "size_ratio",
                   "w_size", "correct"});
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rec.add_row(spec.seed + r, rows[r].values);
    }
    if (optimized_out) {
        *optimized_out = *rows.front().sample;
    }
    return rec;
}

HeatmapGrid cmd_heatmap(std::shared_ptr<const MealyMachine> gt, const ExperimentSpec& spec,
                        const std::vector<std::size_t>& factors, const std::vector<double>& mean_lengths,
                        bool parallel) {
    spec.validate();
    const auto baseline = run_active(gt, spec.seed, spec.oracle);
    HeatmapSpec hs;
    hs.base_size = baseline.stats.distinct_count();
    hs.factors = factors;
    hs.mean_lengths = mean_lengths;
    hs.reps = spec.reps;
    hs.seed = spec.seed;
    hs.suite_size = spec.suite_size;
    hs.suite_word_len = spec.coverage_word_len;
    return parallel ? heatmap_grid(gt, hs) : heatmap_grid_serial(gt, hs);
}

void write_heatmap_csv(std::ostream& os, const HeatmapGrid& g, std::size_t base_size, std::size_t reps) {
    os << "mean_length,factor,n_data,n_max,conformance,std,correct,reps\n";
    for (std::size_t li = 0; li < g.mean_lengths.size(); ++li) {
        for (std::size_t fi = 0; fi < g.factors.size(); ++fi) {
            const auto a = aggregate(g.per_rep[li][fi]);
            os << fmt_fixed(g.mean_lengths[li]) << ',' << g.factors[fi] << ',' << base_size * g.factors[fi] << ','
               << max_length_for_mean(g.mean_lengths[li]) << ',' << fmt_fixed(g.cells[li][fi]) << ','
               << fmt_fixed(a.stddev) << ',' << g.correct[li][fi] << ',' << reps << '\n';
        }
    }
}

ConformanceSummary cmd_conformance(const MealyMachine& gt, const MealyTable& learned, std::uint64_t seed,
                                   std::size_t suite_size) {
    const auto suites = make_suites(gt, seed, suite_size);
    ConformanceSummary s;
    s.random = conformance_pct(learned, suites.random);
    s.coverage = conformance_pct(learned, suites.coverage);
    s.correct = same_minimal_model(learned, gt);
    return s;
}

void verify_determinism(const RunRecord& first, const RunRecord& again) {
    if (first.columns() != again.columns()) {
        throw DeterminismViolation("column sets differ between runs");
    }
    const std::size_t reps = std::min(first.reps(), again.reps());
    for (const auto& c : first.columns()) {
        if (c == "wall_ms") {
            continue;
        }
        for (std::size_t r = 0; r < reps; ++r) {
            if (first.value(r, c) != again.value(r, c)) {
                throw DeterminismViolation("rep " + std::to_string(r) + " column " + c + ": " +
                                           fmt(first.value(r, c)) + " vs " + fmt(again.value(r, c)));
            }
        }
    }
}

}  // namespace protolearn
