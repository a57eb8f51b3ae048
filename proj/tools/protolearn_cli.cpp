// protolearn: experiment front end. CSV goes to --out (stdout when omitted).
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "protolearn/dot.hpp"
#include "protolearn/errors.hpp"
#include "protolearn/experiment.hpp"
#include "protolearn/synth.hpp"

namespace fs = std::filesystem;
using namespace protolearn;

namespace {

struct Common {
    std::string model;
    std::string name;
    std::uint64_t seed{1};
    std::size_t reps{5};
    std::string out;
    std::size_t walks{25};
    std::size_t steps{30};
    std::size_t suite{10000};
    bool serial{false};
    bool check{false};
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--model", c.model, "DOT file, or a corpus manifest.json together with --name")->required();
    app->add_option("--name", c.name, "corpus entry (with a manifest) or label for the CSV");
    app->add_option("--seed", c.seed, "base seed; repetition r uses seed + r");
    app->add_option("--reps", c.reps, "repetitions")->check(CLI::PositiveNumber);
    app->add_option("--out", c.out, "CSV output file");
    app->add_option("--walks", c.walks, "oracle walks per hypothesis state")->check(CLI::PositiveNumber);
    app->add_option("--steps", c.steps, "oracle random suffix length");
    app->add_option("--suite-size", c.suite, "evaluation suite size")->check(CLI::PositiveNumber);
    app->add_flag("--serial", c.serial, "run repetitions one after another");
    app->add_flag("--check-determinism", c.check, "run twice and compare (exit 3 on mismatch)");
}

std::shared_ptr<const MealyMachine> load_model(Common& c) {
    if (fs::path(c.model).extension() == ".json") {
        const Corpus corpus = load_manifest(c.model);
        for (const auto& e : corpus.entries) {
            if (e.name == c.name) {
                return std::make_shared<const MealyMachine>(load_corpus_model(corpus, e));
            }
        }
        throw InvalidArgument("manifest " + c.model + " has no entry '" + c.name + "'");
    }
    if (c.name.empty()) {
        c.name = fs::path(c.model).stem().string();
    }
    return std::make_shared<const MealyMachine>(load_dot(c.model));
}

ExperimentSpec make_spec(const Common& c) {
    ExperimentSpec s;
    s.model_path = c.model;
    s.model_name = c.name;
    s.reps = c.reps;
    s.seed = c.seed;
    s.oracle.n_walks = c.walks;
    s.oracle.n_step = c.steps;
    s.suite_size = c.suite;
    s.parallel = !c.serial;
    s.validate();
    return s;
}

// Writes to --out or stdout.
template <typename F>
void emit(const std::string& path, F&& write) {
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream os(path);
    if (!os) {
        throw InvalidArgument("cannot write " + path);
    }
    write(os);
}

template <typename Run>
void run_record(const Common& c, Run&& run) {
    RunRecord rec = run();
    if (c.check) {
        verify_determinism(rec, run());
    }
    emit(c.out, [&](std::ostream& os) { rec.write_csv(os); });
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Active vs passive Mealy machine learning workbench"};
    app.require_subcommand(1);

    Common active;
    auto* cmd_active = app.add_subcommand("learn-active", "L* with the state-coverage oracle");
    add_common(cmd_active, active);
    std::string learned_dot;
    cmd_active->add_option("--dot", learned_dot, "write the learned model of repetition 0");

    Common passive;
    int sample = 1;
    auto* cmd_passive = app.add_subcommand("learn-passive", "RPNI on random samples shaped by an active run");
    add_common(cmd_passive, passive);
    cmd_passive->add_option("--sample", sample, "sample kind")->required()->check(CLI::IsMember({1, 2, 3}));

    Common heat;
    std::vector<std::string> factors_raw;
    std::vector<std::string> lengths_raw;
    auto* cmd_heat = app.add_subcommand("heatmap", "conformance over sample size factors and mean lengths");
    add_common(cmd_heat, heat);
    cmd_heat->add_option("--factors", factors_raw, "size factors (space or comma separated)")->required();
    cmd_heat->add_option("--lengths", lengths_raw, "mean trace lengths")->required();

    Common opt;
    std::string opt_traces;
    auto* cmd_opt = app.add_subcommand("optimize", "characterization-based sample vs the active sample");
    add_common(cmd_opt, opt);
    cmd_opt->add_option("--traces", opt_traces, "write the optimized sample of repetition 0");

    Common cache;
    std::string prime = "random";
    auto* cmd_cache = app.add_subcommand("cache", "rerun L* on a cache primed with passive data");
    add_common(cmd_cache, cache);
    cmd_cache->add_option("--prime", prime, "random | self | empty");

    std::string conf_ref;
    std::string conf_learned;
    std::uint64_t conf_seed = 1;
    std::size_t conf_size = 10000;
    std::string conf_out;
    auto* cmd_conf = app.add_subcommand("conformance", "score a learned model against a reference model");
    cmd_conf->add_option("--model", conf_ref, "reference DOT")->required();
    cmd_conf->add_option("--learned", conf_learned, "learned DOT (may be partial)")->required();
    cmd_conf->add_option("--seed", conf_seed, "suite seed");
    cmd_conf->add_option("--suite-size", conf_size, "tests per suite")->check(CLI::PositiveNumber);
    cmd_conf->add_option("--out", conf_out, "CSV output file");

    std::size_t syn_states = 0;
    std::size_t syn_inputs = 0;
    std::uint64_t syn_seed = 1;
    std::string syn_profile = "generic";
    std::string syn_out;
    std::string syn_manifest;
    std::string syn_name;
    auto* cmd_syn = app.add_subcommand("synth-model", "random minimal, strongly connected Mealy machine");
    cmd_syn->add_option("--states", syn_states, "|Q|")->required()->check(CLI::PositiveNumber);
    cmd_syn->add_option("--inputs", syn_inputs, "|I|")->required()->check(CLI::PositiveNumber);
    cmd_syn->add_option("--seed", syn_seed, "generator seed");
    cmd_syn->add_option("--profile", syn_profile, "generic | ble | mqtt");
    cmd_syn->add_option("--out", syn_out, "DOT output file")->required();
    cmd_syn->add_option("--manifest", syn_manifest, "add or update the entry in this manifest.json");
    cmd_syn->add_option("--name", syn_name, "entry name (default: file stem)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*cmd_active) {
            auto gt = load_model(active);
            const auto spec = make_spec(active);
            std::optional<MealyMachine> learned;
            run_record(active, [&] {
                MealyMachine m = *gt;
                auto rec = cmd_learn_active(gt, spec, &m);
                learned = std::move(m);
                return rec;
            });
            if (!learned_dot.empty()) {
                save_dot(*learned, learned_dot);
            }
        } else if (*cmd_passive) {
            auto gt = load_model(passive);
            const auto spec = make_spec(passive);
            run_record(passive, [&] { return cmd_learn_passive(gt, spec, sample); });
        } else if (*cmd_heat) {
            auto gt = load_model(heat);
            const auto spec = make_spec(heat);
            std::vector<std::size_t> factors;
            std::vector<double> lengths;
            try {
                for (const auto& raw : factors_raw) {
                    for (const auto& f : split_list(raw)) {
                        factors.push_back(std::stoul(f));
                    }
                }
                for (const auto& raw : lengths_raw) {
                    for (const auto& l : split_list(raw)) {
                        lengths.push_back(std::stod(l));
                    }
                }
            } catch (const std::logic_error&) {
                throw InvalidArgument("--factors and --lengths take numbers");
            }
            const auto base = run_active(gt, spec.seed, spec.oracle).stats.distinct_count();
            const auto grid = cmd_heatmap(gt, spec, factors, lengths, spec.parallel);
            if (heat.check) {
                const auto again = cmd_heatmap(gt, spec, factors, lengths, spec.parallel);
                if (again.per_rep != grid.per_rep || again.correct != grid.correct) {
                    throw DeterminismViolation("heatmap differs between two runs with the same seed");
                }
            }
            emit(heat.out, [&](std::ostream& os) { write_heatmap_csv(os, grid, base, spec.reps); });
        } else if (*cmd_opt) {
            auto gt = load_model(opt);
            const auto spec = make_spec(opt);
            SampleSet optimized({}, SampleConfig{}, gt->inputs());
            run_record(opt, [&] { return cmd_optimize(gt, spec, &optimized); });
            if (!opt_traces.empty()) {
                save_traces(optimized, opt_traces);
            }
        } else if (*cmd_cache) {
            auto gt = load_model(cache);
            const auto spec = make_spec(cache);
            const auto kind = parse_prime(prime);
            run_record(cache, [&] { return cmd_cache_experiment(gt, spec, kind); });
        } else if (*cmd_conf) {
            const MealyMachine gt = load_dot(conf_ref);
            const PartialMealy learned = load_dot_partial(conf_learned);
            const auto s = cmd_conformance(gt, learned, conf_seed, conf_size);
            emit(conf_out, [&](std::ostream& os) {
                os << "suite,total,passed,percentage,correct\n";
                for (const auto* r : {&s.random, &s.coverage}) {
                    os << (r == &s.random ? "random" : "coverage") << ',' << r->total << ',' << r->passed << ','
                       << r->percentage << ',' << (s.correct ? 1 : 0) << '\n';
                }
            });
        } else if (*cmd_syn) {
            const auto profile = parse_profile(syn_profile);
            SynthOptions o;
            if (profile == SynthProfile::Ble) {
                o = SynthOptions::ble();
            } else if (profile == SynthProfile::Mqtt) {
                o = SynthOptions::mqtt();
            }
            const MealyMachine m = synth_model(syn_states, syn_inputs, syn_seed, o);
            save_dot(m, syn_out);
            if (!syn_manifest.empty()) {
                Corpus c;
                if (fs::exists(syn_manifest)) {
                    c = load_manifest(syn_manifest);
                }
                CorpusEntry e;
                e.name = syn_name.empty() ? fs::path(syn_out).stem().string() : syn_name;
                e.file = fs::relative(fs::absolute(syn_out), fs::absolute(syn_manifest).parent_path()).string();
                e.family = to_string(profile);
                e.states = m.num_states();
                e.inputs = m.num_inputs();
                e.seed = syn_seed;
                auto it = std::find_if(c.entries.begin(), c.entries.end(),
                                       [&](const CorpusEntry& x) { return x.name == e.name; });
                if (it != c.entries.end()) {
                    *it = e;
                } else {
                    c.entries.push_back(e);
                }
                save_manifest(c, syn_manifest);
            }
        }
    } catch (const DeterminismViolation& e) {
        std::cerr << "determinism violation: " << e.what() << '\n';
        return 3;
    } catch (const LearningFailure& e) {
        std::cerr << "learning failure: " << e.what() << '\n';
        return 2;
    } catch (const InvalidCounterexample& e) {
        std::cerr << "learning failure: " << e.what() << '\n';
        return 2;
    } catch (const NonDeterminismError& e) {
        std::cerr << "learning failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
