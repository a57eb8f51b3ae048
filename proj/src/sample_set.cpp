#include "protolearn/sample_set.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "protolearn/errors.hpp"

namespace protolearn {

void SampleConfig::validate() const {
    if (n_min < 1 || n_min > n_max) {
        throw InvalidArgument("sample bounds must satisfy 1 <= n_min <= n_max (got n_min=" + std::to_string(n_min) +
                              ", n_max=" + std::to_string(n_max) + ")");
    }
}

SampleSet::SampleSet(std::vector<Trace> traces, SampleConfig config, std::vector<Symbol> alphabet)
    : traces_(std::move(traces)), config_(std::move(config)), alphabet_(std::move(alphabet)) {
    for (const auto& t : traces_) {
        for (auto s : t.inputs()) {
            if (std::find(alphabet_.begin(), alphabet_.end(), s) == alphabet_.end()) {
                alphabet_.push_back(s);
            }
        }
    }
    std::sort(alphabet_.begin(), alphabet_.end(), by_name{});
    alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
}

std::size_t SampleSet::total_steps() const {
    std::size_t n = 0;
    for (const auto& t : traces_) {
        n += t.size();
    }
    return n;
}

double SampleSet::mean_length() const {
    return traces_.empty() ? 0.0 : static_cast<double>(total_steps()) / static_cast<double>(traces_.size());
}

namespace {

void check_symbol(const std::string& name, bool is_input) {
    if (name.empty() || name == "-" ||
        std::any_of(name.begin(), name.end(), [](unsigned char c) { return std::isspace(c); }) ||
        (is_input && name.find('/') != std::string::npos)) {
        throw InvalidArgument("symbol '" + name + "' cannot be written to a trace file");
    }
}

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> parts;
    std::string p;
    while (is >> p) {
        parts.push_back(p);
    }
    return parts;
}

}  // namespace

std::string serialize_traces(const SampleSet& s) {
    std::ostringstream os;
    os << "# protolearn-traces v1\n# inputs:";
    for (auto i : s.alphabet()) {
        check_symbol(i.name(), true);
        os << ' ' << i.name();
    }
    const auto& c = s.config();
    os << "\n# config: label=" << (c.label.empty() ? "-" : c.label) << " n_data=" << c.n_data
       << " n_min=" << c.n_min << " n_max=" << c.n_max << " seed=" << c.seed << "\n";
    for (const auto& t : s.traces()) {
        if (t.empty()) {
            os << "-\n";
            continue;
        }
        for (std::size_t k = 0; k < t.size(); ++k) {
            check_symbol(t.inputs()[k].name(), true);
            check_symbol(t.outputs()[k].name(), false);
            os << (k ? " " : "") << t.inputs()[k].name() << '/' << t.outputs()[k].name();
        }
        os << '\n';
    }
    return os.str();
}

SampleSet parse_traces(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<Symbol> alphabet;
    SampleConfig config;
    std::vector<Trace> traces;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.rfind("#", 0) == 0) {
            auto parts = split_ws(line.substr(1));
            if (parts.empty()) {
                continue;
            }
            if (parts[0] == "inputs:") {
                for (std::size_t k = 1; k < parts.size(); ++k) {
                    alphabet.push_back(Symbol::of(parts[k]));
                }
            } else if (parts[0] == "config:") {
                for (std::size_t k = 1; k < parts.size(); ++k) {
                    const auto eq = parts[k].find('=');
                    if (eq == std::string::npos) {
                        throw ParseError(lineno, "malformed config entry '" + parts[k] + "'");
                    }
                    const std::string key = parts[k].substr(0, eq);
                    const std::string val = parts[k].substr(eq + 1);
                    try {
                        if (key == "label") {
                            config.label = val == "-" ? "" : val;
                        } else if (key == "n_data") {
                            config.n_data = std::stoull(val);
                        } else if (key == "n_min") {
                            config.n_min = std::stoull(val);
                        } else if (key == "n_max") {
                            config.n_max = std::stoull(val);
                        } else if (key == "seed") {
                            config.seed = std::stoull(val);
                        }
                    } catch (const std::logic_error&) {
                        throw ParseError(lineno, "bad value for '" + key + "'");
                    }
                }
            }
            continue;
        }
        auto parts = split_ws(line);
        if (parts.empty()) {
            continue;
        }
        Trace t;
        if (parts.size() == 1 && parts[0] == "-") {
            traces.push_back(t);
            continue;
        }
        for (const auto& p : parts) {
            const auto slash = p.find('/');
            if (slash == std::string::npos || slash == 0 || slash + 1 == p.size()) {
                throw ParseError(lineno, "expected input/output pair, got '" + p + "'");
            }
            t.push_back(Symbol::of(p.substr(0, slash)), Symbol::of(p.substr(slash + 1)));
        }
        traces.push_back(std::move(t));
    }
    return SampleSet(std::move(traces), std::move(config), std::move(alphabet));
}

SampleSet load_traces(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidArgument("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_traces(ss.str());
}

void save_traces(const SampleSet& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidArgument("cannot write '" + path + "'");
    }
    out << serialize_traces(s);
}

}  // namespace protolearn
