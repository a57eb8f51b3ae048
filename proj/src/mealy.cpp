#include "protolearn/mealy.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "protolearn/errors.hpp"

namespace protolearn {

Trace::Trace(Word inputs, Word outputs) : inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
    if (inputs_.size() != outputs_.size()) {
        throw InvalidArgument("trace input and output sequences differ in length");
    }
}

std::string Trace::str() const {
    std::string s;
    for (std::size_t k = 0; k < size(); ++k) {
        if (k > 0) {
            s += ' ';
        }
        s += inputs_[k].name();
        s += '/';
        s += outputs_[k].name();
    }
    return s;
}

bool MealyTable::is_complete() const {
    return std::none_of(next_.begin(), next_.end(), [](std::int32_t t) { return t == kUndefined; });
}

std::size_t MealyTable::num_defined_transitions() const {
    return static_cast<std::size_t>(
        std::count_if(next_.begin(), next_.end(), [](std::int32_t t) { return t != kUndefined; }));
}

std::vector<Symbol> MealyTable::outputs() const {
    std::vector<Symbol> out;
    for (std::size_t k = 0; k < next_.size(); ++k) {
        if (next_[k] != kUndefined && std::find(out.begin(), out.end(), out_[k]) == out.end()) {
            out.push_back(out_[k]);
        }
    }
    std::sort(out.begin(), out.end(), by_name{});
    return out;
}

MealyMachine PartialMealy::sink_completed() const {
    MealyMachine m;
    static_cast<MealyTable&>(m) = static_cast<const MealyTable&>(*this);
    if (is_complete()) {
        return m;
    }
    const auto sink = static_cast<std::int32_t>(num_states());
    const Symbol sink_out = Symbol::of(kSinkOutput);
    std::string sink_name = "sink";
    while (std::find(m.state_names_.begin(), m.state_names_.end(), sink_name) != m.state_names_.end()) {
        sink_name += "_";
    }
    m.state_names_.push_back(sink_name);
    m.next_.resize(m.next_.size() + num_inputs(), sink);
    m.out_.resize(m.out_.size() + num_inputs(), sink_out);
    for (std::size_t k = 0; k < m.next_.size(); ++k) {
        if (m.next_[k] == kUndefined) {
            m.next_[k] = sink;
            m.out_[k] = sink_out;
        }
    }
    return m;
}

PartialMealy MealyMachine::as_partial() const {
    PartialMealy p;
    static_cast<MealyTable&>(p) = static_cast<const MealyTable&>(*this);
    return p;
}

MealyBuilder& MealyBuilder::declare_input(Symbol i) {
    if (std::find(declared_inputs_.begin(), declared_inputs_.end(), i) == declared_inputs_.end()) {
        declared_inputs_.push_back(i);
    }
    return *this;
}

StateId MealyBuilder::add_state(std::string name) {
    if (std::find(names_.begin(), names_.end(), name) != names_.end()) {
        throw InvalidArgument("duplicate state '" + name + "'");
    }
    names_.push_back(std::move(name));
    return static_cast<StateId>(names_.size() - 1);
}

StateId MealyBuilder::state(const std::string& name) {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it != names_.end()) {
        return static_cast<StateId>(it - names_.begin());
    }
    return add_state(name);
}

MealyBuilder& MealyBuilder::set_initial(StateId q) {
    if (q >= names_.size()) {
        throw InvalidArgument("initial state out of range");
    }
    initial_ = q;
    return *this;
}

MealyBuilder& MealyBuilder::add_transition(StateId from, Symbol input, Symbol output, StateId to) {
    if (from >= names_.size() || to >= names_.size()) {
        throw InvalidArgument("transition references unknown state");
    }
    for (const auto& e : edges_) {
        if (e.from == from && e.input == input) {
            throw NonDeterminismError("state '" + names_[from] + "' has more than one transition for input '" +
                                      input.name() + "'");
        }
    }
    declare_input(input);
    edges_.push_back({from, input, output, to});
    return *this;
}

void MealyBuilder::fill(MealyTable& t) const {
    if (names_.empty()) {
        throw InvalidArgument("machine has no states");
    }
    if (!initial_) {
        throw InvalidArgument("machine has no initial state");
    }
    t.state_names_ = names_;
    t.initial_ = *initial_;
    t.inputs_ = declared_inputs_;
    std::sort(t.inputs_.begin(), t.inputs_.end(), by_name{});
    std::uint32_t max_id = 0;
    for (auto i : t.inputs_) {
        max_id = std::max(max_id, i.id());
    }
    t.input_index_.assign(t.inputs_.empty() ? 0 : max_id + 1, -1);
    for (std::size_t k = 0; k < t.inputs_.size(); ++k) {
        t.input_index_[t.inputs_[k].id()] = static_cast<std::int32_t>(k);
    }
    t.next_.assign(names_.size() * t.inputs_.size(), MealyTable::kUndefined);
    t.out_.assign(names_.size() * t.inputs_.size(), Symbol{});
    for (const auto& e : edges_) {
        const auto slot = e.from * t.inputs_.size() + *t.input_index(e.input);
        t.next_[slot] = static_cast<std::int32_t>(e.to);
        t.out_[slot] = e.output;
    }
}

PartialMealy MealyBuilder::build_partial() const {
    PartialMealy p;
    fill(p);
    return p;
}

MealyMachine MealyBuilder::build() const {
    MealyMachine m;
    fill(m);
    for (StateId q = 0; q < m.num_states(); ++q) {
        for (std::size_t k = 0; k < m.num_inputs(); ++k) {
            if (!m.defined(q, k)) {
                throw InvalidArgument("machine is not input-enabled: state '" + m.state_name(q) +
                                      "' has no transition for input '" + m.inputs()[k].name() + "'");
            }
        }
    }
    return m;
}

std::pair<StateId, Symbol> step(const MealyTable& m, StateId q, Symbol i) {
    if (q >= m.num_states()) {
        throw InvalidArgument("unknown state " + std::to_string(q));
    }
    auto k = m.input_index(i);
    if (!k) {
        throw InvalidArgument("unknown input symbol '" + i.name() + "'");
    }
    if (!m.defined(q, *k)) {
        throw InvalidArgument("undefined transition from '" + m.state_name(q) + "' on '" + i.name() + "'");
    }
    return {m.next(q, *k), m.output(q, *k)};
}

Word run(const MealyTable& m, const Word& inputs) {
    Word out;
    out.reserve(inputs.size());
    StateId q = m.initial();
    for (auto i : inputs) {
        auto [to, o] = step(m, q, i);
        out.push_back(o);
        q = to;
    }
    return out;
}

Trace run_trace(const MealyTable& m, const Word& inputs) { return Trace(inputs, run(m, inputs)); }

std::optional<StateId> reach(const MealyTable& m, const Word& inputs) {
    StateId q = m.initial();
    for (auto i : inputs) {
        auto k = m.input_index(i);
        if (!k || !m.defined(q, *k)) {
            return std::nullopt;
        }
        q = m.next(q, *k);
    }
    return q;
}

std::vector<StateId> AccessMap::ordered_states() const {
    std::vector<StateId> order(seqs_.size());
    std::iota(order.begin(), order.end(), StateId{0});
    std::sort(order.begin(), order.end(),
              [this](StateId a, StateId b) { return shortlex_less(seqs_[a], seqs_[b]); });
    return order;
}

AccessMap access_sequences(const MealyTable& m) {
    std::vector<std::optional<Word>> acc(m.num_states());
    std::deque<StateId> queue{m.initial()};
    acc[m.initial()] = Word{};
    while (!queue.empty()) {
        StateId q = queue.front();
        queue.pop_front();
        // inputs_ is name-sorted, so BFS discovery order is shortlex order
        for (std::size_t k = 0; k < m.num_inputs(); ++k) {
            if (!m.defined(q, k)) {
                continue;
            }
            StateId t = m.next(q, k);
            if (!acc[t]) {
                Word w = *acc[q];
                w.push_back(m.inputs()[k]);
                acc[t] = std::move(w);
                queue.push_back(t);
            }
        }
    }
    std::vector<Word> seqs;
    std::string unreachable;
    for (StateId q = 0; q < m.num_states(); ++q) {
        if (!acc[q]) {
            unreachable += (unreachable.empty() ? "" : ", ") + m.state_name(q);
            continue;
        }
        seqs.push_back(std::move(*acc[q]));
    }
    if (!unreachable.empty()) {
        throw UnreachableStateError("unreachable states: " + unreachable);
    }
    return AccessMap(std::move(seqs));
}

namespace {

Word run_from(const MealyTable& m, StateId q, const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto i : w) {
        auto [to, o] = step(m, q, i);
        out.push_back(o);
        q = to;
    }
    return out;
}

// Distinguishing words for every state pair derived from Moore refinement
// levels: level[p][q] = length of the shortest separating word minus one.
std::vector<Word> pairwise_splitting_suffixes(const MealyMachine& m) {
    const std::size_t n = m.num_states();
    const std::size_t ni = m.num_inputs();
    constexpr std::size_t kSame = static_cast<std::size_t>(-1);
    std::vector<std::size_t> level(n * n, kSame);
    auto lv = [&](StateId p, StateId q) -> std::size_t& { return level[p * n + q]; };

    for (StateId p = 0; p < n; ++p) {
        for (StateId q = p + 1; q < n; ++q) {
            for (std::size_t k = 0; k < ni; ++k) {
                if (m.output(p, k) != m.output(q, k)) {
                    lv(p, q) = lv(q, p) = 0;
                    break;
                }
            }
        }
    }
    for (std::size_t depth = 1; depth < n; ++depth) {
        bool changed = false;
        for (StateId p = 0; p < n; ++p) {
            for (StateId q = p + 1; q < n; ++q) {
                if (lv(p, q) != kSame) {
                    continue;
                }
                for (std::size_t k = 0; k < ni; ++k) {
                    StateId a = m.next(p, k);
                    StateId b = m.next(q, k);
                    if (a != b && lv(a, b) != kSame && lv(a, b) < depth) {
                        lv(p, q) = lv(q, p) = depth;
                        changed = true;
                        break;
                    }
                }
            }
        }
        if (!changed) {
            break;
        }
    }

    std::vector<Word> suffixes;
    for (StateId p = 0; p < n; ++p) {
        for (StateId q = p + 1; q < n; ++q) {
            if (lv(p, q) == kSame) {
                throw NotMinimalError("states '" + m.state_name(p) + "' and '" + m.state_name(q) +
                                      "' are indistinguishable");
            }
            Word w;
            StateId a = p;
            StateId b = q;
            while (true) {
                const std::size_t target = lv(a, b);
                if (target == 0) {
                    for (std::size_t k = 0; k < ni; ++k) {
                        if (m.output(a, k) != m.output(b, k)) {
                            w.push_back(m.inputs()[k]);
                            break;
                        }
                    }
                    break;
                }
                for (std::size_t k = 0; k < ni; ++k) {
                    StateId na = m.next(a, k);
                    StateId nb = m.next(b, k);
                    if (m.output(a, k) == m.output(b, k) && na != nb && lv(na, nb) == target - 1) {
                        w.push_back(m.inputs()[k]);
                        a = na;
                        b = nb;
                        break;
                    }
                }
            }
            suffixes.push_back(std::move(w));
        }
    }
    return suffixes;
}

}  // namespace

bool distinguishes_all_pairs(const MealyMachine& m, const std::vector<Word>& suffixes) {
    const std::size_t n = m.num_states();
    std::vector<std::vector<Word>> responses(n);
    for (StateId q = 0; q < n; ++q) {
        for (const auto& w : suffixes) {
            responses[q].push_back(run_from(m, q, w));
        }
    }
    for (StateId a = 0; a < n; ++a) {
        for (StateId b = a + 1; b < n; ++b) {
            if (responses[a] == responses[b]) {
                return false;
            }
        }
    }
    return true;
}

CharacterizationSet characterization_set(const MealyMachine& m) {
    auto raw = pairwise_splitting_suffixes(m);
    std::sort(raw.begin(), raw.end(), [](const Word& a, const Word& b) {
        if (a.size() != b.size()) {
            return a.size() > b.size();
        }
        return shortlex_less(a, b);
    });
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());

    std::vector<Word> kept = raw;
    for (const auto& candidate : raw) {
        std::vector<Word> trial;
        trial.reserve(kept.size());
        for (const auto& w : kept) {
            if (w != candidate) {
                trial.push_back(w);
            }
        }
        if (distinguishes_all_pairs(m, trial)) {
            kept = std::move(trial);
        }
    }
    std::sort(kept.begin(), kept.end(), shortlex_less);
    return CharacterizationSet{std::move(kept)};
}

EquivalenceResult equivalent(const MealyTable& a, const MealyTable& b) {
    EquivalenceResult result;
    if (a.inputs() != b.inputs()) {
        result.alphabet_mismatch = true;
        return result;
    }
    const std::size_t ni = a.num_inputs();
    const std::size_t nb = b.num_states() + 1;
    // state index num_states() stands for the implicit sink of a partial machine
    const StateId sink_a = static_cast<StateId>(a.num_states());
    const StateId sink_b = static_cast<StateId>(b.num_states());
    auto key = [&](StateId p, StateId q) { return static_cast<std::size_t>(p) * nb + q; };

    struct Parent {
        std::size_t from;
        std::size_t input;
    };
    std::vector<std::optional<Parent>> parent((a.num_states() + 1) * nb);
    std::vector<bool> visited((a.num_states() + 1) * nb, false);
    std::deque<std::pair<StateId, StateId>> queue;
    queue.emplace_back(a.initial(), b.initial());
    visited[key(a.initial(), b.initial())] = true;

    auto witness_to = [&](std::size_t node, std::size_t last_input) {
        Word w{a.inputs()[last_input]};
        while (parent[node]) {
            w.push_back(a.inputs()[parent[node]->input]);
            node = parent[node]->from;
        }
        std::reverse(w.begin(), w.end());
        return w;
    };

    while (!queue.empty()) {
        auto [p, q] = queue.front();
        queue.pop_front();
        if (p == sink_a && q == sink_b) {
            continue;
        }
        for (std::size_t k = 0; k < ni; ++k) {
            const bool da = p != sink_a && a.defined(p, k);
            const bool db = q != sink_b && b.defined(q, k);
            if (da != db || (da && a.output(p, k) != b.output(q, k))) {
                result.witness = witness_to(key(p, q), k);
                return result;
            }
            StateId np = da ? a.next(p, k) : sink_a;
            StateId nq = db ? b.next(q, k) : sink_b;
            if (!visited[key(np, nq)]) {
                visited[key(np, nq)] = true;
                parent[key(np, nq)] = Parent{key(p, q), k};
                queue.emplace_back(np, nq);
            }
        }
    }
    result.equal = true;
    return result;
}

bool same_minimal_model(const MealyTable& learned, const MealyMachine& reference) {
    if (learned.num_states() != reference.num_states()) {
        return false;
    }
    return equivalent(learned, reference).equal;
}

}  // namespace protolearn
