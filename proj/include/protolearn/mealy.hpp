#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "protolearn/symbol.hpp"

namespace protolearn {

using StateId = std::uint32_t;

// Reserved output of the absorbing sink used to complete partial machines.
inline constexpr std::string_view kSinkOutput = "⊥sink";

class Trace {
public:
    Trace() = default;
    Trace(Word inputs, Word outputs);

    void push_back(Symbol input, Symbol output) {
        inputs_.push_back(input);
        outputs_.push_back(output);
    }

    std::size_t size() const { return inputs_.size(); }
    bool empty() const { return inputs_.empty(); }
    const Word& inputs() const { return inputs_; }
    const Word& outputs() const { return outputs_; }

    // "i1/o1 i1/o2"
    std::string str() const;

    friend bool operator==(const Trace&, const Trace&) = default;

private:
    Word inputs_;
    Word outputs_;
};

// Transition/output tables shared by complete and partial machines. Inputs are
// kept sorted by name; transitions are addressed by (state, input index).
class MealyTable {
public:
    static constexpr std::int32_t kUndefined = -1;

    std::size_t num_states() const { return state_names_.size(); }
    std::size_t num_inputs() const { return inputs_.size(); }
    StateId initial() const { return initial_; }
    const std::vector<Symbol>& inputs() const { return inputs_; }
    const std::string& state_name(StateId q) const { return state_names_.at(q); }
    const std::vector<std::string>& state_names() const { return state_names_; }

    std::optional<std::size_t> input_index(Symbol i) const {
        if (i.id() >= input_index_.size() || input_index_[i.id()] < 0) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(input_index_[i.id()]);
    }

    bool defined(StateId q, std::size_t k) const { return next_[q * inputs_.size() + k] != kUndefined; }
    // Only meaningful when defined(q, k).
    StateId next(StateId q, std::size_t k) const { return static_cast<StateId>(next_[q * inputs_.size() + k]); }
    Symbol output(StateId q, std::size_t k) const { return out_[q * inputs_.size() + k]; }

    bool is_complete() const;
    std::size_t num_defined_transitions() const;

    // Distinct outputs, sorted by name.
    std::vector<Symbol> outputs() const;

protected:
    MealyTable() = default;

    friend class MealyBuilder;
    friend class PartialMealy;
    friend class MealyMachine;

    std::vector<std::string> state_names_;
    StateId initial_{0};
    std::vector<Symbol> inputs_;
    std::vector<std::int32_t> input_index_;
    std::vector<std::int32_t> next_;
    std::vector<Symbol> out_;
};

class MealyMachine;

// Deterministic, possibly not input-enabled machine (the shape RPNI produces).
class PartialMealy : public MealyTable {
public:
    PartialMealy() = default;

    // Adds an absorbing sink for every undefined (state, input), emitting
    // kSinkOutput. Already complete machines are returned unchanged.
    MealyMachine sink_completed() const;
};

// Complete deterministic Mealy machine. Immutable once built.
class MealyMachine : public MealyTable {
public:
    MealyMachine() = default;

    PartialMealy as_partial() const;
};

class MealyBuilder {
public:
    MealyBuilder() = default;

    // Declares an input even if no transition uses it yet.
    MealyBuilder& declare_input(Symbol i);
    StateId add_state(std::string name);
    // Returns the existing id when the name is already known.
    StateId state(const std::string& name);
    MealyBuilder& set_initial(StateId q);
    // Throws NonDeterminismError when (from, input) is already mapped.
    MealyBuilder& add_transition(StateId from, Symbol input, Symbol output, StateId to);

    std::size_t num_states() const { return names_.size(); }

    PartialMealy build_partial() const;
    // Throws InvalidArgument naming the first undefined (state, input).
    MealyMachine build() const;

private:
    struct Edge {
        StateId from;
        Symbol input;
        Symbol output;
        StateId to;
    };

    void fill(MealyTable& t) const;

    std::vector<std::string> names_;
    std::vector<Symbol> declared_inputs_;
    std::vector<Edge> edges_;
    std::optional<StateId> initial_;
};

// Single transition: (delta(q, i), lambda(q, i)).
std::pair<StateId, Symbol> step(const MealyTable& m, StateId q, Symbol i);

// lambda*(q0, word). Throws InvalidArgument on unknown symbols or, for partial
// machines, on undefined transitions.
Word run(const MealyTable& m, const Word& inputs);
Trace run_trace(const MealyTable& m, const Word& inputs);

// delta*(q0, word); nullopt when the word leaves the defined domain.
std::optional<StateId> reach(const MealyTable& m, const Word& inputs);

class AccessMap {
public:
    explicit AccessMap(std::vector<Word> seqs) : seqs_(std::move(seqs)) {}

    std::size_t size() const { return seqs_.size(); }
    const Word& operator[](StateId q) const { return seqs_.at(q); }
    const std::vector<Word>& sequences() const { return seqs_; }

    // States ordered by shortlex order of their access sequences.
    std::vector<StateId> ordered_states() const;

private:
    std::vector<Word> seqs_;
};

// Shortest access sequences (BFS, inputs expanded by name). Throws
// UnreachableStateError listing unreachable states.
AccessMap access_sequences(const MealyTable& m);

struct CharacterizationSet {
    std::vector<Word> suffixes;

    bool empty() const { return suffixes.empty(); }
    std::size_t size() const { return suffixes.size(); }
};

// Moore-style refinement yields one splitting suffix per state pair; the set is
// then pruned greedily (longest first, lexicographic tiebreak). Throws
// NotMinimalError naming an indistinguishable pair.
CharacterizationSet characterization_set(const MealyMachine& m);

// Whether suffixes separate every pair of distinct states.
bool distinguishes_all_pairs(const MealyMachine& m, const std::vector<Word>& suffixes);

struct EquivalenceResult {
    bool equal{false};
    bool alphabet_mismatch{false};
    // Shortest (then lexicographically smallest) input word with differing
    // outputs; empty on equality or alphabet mismatch.
    Word witness;

    explicit operator bool() const { return equal; }
};

// Trace equivalence by product-machine BFS. Partial machines behave as if
// sink-completed: an undefined transition differs from any defined one.
EquivalenceResult equivalent(const MealyTable& a, const MealyTable& b);

inline EquivalenceResult isomorphic(const MealyMachine& a, const MealyMachine& b) { return equivalent(a, b); }

// Equivalent to a minimal reference and of the same size (no redundant states).
bool same_minimal_model(const MealyTable& learned, const MealyMachine& reference);

}  // namespace protolearn
