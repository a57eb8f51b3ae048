#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "protolearn/mealy.hpp"

namespace protolearn {

// Prefix tree of input/output traces. Edges are keyed by input and carry the
// observed output; node 0 is the root. Used as the query cache and as the
// starting automaton of RPNI.
class Pta {
public:
    using NodeId = std::uint32_t;
    static constexpr NodeId kRoot = 0;
    static constexpr std::int32_t kNone = -1;

    explicit Pta(std::vector<Symbol> alphabet);

    // Inserts the trace. Throws NonDeterminismError naming the first prefix whose
    // output disagrees with what is stored; the tree is left unchanged then.
    // Returns the number of new nodes.
    std::size_t insert(const Trace& t);

    // Outputs along the full path spelled by inputs, if present.
    std::optional<Word> lookup(const Word& inputs) const;

    std::size_t size() const { return parent_.size(); }
    const std::vector<Symbol>& alphabet() const { return alphabet_; }
    std::size_t num_inputs() const { return alphabet_.size(); }
    std::optional<std::size_t> input_index(Symbol i) const;

    std::int32_t child(NodeId n, std::size_t k) const { return child_[n * alphabet_.size() + k]; }
    Symbol output(NodeId n, std::size_t k) const { return out_[n * alphabet_.size() + k]; }
    std::int32_t parent(NodeId n) const { return parent_[n]; }
    std::size_t depth(NodeId n) const { return depth_[n]; }
    // Input word labelling the root path to n.
    Word access(NodeId n) const;

private:
    std::vector<Symbol> alphabet_;
    std::vector<std::int32_t> input_index_;
    std::vector<std::int32_t> child_;
    std::vector<Symbol> out_;
    std::vector<std::int32_t> parent_;
    std::vector<std::uint8_t> parent_input_;
    std::vector<std::size_t> depth_;
};

Pta build_pta(std::span<const Trace> traces, std::vector<Symbol> alphabet);

// Same labelled tree regardless of node numbering.
bool same_tree(const Pta& a, const Pta& b);

}  // namespace protolearn
