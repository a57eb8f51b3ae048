#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "protolearn/mealy.hpp"
#include "protolearn/pta.hpp"
#include "protolearn/sample_set.hpp"

namespace protolearn {

// Throws NonDeterminismError naming the conflicting prefix.
Pta build_pta(const SampleSet& traces);

// Red-blue state merging over a prefix tree. Red nodes are confirmed states;
// blue nodes are children of red nodes that are not red themselves. Nodes
// outside the red set always hang off the automaton as trees, so a merge
// folds one tree into the current automaton.
class StateMerger {
public:
    using NodeId = Pta::NodeId;

    explicit StateMerger(const Pta& pta);

    // Promotion order; the root is always first.
    const std::vector<NodeId>& red() const { return red_; }
    // Ordered by (depth, shortlex access word) of the original tree node.
    std::vector<NodeId> blue() const;
    bool is_red(NodeId n) const { return is_red_[n]; }

    // Redirects the edge into blue to red and folds blue's subtree in. On an
    // output conflict every change is rolled back and false is returned.
    bool try_merge(NodeId red, NodeId blue);
    void promote(NodeId blue);

    // Current transition of n on alphabet()[k]: (target, output).
    std::optional<std::pair<NodeId, Symbol>> transition(NodeId n, std::size_t k) const;
    const std::vector<Symbol>& alphabet() const { return alphabet_; }
    // Access word of n in the original tree.
    const Word& tree_access(NodeId n) const { return access_[n]; }

    // Red nodes as states (named q0, q1, ... in promotion order).
    PartialMealy to_mealy() const;

private:
    struct EdgeUndo {
        NodeId node;
        std::size_t k;
        std::int32_t child;
        Symbol out;
    };
    struct ParentUndo {
        NodeId node;
        std::int32_t parent;
        std::size_t parent_k;
    };

    void rollback(std::size_t edges_mark, std::size_t parents_mark);

    std::vector<Symbol> alphabet_;
    std::vector<std::int32_t> child_;
    std::vector<Symbol> out_;
    std::vector<std::int32_t> parent_;
    std::vector<std::size_t> parent_k_;
    std::vector<std::size_t> rank_;
    std::vector<Word> access_;
    std::vector<NodeId> red_;
    std::vector<bool> is_red_;
    std::vector<EdgeUndo> edge_log_;
    std::vector<ParentUndo> parent_log_;
};

struct MergeEvent {
    Word red;   // tree access word of the red node
    Word blue;  // tree access word of the blue node
    bool accepted{false};
};

// RPNI for Mealy machines: take the first blue node, try the red nodes in
// promotion order, keep the first compatible merge, otherwise promote it.
// The result is deterministic, consistent with every trace, and may be
// partial. Declares every input of the sample's alphabet.
PartialMealy rpni(const SampleSet& traces, std::vector<MergeEvent>* log = nullptr);

}  // namespace protolearn
