#include "protolearn/rpni.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "protolearn/errors.hpp"

namespace protolearn {

Pta build_pta(const SampleSet& traces) { return build_pta(std::span(traces.traces()), traces.alphabet()); }

StateMerger::StateMerger(const Pta& pta) : alphabet_(pta.alphabet()) {
    const std::size_t n = pta.size();
    const std::size_t ni = alphabet_.size();
    child_.resize(n * ni);
    out_.resize(n * ni);
    parent_.resize(n);
    parent_k_.assign(n, 0);
    access_.resize(n);
    rank_.assign(n, 0);
    for (NodeId v = 0; v < n; ++v) {
        parent_[v] = pta.parent(v);
        for (std::size_t k = 0; k < ni; ++k) {
            child_[v * ni + k] = pta.child(v, k);
            out_[v * ni + k] = pta.output(v, k);
            if (pta.child(v, k) != Pta::kNone) {
                parent_k_[static_cast<std::size_t>(pta.child(v, k))] = k;
            }
        }
    }
    // BFS with name-sorted inputs visits nodes in shortlex order of access words
    std::deque<NodeId> queue{Pta::kRoot};
    std::size_t next_rank = 0;
    while (!queue.empty()) {
        NodeId v = queue.front();
        queue.pop_front();
        rank_[v] = next_rank++;
        for (std::size_t k = 0; k < ni; ++k) {
            if (auto c = pta.child(v, k); c != Pta::kNone) {
                access_[static_cast<std::size_t>(c)] = access_[v];
                access_[static_cast<std::size_t>(c)].push_back(alphabet_[k]);
                queue.push_back(static_cast<NodeId>(c));
            }
        }
    }
    red_.push_back(Pta::kRoot);
    is_red_.assign(n, false);
    is_red_[Pta::kRoot] = true;
}

std::vector<StateMerger::NodeId> StateMerger::blue() const {
    const std::size_t ni = alphabet_.size();
    std::vector<NodeId> out;
    for (NodeId r : red_) {
        for (std::size_t k = 0; k < ni; ++k) {
            const auto c = child_[r * ni + k];
            if (c != Pta::kNone && !is_red_[static_cast<std::size_t>(c)]) {
                out.push_back(static_cast<NodeId>(c));
            }
        }
    }
    std::sort(out.begin(), out.end(), [this](NodeId a, NodeId b) { return rank_[a] < rank_[b]; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void StateMerger::rollback(std::size_t edges_mark, std::size_t parents_mark) {
    const std::size_t ni = alphabet_.size();
    while (edge_log_.size() > edges_mark) {
        const auto& u = edge_log_.back();
        child_[u.node * ni + u.k] = u.child;
        out_[u.node * ni + u.k] = u.out;
        edge_log_.pop_back();
    }
    while (parent_log_.size() > parents_mark) {
        const auto& u = parent_log_.back();
        parent_[u.node] = u.parent;
        parent_k_[u.node] = u.parent_k;
        parent_log_.pop_back();
    }
}

bool StateMerger::try_merge(NodeId red, NodeId blue) {
    if (!is_red_[red] || is_red_[blue] || parent_[blue] == Pta::kNone) {
        throw InvalidArgument("try_merge needs a red node and a blue node");
    }
    const std::size_t ni = alphabet_.size();
    const std::size_t edges_mark = edge_log_.size();
    const std::size_t parents_mark = parent_log_.size();

    const auto p = static_cast<NodeId>(parent_[blue]);
    const std::size_t pk = parent_k_[blue];
    if (!is_red_[p] || child_[p * ni + pk] != static_cast<std::int32_t>(blue)) {
        throw InvalidArgument("node is not on the blue frontier");
    }
    edge_log_.push_back({p, pk, child_[p * ni + pk], out_[p * ni + pk]});
    child_[p * ni + pk] = static_cast<std::int32_t>(red);

    std::vector<std::pair<NodeId, NodeId>> work{{red, blue}};
    while (!work.empty()) {
        auto [x, y] = work.back();
        work.pop_back();
        if (x == y) {
            continue;
        }
        for (std::size_t k = 0; k < ni; ++k) {
            const auto cy = child_[y * ni + k];
            if (cy == Pta::kNone) {
                continue;
            }
            const auto cx = child_[x * ni + k];
            if (cx == Pta::kNone) {
                edge_log_.push_back({x, k, cx, out_[x * ni + k]});
                child_[x * ni + k] = cy;
                out_[x * ni + k] = out_[y * ni + k];
                const auto adopted = static_cast<NodeId>(cy);
                parent_log_.push_back({adopted, parent_[adopted], parent_k_[adopted]});
                parent_[adopted] = static_cast<std::int32_t>(x);
                parent_k_[adopted] = k;
                continue;
            }
            if (out_[x * ni + k] != out_[y * ni + k]) {
                rollback(edges_mark, parents_mark);
                return false;
            }
            work.emplace_back(static_cast<NodeId>(cx), static_cast<NodeId>(cy));
        }
    }
    // committed: the undo entries are no longer needed
    edge_log_.resize(edges_mark);
    parent_log_.resize(parents_mark);
    return true;
}

void StateMerger::promote(NodeId blue) {
    if (is_red_[blue]) {
        return;
    }
    is_red_[blue] = true;
    red_.push_back(blue);
}

std::optional<std::pair<StateMerger::NodeId, Symbol>> StateMerger::transition(NodeId n, std::size_t k) const {
    const std::size_t ni = alphabet_.size();
    const auto c = child_[n * ni + k];
    if (c == Pta::kNone) {
        return std::nullopt;
    }
    return std::make_pair(static_cast<NodeId>(c), out_[n * ni + k]);
}

PartialMealy StateMerger::to_mealy() const {
    const std::size_t ni = alphabet_.size();
    MealyBuilder b;
    std::vector<std::int32_t> state_of(is_red_.size(), -1);
    for (std::size_t i = 0; i < red_.size(); ++i) {
        state_of[red_[i]] = static_cast<std::int32_t>(b.add_state("q" + std::to_string(i)));
    }
    for (auto s : alphabet_) {
        b.declare_input(s);
    }
    b.set_initial(0);
    for (NodeId r : red_) {
        for (std::size_t k = 0; k < ni; ++k) {
            const auto c = child_[r * ni + k];
            if (c == Pta::kNone) {
                continue;
            }
            const auto target = state_of[static_cast<std::size_t>(c)];
            if (target < 0) {
                throw InvalidArgument("blue nodes remain; merging is unfinished");
            }
            b.add_transition(static_cast<StateId>(state_of[r]), alphabet_[k], out_[r * ni + k],
                             static_cast<StateId>(target));
        }
    }
    return b.build_partial();
}

PartialMealy rpni(const SampleSet& traces, std::vector<MergeEvent>* log) {
    StateMerger merger(build_pta(traces));
    while (true) {
        const auto blue = merger.blue();
        if (blue.empty()) {
            break;
        }
        const auto b = blue.front();
        bool merged = false;
        for (auto r : merger.red()) {
            merged = merger.try_merge(r, b);
            if (log) {
                log->push_back({merger.tree_access(r), merger.tree_access(b), merged});
            }
            if (merged) {
                break;
            }
        }
        if (!merged) {
            merger.promote(b);
        }
    }
    return merger.to_mealy();
}

}  // namespace protolearn
