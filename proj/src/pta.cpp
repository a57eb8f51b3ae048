#include "protolearn/pta.hpp"

#include <algorithm>
#include <utility>

#include "protolearn/errors.hpp"

namespace protolearn {

Pta::Pta(std::vector<Symbol> alphabet) : alphabet_(std::move(alphabet)) {
    std::sort(alphabet_.begin(), alphabet_.end(), by_name{});
    alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
    if (alphabet_.size() > 255) {
        throw InvalidArgument("alphabet too large for prefix tree");
    }
    std::uint32_t max_id = 0;
    for (auto s : alphabet_) {
        max_id = std::max(max_id, s.id());
    }
    input_index_.assign(alphabet_.empty() ? 0 : max_id + 1, -1);
    for (std::size_t k = 0; k < alphabet_.size(); ++k) {
        input_index_[alphabet_[k].id()] = static_cast<std::int32_t>(k);
    }
    child_.assign(alphabet_.size(), kNone);
    out_.assign(alphabet_.size(), Symbol{});
    parent_.push_back(kNone);
    parent_input_.push_back(0);
    depth_.push_back(0);
}

std::optional<std::size_t> Pta::input_index(Symbol i) const {
    if (i.id() >= input_index_.size() || input_index_[i.id()] < 0) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(input_index_[i.id()]);
}

std::size_t Pta::insert(const Trace& t) {
    const std::size_t ni = alphabet_.size();
    std::vector<std::size_t> idx(t.size());
    NodeId n = kRoot;
    std::size_t k = 0;
    // validate first so a conflicting trace leaves the tree untouched
    for (; k < t.size(); ++k) {
        auto i = input_index(t.inputs()[k]);
        if (!i) {
            throw InvalidArgument("input '" + t.inputs()[k].name() + "' is not in the alphabet");
        }
        idx[k] = *i;
        const auto c = child_[n * ni + *i];
        if (c == kNone) {
            break;
        }
        if (out_[n * ni + *i] != t.outputs()[k]) {
            Word prefix(t.inputs().begin(), t.inputs().begin() + static_cast<std::ptrdiff_t>(k + 1));
            throw NonDeterminismError("conflicting outputs after prefix [" + to_string(prefix) + "]: '" +
                                      out_[n * ni + *i].name() + "' vs '" + t.outputs()[k].name() + "'");
        }
        n = static_cast<NodeId>(c);
    }
    for (std::size_t j = k; j < t.size(); ++j) {
        auto i = input_index(t.inputs()[j]);
        if (!i) {
            throw InvalidArgument("input '" + t.inputs()[j].name() + "' is not in the alphabet");
        }
        idx[j] = *i;
    }
    const std::size_t before = size();
    for (; k < t.size(); ++k) {
        const auto fresh = static_cast<NodeId>(size());
        child_[n * ni + idx[k]] = static_cast<std::int32_t>(fresh);
        out_[n * ni + idx[k]] = t.outputs()[k];
        child_.resize(child_.size() + ni, kNone);
        out_.resize(out_.size() + ni, Symbol{});
        parent_.push_back(static_cast<std::int32_t>(n));
        parent_input_.push_back(static_cast<std::uint8_t>(idx[k]));
        depth_.push_back(depth_[n] + 1);
        n = fresh;
    }
    return size() - before;
}

std::optional<Word> Pta::lookup(const Word& inputs) const {
    Word out;
    out.reserve(inputs.size());
    NodeId n = kRoot;
    for (auto s : inputs) {
        auto i = input_index(s);
        if (!i) {
            return std::nullopt;
        }
        const auto c = child(n, *i);
        if (c == kNone) {
            return std::nullopt;
        }
        out.push_back(output(n, *i));
        n = static_cast<NodeId>(c);
    }
    return out;
}

Word Pta::access(NodeId n) const {
    Word w;
    while (parent_[n] != kNone) {
        w.push_back(alphabet_[parent_input_[n]]);
        n = static_cast<NodeId>(parent_[n]);
    }
    std::reverse(w.begin(), w.end());
    return w;
}

Pta build_pta(std::span<const Trace> traces, std::vector<Symbol> alphabet) {
    for (const auto& t : traces) {
        for (auto s : t.inputs()) {
            if (std::find(alphabet.begin(), alphabet.end(), s) == alphabet.end()) {
                alphabet.push_back(s);
            }
        }
    }
    Pta pta(std::move(alphabet));
    for (const auto& t : traces) {
        pta.insert(t);
    }
    return pta;
}

bool same_tree(const Pta& a, const Pta& b) {
    if (a.size() != b.size() || a.alphabet() != b.alphabet()) {
        return false;
    }
    std::vector<std::pair<Pta::NodeId, Pta::NodeId>> stack{{Pta::kRoot, Pta::kRoot}};
    while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        for (std::size_t k = 0; k < a.num_inputs(); ++k) {
            const auto cx = a.child(x, k);
            const auto cy = b.child(y, k);
            if ((cx == Pta::kNone) != (cy == Pta::kNone)) {
                return false;
            }
            if (cx == Pta::kNone) {
                continue;
            }
            if (a.output(x, k) != b.output(y, k)) {
                return false;
            }
            stack.emplace_back(static_cast<Pta::NodeId>(cx), static_cast<Pta::NodeId>(cy));
        }
    }
    return true;
}

}  // namespace protolearn
