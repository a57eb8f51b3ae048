#pragma once
// Test-only generators and brute-force oracles. Nothing here calls the library's
// algorithms; results are recomputed from the raw transition tables.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "protolearn/mealy.hpp"
#include "protolearn/sample_set.hpp"

namespace testsupport {

using namespace protolearn;

// Plain table view: next[q][k], out[q][k] as output names.
struct Table {
    std::size_t nq{0};
    std::vector<std::string> inputs;
    std::vector<std::vector<std::size_t>> next;
    std::vector<std::vector<std::string>> out;
};

inline MealyMachine to_mealy(const Table& t) {
    MealyBuilder b;
    for (std::size_t q = 0; q < t.nq; ++q) {
        b.add_state("q" + std::to_string(q));
    }
    b.set_initial(0);
    for (const auto& i : t.inputs) {
        b.declare_input(Symbol::of(i));
    }
    for (std::size_t q = 0; q < t.nq; ++q) {
        for (std::size_t k = 0; k < t.inputs.size(); ++k) {
            b.add_transition(static_cast<StateId>(q), Symbol::of(t.inputs[k]), Symbol::of(t.out[q][k]),
                             static_cast<StateId>(t.next[q][k]));
        }
    }
    return b.build();
}

// Reads a machine back into a Table keyed by the input names.
inline Table to_table(const MealyMachine& m) {
    Table t;
    t.nq = m.num_states();
    for (auto i : m.inputs()) {
        t.inputs.push_back(i.name());
    }
    t.next.assign(t.nq, std::vector<std::size_t>(t.inputs.size()));
    t.out.assign(t.nq, std::vector<std::string>(t.inputs.size()));
    for (StateId q = 0; q < t.nq; ++q) {
        for (std::size_t k = 0; k < t.inputs.size(); ++k) {
            t.next[q][k] = m.next(q, k);
            t.out[q][k] = m.output(q, k).name();
        }
    }
    return t;
}

// Random complete machine; every state is reachable from q0 through a random
// spanning tree. Inputs are named a, b, ... so the library's name order equals
// the index order.
inline Table random_table(std::mt19937_64& g, std::size_t nq, std::size_t ni, std::size_t no) {
    Table t;
    t.nq = nq;
    for (std::size_t k = 0; k < ni; ++k) {
        t.inputs.push_back(std::string(1, static_cast<char>('a' + k)));
    }
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(g() % n); };
    t.next.assign(nq, std::vector<std::size_t>(ni));
    t.out.assign(nq, std::vector<std::string>(ni));
    std::vector<std::vector<bool>> fixed(nq, std::vector<bool>(ni, false));
    for (std::size_t j = 1; j < nq; ++j) {
        for (;;) {
            const std::size_t p = pick(j);
            const std::size_t k = pick(ni);
            if (!fixed[p][k]) {
                fixed[p][k] = true;
                t.next[p][k] = j;
                break;
            }
            if (ni == 1 && fixed[p][k]) {
                // single input: the chain q0 -> q1 -> ... is forced
                t.next[j - 1][0] = j;
                fixed[j - 1][0] = true;
                break;
            }
        }
    }
    for (std::size_t q = 0; q < nq; ++q) {
        for (std::size_t k = 0; k < ni; ++k) {
            if (!fixed[q][k]) {
                t.next[q][k] = pick(nq);
            }
            t.out[q][k] = "o" + std::to_string(pick(no));
        }
    }
    return t;
}

// Shortest word separating p and r, by BFS on the pair graph; nullopt when
// the states are equivalent.
inline std::optional<std::vector<std::size_t>> separate(const Table& t, std::size_t p, std::size_t r) {
    using Pair = std::pair<std::size_t, std::size_t>;
    std::map<Pair, std::pair<Pair, std::size_t>> parent;  // pair -> (previous pair, input)
    std::vector<Pair> frontier{{p, r}};
    parent[{p, r}] = {{p, r}, SIZE_MAX};
    for (std::size_t head = 0; head < frontier.size(); ++head) {
        const Pair cur = frontier[head];
        for (std::size_t k = 0; k < t.inputs.size(); ++k) {
            if (t.out[cur.first][k] != t.out[cur.second][k]) {
                std::vector<std::size_t> word{k};
                for (Pair x = cur; parent[x].second != SIZE_MAX; x = parent[x].first) {
                    word.push_back(parent[x].second);
                }
                std::reverse(word.begin(), word.end());
                return word;
            }
            const Pair nxt{t.next[cur.first][k], t.next[cur.second][k]};
            if (!parent.count(nxt)) {
                parent[nxt] = {cur, k};
                frontier.push_back(nxt);
            }
        }
    }
    return std::nullopt;
}

inline bool is_minimal(const Table& t) {
    for (std::size_t p = 0; p < t.nq; ++p) {
        for (std::size_t r = p + 1; r < t.nq; ++r) {
            if (!separate(t, p, r)) {
                return false;
            }
        }
    }
    return true;
}

inline Table random_minimal_table(std::mt19937_64& g, std::size_t nq, std::size_t ni, std::size_t no) {
    for (;;) {
        Table t = random_table(g, nq, ni, no);
        if (is_minimal(t)) {
            return t;
        }
    }
}

inline std::vector<std::string> outputs_of(const Table& t, std::size_t from, const std::vector<std::size_t>& w) {
    std::vector<std::string> out;
    std::size_t q = from;
    for (auto k : w) {
        out.push_back(t.out[q][k]);
        q = t.next[q][k];
    }
    return out;
}

inline std::size_t state_after(const Table& t, const std::vector<std::size_t>& w) {
    std::size_t q = 0;
    for (auto k : w) {
        q = t.next[q][k];
    }
    return q;
}

inline Word word_of(const Table& t, const std::vector<std::size_t>& w) {
    Word out;
    for (auto k : w) {
        out.push_back(Symbol::of(t.inputs[k]));
    }
    return out;
}

inline std::vector<std::size_t> random_idx_word(std::mt19937_64& g, std::size_t ni, std::size_t len) {
    std::vector<std::size_t> w(len);
    for (auto& k : w) {
        k = static_cast<std::size_t>(g() % ni);
    }
    return w;
}

// Equivalence of two complete tables over the same inputs, by DFS on the
// product of reachable pairs.
inline bool tables_equivalent(const Table& a, const Table& b) {
    std::set<std::pair<std::size_t, std::size_t>> seen{{0, 0}};
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        const auto [p, r] = stack.back();
        stack.pop_back();
        for (std::size_t k = 0; k < a.inputs.size(); ++k) {
            if (a.out[p][k] != b.out[r][k]) {
                return false;
            }
            const auto nxt = std::make_pair(a.next[p][k], b.next[r][k]);
            if (seen.insert(nxt).second) {
                stack.push_back(nxt);
            }
        }
    }
    return true;
}

// Table of a possibly partial machine: undefined entries become a sink state
// nq emitting "#undef" forever.
inline Table completed_table(const MealyTable& m, const std::vector<std::string>& inputs) {
    Table t;
    t.nq = m.num_states() + 1;
    t.inputs = inputs;
    const std::size_t sink = m.num_states();
    t.next.assign(t.nq, std::vector<std::size_t>(inputs.size(), sink));
    t.out.assign(t.nq, std::vector<std::string>(inputs.size(), "#undef"));
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        const auto idx = m.input_index(Symbol::of(inputs[k]));
        if (!idx) {
            continue;
        }
        for (StateId q = 0; q < m.num_states(); ++q) {
            if (m.defined(q, *idx)) {
                t.next[q][k] = m.next(q, *idx);
                t.out[q][k] = m.output(q, *idx).name();
            }
        }
    }
    return t;
}

// Reachable states of a table (from q0).
inline std::size_t reachable_count(const Table& t) {
    std::vector<bool> seen(t.nq, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t n = 1;
    while (!stack.empty()) {
        const auto q = stack.back();
        stack.pop_back();
        for (auto r : t.next[q]) {
            if (!seen[r]) {
                seen[r] = true;
                ++n;
                stack.push_back(r);
            }
        }
    }
    return n;
}

}  // namespace testsupport
