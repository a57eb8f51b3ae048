#include "protolearn/synth.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "protolearn/errors.hpp"
#include "protolearn/rng.hpp"

namespace protolearn {

SynthProfile parse_profile(const std::string& s) {
    if (s == "generic") {
        return SynthProfile::Generic;
    }
    if (s == "ble") {
        return SynthProfile::Ble;
    }
    if (s == "mqtt") {
        return SynthProfile::Mqtt;
    }
    throw InvalidArgument("unknown profile '" + s + "' (generic|ble|mqtt)");
}

const char* to_string(SynthProfile p) {
    switch (p) {
        case SynthProfile::Ble:
            return "ble";
        case SynthProfile::Mqtt:
            return "mqtt";
        default:
            return "generic";
    }
}

SynthOptions SynthOptions::ble() {
    SynthOptions o;
    o.profile = SynthProfile::Ble;
    o.outputs_per_input = 3;
    o.self_loop = 0.5;
    o.reset_inputs = 1;
    o.max_depth = 1;
    return o;
}

SynthOptions SynthOptions::mqtt() {
    SynthOptions o;
    o.profile = SynthProfile::Mqtt;
    o.outputs_per_input = 4;
    o.self_loop = 0.4;
    o.reset_inputs = 1;
    o.max_tree_depth = 2;
    o.shadow_chains = 1;
    o.shadow_length = 2;
    o.shadow_entry_depth = 0;
    o.deep_chain_head = false;
    o.min_depth = 2;
    return o;
}

namespace {

const std::vector<std::string> kBleInputs = {"scan_req",    "connection_req", "length_req",
                                             "length_rsp",  "feature_req",    "feature_rsp",
                                             "version_req", "mtu_req",        "pairing_req"};
const std::vector<std::string> kMqttInputs = {"connect",     "disconnect",   "subscribe",
                                              "unsubscribe", "publish",      "publish_qos1",
                                              "publish_retain", "ping",      "invalid"};

std::vector<std::string> input_names(SynthProfile p, std::size_t n) {
    const std::vector<std::string>* pool = nullptr;
    if (p == SynthProfile::Ble) {
        pool = &kBleInputs;
    } else if (p == SynthProfile::Mqtt) {
        pool = &kMqttInputs;
    }
    std::vector<std::string> out;
    for (std::size_t k = 0; k < n; ++k) {
        if (pool && k < pool->size()) {
            out.push_back((*pool)[k]);
        } else {
            out.push_back("i" + std::to_string(k + 1));
        }
    }
    return out;
}

std::string response(const std::string& input, std::size_t r) {
    switch (r) {
        case 0:
            return "empty";
        case 1:
            return "ok_" + input;
        case 2:
            return "rej_" + input;
        default:
            return "alt" + std::to_string(r - 2) + "_" + input;
    }
}

struct Draft {
    std::size_t nq;
    std::size_t ni;
    std::vector<std::size_t> next;  // nq * ni
    std::vector<std::size_t> out;   // response index per (q, k)
};

Draft draw(std::size_t nq, std::size_t ni, const SynthOptions& o, Rng& rng) {
    Draft d{nq, ni, std::vector<std::size_t>(nq * ni), std::vector<std::size_t>(nq * ni)};
    const std::size_t n_resets = std::min(o.reset_inputs, ni > 1 ? ni - 1 : 0);
    std::vector<std::size_t> order(ni);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng.engine());
    std::vector<bool> is_reset(ni, false);
    for (std::size_t r = 0; r < n_resets; ++r) {
        is_reset[order[r]] = true;
    }
    std::vector<std::size_t> progress(order.begin() + static_cast<std::ptrdiff_t>(n_resets), order.end());
    const std::size_t shadow_states = std::max<std::size_t>(1, o.shadow_length) * o.shadow_chains;
    const std::size_t nb = nq > shadow_states + 1 && nq - shadow_states >= 2 ? nq - shadow_states : nq;

    std::vector<bool> tree(nq * ni, false);
    std::vector<std::size_t> depth(nq, 0);
    // spanning tree of the base states: each new state hangs off an earlier,
    // shallow enough one
    for (std::size_t j = 1; j < nb; ++j) {
        std::vector<std::size_t> parents;
        for (std::size_t p = 0; p < j; ++p) {
            if (o.max_tree_depth == 0 || depth[p] + 1 <= o.max_tree_depth) {
                parents.push_back(p);
            }
        }
        for (std::size_t tries = 0;; ++tries) {
            const std::size_t parent = tries < 256 ? parents[rng.uniform(0, parents.size() - 1)] : rng.uniform(0, j - 1);
            const std::size_t k = progress[rng.uniform(0, progress.size() - 1)];
            if (!tree[parent * ni + k]) {
                tree[parent * ni + k] = true;
                d.next[parent * ni + k] = j;
                depth[j] = depth[parent] + 1;
                break;
            }
        }
    }
    const std::size_t n_out = std::max<std::size_t>(1, o.outputs_per_input);
    for (std::size_t q = 0; q < nb; ++q) {
        for (std::size_t k = 0; k < ni; ++k) {
            d.out[q * ni + k] = rng.uniform(0, n_out - 1);
            if (tree[q * ni + k]) {
                continue;
            }
            if (is_reset[k]) {
                d.next[q * ni + k] = 0;
            } else if (rng.unit() < o.self_loop) {
                d.next[q * ni + k] = q;
            } else {
                d.next[q * ni + k] = rng.uniform(0, nb - 1);
            }
        }
    }
    // shadow chains: copies S0..S{L-1} of a base path P0 -z1-> P1 -z2-> ...
    // that follow the path and differ only in one output of the last copy, so
    // S0 and P0 are separated by a specific word of length L
    const std::size_t len = std::max<std::size_t>(1, o.shadow_length);
    for (std::size_t first = nb; first + len <= nq; first += len) {
        std::vector<std::size_t> path{rng.uniform(1, nb - 1)};
        std::vector<std::size_t> via;
        for (std::size_t i = 1; i < len; ++i) {
            const std::size_t z = progress[rng.uniform(0, progress.size() - 1)];
            via.push_back(z);
            path.push_back(d.next[path.back() * ni + z]);
        }
        for (std::size_t i = 0; i < len; ++i) {
            const std::size_t sh = first + i;
            const std::size_t base = path[i];
            for (std::size_t k = 0; k < ni; ++k) {
                d.out[sh * ni + k] = d.out[base * ni + k];
                d.next[sh * ni + k] = d.next[base * ni + k] == base ? sh : d.next[base * ni + k];
            }
            if (i + 1 < len) {
                d.next[sh * ni + via[i]] = sh + 1;
            }
        }
        const std::size_t last = first + len - 1;
        const std::size_t y = progress[rng.uniform(0, progress.size() - 1)];
        d.out[last * ni + y] = (d.out[last * ni + y] + 1 + rng.uniform(0, n_out > 2 ? n_out - 2 : 0)) % n_out;
        // every copy gets an entry edge from a shallow state; optionally the head
        // of the chain hangs off the deepest tree level instead
        const std::size_t deepest = *std::max_element(depth.begin(), depth.begin() + static_cast<std::ptrdiff_t>(nb));
        for (std::size_t i = 0; i < len; ++i) {
            for (std::size_t tries = 0; tries < 1024; ++tries) {
                const std::size_t p = rng.uniform(0, nb - 1);
                const std::size_t k = progress[rng.uniform(0, progress.size() - 1)];
                const bool fits = (i == 0 && o.deep_chain_head) ? depth[p] == deepest : depth[p] <= o.shadow_entry_depth;
                if (fits && p != path[0] && !tree[p * ni + k]) {
                    tree[p * ni + k] = true;
                    d.next[p * ni + k] = first + i;
                    break;
                }
            }
        }
    }
    // resets answer the same everywhere except from the initial state
    for (std::size_t k = 0; k < ni; ++k) {
        if (!is_reset[k]) {
            continue;
        }
        for (std::size_t q = 1; q < nq; ++q) {
            d.out[q * ni + k] = 1 % n_out;
        }
    }
    return d;
}

MealyMachine to_machine(const Draft& d, const std::vector<std::string>& names) {
    MealyBuilder b;
    for (std::size_t q = 0; q < d.nq; ++q) {
        b.add_state("s" + std::to_string(q));
    }
    b.set_initial(0);
    std::vector<Symbol> in;
    for (std::size_t k = 0; k < d.ni; ++k) {
        in.push_back(Symbol::of(names[k]));
        b.declare_input(in.back());
    }
    for (std::size_t q = 0; q < d.nq; ++q) {
        for (std::size_t k = 0; k < d.ni; ++k) {
            b.add_transition(static_cast<StateId>(q), in[k], Symbol::of(response(names[k], d.out[q * d.ni + k])),
                             static_cast<StateId>(d.next[q * d.ni + k]));
        }
    }
    return b.build();
}

}  // namespace

std::optional<std::size_t> separation_depth(const MealyMachine& m) {
    const std::size_t n = m.num_states();
    const std::size_t ni = m.num_inputs();
    if (n <= 1) {
        return 0;
    }
    // Moore refinement; level k separates exactly the pairs with a separating word of length <= k
    std::vector<std::size_t> cls(n, 0);
    std::size_t n_classes = 1;
    for (std::size_t level = 1;; ++level) {
        std::map<std::vector<std::size_t>, std::size_t> ids;
        std::vector<std::size_t> next_cls(n);
        for (StateId q = 0; q < n; ++q) {
            std::vector<std::size_t> key;
            key.reserve(2 * ni + 1);
            key.push_back(cls[q]);
            for (std::size_t k = 0; k < ni; ++k) {
                key.push_back(m.output(q, k).id());
                key.push_back(cls[m.next(q, k)]);
            }
            next_cls[q] = ids.try_emplace(std::move(key), ids.size()).first->second;
        }
        if (ids.size() == n) {
            return level;
        }
        if (ids.size() == n_classes && level > 1) {
            return std::nullopt;
        }
        n_classes = ids.size();
        cls = std::move(next_cls);
    }
}

bool strongly_connected(const MealyMachine& m) {
    const std::size_t n = m.num_states();
    if (n == 0) {
        return false;
    }
    auto reach_all = [&](bool reverse) {
        std::vector<std::vector<StateId>> adj(n);
        for (StateId q = 0; q < n; ++q) {
            for (std::size_t k = 0; k < m.num_inputs(); ++k) {
                const StateId t = m.next(q, k);
                if (reverse) {
                    adj[t].push_back(q);
                } else {
                    adj[q].push_back(t);
                }
            }
        }
        std::vector<bool> seen(n, false);
        std::vector<StateId> stack{m.initial()};
        seen[m.initial()] = true;
        std::size_t count = 1;
        while (!stack.empty()) {
            const StateId q = stack.back();
            stack.pop_back();
            for (StateId t : adj[q]) {
                if (!seen[t]) {
                    seen[t] = true;
                    ++count;
                    stack.push_back(t);
                }
            }
        }
        return count == n;
    };
    return reach_all(false) && reach_all(true);
}

MealyMachine synth_model(std::size_t num_states, std::size_t num_inputs, std::uint64_t seed,
                         const SynthOptions& options) {
    if (num_states == 0 || num_inputs == 0) {
        throw InvalidArgument("synth_model needs |Q| >= 1 and |I| >= 1");
    }
    const auto names = input_names(options.profile, num_inputs);
    Rng rng(seed);
    for (std::size_t attempt = 0; attempt < options.budget; ++attempt) {
        const Draft d = draw(num_states, num_inputs, options, rng);
        MealyMachine m = to_machine(d, names);
        const auto depth = separation_depth(m);
        if (!depth || !strongly_connected(m)) {
            continue;
        }
        if (num_states > 1 && *depth < options.min_depth) {
            continue;
        }
        if (options.max_depth != 0 && *depth > options.max_depth) {
            continue;
        }
        return m;
    }
    throw LearningFailure("no machine with " + std::to_string(num_states) + " states and " +
                          std::to_string(num_inputs) + " inputs within the generation budget");
}

}  // namespace protolearn
