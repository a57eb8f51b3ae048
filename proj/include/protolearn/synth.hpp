#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "protolearn/mealy.hpp"

namespace protolearn {

enum class SynthProfile { Generic, Ble, Mqtt };

SynthProfile parse_profile(const std::string& s);
const char* to_string(SynthProfile p);

struct SynthOptions {
    SynthProfile profile{SynthProfile::Generic};
    // Distinct responses an input can produce (including the shared "empty").
    std::size_t outputs_per_input{3};
    double self_loop{0.45};
    // Inputs that tear the session down and return to the initial state.
    std::size_t reset_inputs{1};
    // Longest access sequence of the spanning tree (0: unbounded).
    std::size_t max_tree_depth{0};
    // Chains of shadow_length states copying a path of the base machine; the
    // copies differ from the originals only after one specific input word of
    // that length.
    std::size_t shadow_chains{0};
    std::size_t shadow_length{2};
    // Each copy is entered from a base state at most this deep in the tree.
    std::size_t shadow_entry_depth{1};
    bool deep_chain_head{true};
    // Bounds on the longest shortest separating word over all state pairs;
    // max 0 means unbounded.
    std::size_t min_depth{1};
    std::size_t max_depth{0};
    std::size_t budget{20000};

    // Shapes used for the BLE and MQTT stand-ins.
    static SynthOptions ble();
    static SynthOptions mqtt();
};

// Random protocol-like machine with exactly num_states states and num_inputs
// inputs: a spanning tree of progress inputs from the initial state, reset
// inputs back to it, many self-loops and few outputs per input. Always
// strongly connected and minimal; candidates are redrawn until the depth
// bounds hold. Throws LearningFailure when the budget runs out.
MealyMachine synth_model(std::size_t num_states, std::size_t num_inputs, std::uint64_t seed,
                         const SynthOptions& options = {});

// Length of the longest shortest separating word over all state pairs (0 for
// one state); nullopt when two states are equivalent.
std::optional<std::size_t> separation_depth(const MealyMachine& m);

bool strongly_connected(const MealyMachine& m);

}  // namespace protolearn
