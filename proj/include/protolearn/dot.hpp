#pragma once

#include <string>
#include <string_view>

#include "protolearn/mealy.hpp"

namespace protolearn {

// Graphviz subset used by automata benchmark corpora:
//
//   digraph g {
//     __start0 [label="" shape="none"];
//     s0 [label="s0"];
//     s0 -> s1 [label="i1/o1"];
//     __start0 -> s0;
//   }
//
// Node ids name the states, every non-start edge carries "input/output" and the
// hidden __start0 node points at the initial state.

// Throws ParseError (with line), NonDeterminismError or InvalidArgument when the
// machine is not input-enabled.
MealyMachine parse_dot(std::string_view text);
PartialMealy parse_dot_partial(std::string_view text);

std::string serialize_dot(const MealyTable& m, std::string_view graph_name = "mealy");

MealyMachine load_dot(const std::string& path);
PartialMealy load_dot_partial(const std::string& path);
void save_dot(const MealyTable& m, const std::string& path);

}  // namespace protolearn
