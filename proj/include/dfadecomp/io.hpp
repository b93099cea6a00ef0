#pragma once

#include <string>

#include "dfadecomp/automata.hpp"

namespace dfadecomp {

/// Graphviz exports: accepting states doublecircle, rejecting box, don't-care
/// circle; parallel edges share one label; merged 3DFA states carry their
/// APTA preimages in a tooltip.
std::string to_dot(const Apta& apta);
std::string to_dot(const ThreeDfa& acceptor);
std::string to_dot(const Dfa& dfa, const Alphabet& alphabet);

/// {"alphabet": [...], "dfas": [{"num_states", "initial", "accepting",
///  "delta": [{"from", "letter", "to"}, ...]}, ...]}
std::string decomposition_to_json(const Decomposition& decomposition);
Decomposition decomposition_from_json(const std::string& text);

std::string three_dfa_to_json(const ThreeDfa& acceptor);

} // namespace dfadecomp
