#pragma once

#include <string>

#include "ubamc/model.hpp"

namespace ubamc {

/// Parses the `@mc` document format. Throws ParseError with line/column on
/// malformed input; stochasticity violations are reported as ParseError as
/// well, naming the offending state (line points at its declaration).
MarkovChain parse_markov_chain(const std::string& text);

/// Parses the `@automaton nfa|nba` document format. Duplicate transition
/// lines are deduplicated (the transition set is a relation). Omitted
/// `initial`/`accepting` lines give the empty set.
Automaton parse_automaton(const std::string& text);

/// Canonical serializers: declaration order preserved, zero entries
/// dropped, transitions in row-major order. parse(serialize(x)) = x.
std::string serialize_markov_chain(const MarkovChain& m);
std::string serialize_automaton(const Automaton& a);

/// Reads a whole file; throws Error when unreadable.
std::string read_file(const std::string& path);

}  // namespace ubamc
