// peg - PEG parsing toolkit with left recursion, precedence and expression clusters
//
// The .peg grammar file format. The loader is bootstrapped: grammar files are
// parsed by this library's own engine, with a grammar built combinator-style.
#ifndef PEG_DSL_HPP
#define PEG_DSL_HPP

#include "peg/analysis.hpp"
#include "peg/grammar.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace peg {

struct load_report {
    std::vector<std::vector<expr_id>> cycles; // detected left-recursive cycles
    std::vector<std::string> auto_marked_rules;
    std::vector<expr_id> auto_marked_nodes; // the inserted LeftRecursive wrappers
    std::vector<std::string> warnings;
};

// Parses the DSL, builds the expression graph, then runs the full pipeline
// (resolve_references, compute_nullable, detect_left_cycles, break_cycles).
// Throws grammar_error with line:column positions on syntax or validation
// errors.
grammar load_grammar(std::string_view text, load_report* report = nullptr);

// Renders DSL text that load_grammar maps back to an isomorphic grammar.
// Shared or cyclic anonymous subexpressions are promoted to synthetic rules;
// Trace nodes (which have no DSL form) render as their operand.
std::string dump_grammar(const grammar& g);

} // namespace peg

#endif
