// peg - PEG parsing toolkit with left recursion, precedence and expression clusters
//
// Pre-parse transformation passes over the expression graph: reference
// resolution, nullability, left-recursion cycle detection and breaking, and
// the generic visitor-based rewrite.
#ifndef PEG_ANALYSIS_HPP
#define PEG_ANALYSIS_HPP

#include "peg/grammar.hpp"

#include <functional>
#include <vector>

namespace peg {

// Replaces every Reference node by a direct edge to the referenced rule's
// expression. Unknown names raise a grammar_error naming the reference and
// the rule it appears in.
grammar resolve_references(const grammar& g);

struct nullability_set {
    std::vector<bool> nullable; // by expression id
    bool contains(expr_id id) const {
        return static_cast<std::size_t>(id) < nullable.size() && nullable[static_cast<std::size_t>(id)];
    }
};

// Least fixpoint of the can-succeed-consuming-no-input relation.
// Requires references to be resolved.
nullability_set compute_nullable(const grammar& g);

// Strongly connected components of the left-edge relation (size > 1 or with a
// self-loop), each a sorted list of expression ids, in deterministic order.
// With through_markers = false, edges out of LeftRecursive/Cluster nodes are
// ignored, which is the "already broken" view used by break_cycles.
std::vector<std::vector<expr_id>> detect_left_cycles(const grammar& g, const nullability_set& nb,
                                                     bool through_markers = true);

struct break_report {
    std::vector<expr_id> wrapped_nodes;     // the new LeftRecursive wrappers
    std::vector<std::string> wrapped_rules; // rules whose root was wrapped
};

// Wraps one node per unbroken cycle in a right-associative LeftRecursive
// wrapper and redirects every edge (and rule entry) into the wrapped node to
// the wrapper, iterating until no cycle lacks a marker. Already-marked cycles
// and acyclic grammars come back unchanged.
grammar break_cycles(const grammar& g, const std::vector<std::vector<expr_id>>& cycles,
                     break_report* report = nullptr);

// Per-node rewrite applied bottom-up exactly once per reachable node. The
// callback sees the node copied into the new graph (children already remapped)
// and returns its id to keep it, or the id of a replacement built with the
// supplied builder; edges into the node are then redirected to the replacement.
using rewrite_fn = std::function<expr_id(const expression&, grammar_builder&)>;
grammar transform(const grammar& g, const rewrite_fn& rewrite);

struct prepare_report {
    std::vector<std::vector<expr_id>> cycles;
    break_report breaks;
    std::vector<std::string> warnings;
};

// Full pipeline: resolve_references, compute_nullable, detect_left_cycles,
// break_cycles. Also collects repetition-over-nullable warnings.
grammar prepare(const grammar& g, prepare_report* report = nullptr);

} // namespace peg

#endif
