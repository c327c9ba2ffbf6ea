// Internal engine plumbing shared by the per-kind parse routines.
#ifndef PEG_ENGINE_DETAIL_HPP
#define PEG_ENGINE_DETAIL_HPP

#include "peg/engine.hpp"
#include "peg/state.hpp"

namespace peg::detail {

struct engine_ctx {
    const grammar& g;
    const parse_options& opt;
    parse_state& st;
};

// Dispatch with the engine-wide contract: counters bump, backtracking on
// failure, failure reporting, label bookkeeping.
parse_outcome invoke(engine_ctx& cx, expr_id id);

// Algorithm 1 plus the escape hatch and the standalone precedence wrapper.
parse_outcome parse_left_recursive(engine_ctx& cx, const expression& e);
parse_outcome parse_escape(engine_ctx& cx, const expression& e);
parse_outcome parse_precedence(engine_ctx& cx, const expression& e);

// Algorithm 2.
parse_outcome parse_cluster(engine_ctx& cx, const expression& e);

} // namespace peg::detail

#endif
