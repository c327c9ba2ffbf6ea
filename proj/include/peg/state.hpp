// peg - PEG parsing toolkit with left recursion, precedence and expression clusters
#ifndef PEG_STATE_HPP
#define PEG_STATE_HPP

#include "peg/expr.hpp"
#include "peg/memo.hpp"
#include "peg/outcome.hpp"

#include <cstdint>
#include <limits>
#include <memory>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace peg {

// Provisional results for ongoing left-recursive/cluster invocations,
// keyed by (position, expression).
struct seed_table {
    std::unordered_map<std::size_t, std::unordered_map<expr_id, parse_outcome>> by_position;
    std::size_t live = 0;
    std::size_t peak = 0;

    const parse_outcome* find(std::size_t pos, expr_id id) const {
        auto it = by_position.find(pos);
        if (it == by_position.end())
            return nullptr;
        auto jt = it->second.find(id);
        return jt == it->second.end() ? nullptr : &jt->second;
    }
    void set(std::size_t pos, expr_id id, parse_outcome outcome) {
        auto [it, fresh] = by_position[pos].insert_or_assign(id, std::move(outcome));
        if (fresh && ++live > peak)
            peak = live;
    }
    void remove(std::size_t pos, expr_id id) {
        auto it = by_position.find(pos);
        if (it == by_position.end())
            return;
        if (it->second.erase(id))
            --live;
        if (it->second.empty())
            by_position.erase(it);
    }
    bool empty() const { return by_position.empty(); }
};

struct label_frame {
    const std::string* label = nullptr;
    bool is_token = false;
};

// Mutable per-parse state, confined to one parse on one thread.
struct parse_state {
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    std::u32string_view input;
    std::size_t position = 0;

    seed_table seeds;
    std::unordered_set<expr_id> blocked;
    std::unordered_map<expr_id, int> precedences;   // per-cluster current precedence
    std::unordered_map<expr_id, int> cluster_depth; // ongoing invocations per cluster
    int current_precedence = 0;                     // standalone Precedence wrappers
    int memo_suppress_depth = 0;                    // > 0 inside LeftRecursive/Cluster

    std::size_t error_watermark = 0;
    bool saw_failure = false;
    bool in_whitespace = false;            // parsing a token's trailing whitespace
    std::size_t nonws_watermark = 0;       // operand end of the latest token match
    std::size_t last_token_end = npos;     // end (after skipped whitespace) of same
    std::vector<std::uint64_t> counters;   // invocations by expression id
    std::vector<label_frame> labels;       // enclosing rule/token names
    int depth = 0;                         // invoke nesting

    extension_map extensions;
    std::unique_ptr<memo_strategy> memo; // default strategy (empty selector)
    std::unordered_map<std::string, std::unique_ptr<memo_strategy>> memo_by_selector;
    std::unique_ptr<error_handler> errors;

    bool memo_suppressed() const { return memo_suppress_depth > 0; }
    const std::string* innermost_label() const {
        return labels.empty() ? nullptr : labels.back().label;
    }
    const std::string* innermost_token() const {
        for (std::size_t i = labels.size(); i-- > 0;)
            if (labels[i].is_token)
                return labels[i].label;
        return nullptr;
    }
    // seeds, blocked set and cluster precedences must not survive a top-level parse
    bool hygienic() const {
        return seeds.empty() && blocked.empty() && precedences.empty() && cluster_depth.empty() &&
               memo_suppress_depth == 0;
    }
};

} // namespace peg

#endif
