// peg - PEG parsing toolkit with left recursion, precedence and expression clusters
//
// Pluggable memoization and error-handling strategies.
#ifndef PEG_MEMO_HPP
#define PEG_MEMO_HPP

#include "peg/expr.hpp"
#include "peg/outcome.hpp"

#include <memory>
#include <optional>

namespace peg {

struct parse_state;
struct grammar;

struct memo_key {
    expr_id expr = no_expr;
    std::size_t position = 0;
    std::optional<int> precedence; // present iff the strategy is precedence-aware
    friend bool operator==(const memo_key&, const memo_key&) = default;
};

struct memo_key_hash {
    std::size_t operator()(const memo_key& k) const {
        std::size_t h = std::hash<std::size_t>{}(k.position);
        h = h * 1000003u ^ static_cast<std::size_t>(k.expr);
        if (k.precedence)
            h = h * 1000003u ^ static_cast<std::size_t>(*k.precedence + 1);
        return h;
    }
};

class memo_strategy {
public:
    virtual ~memo_strategy() = default;
    virtual bool precedence_aware() const { return false; }
    virtual const parse_outcome* lookup(const memo_key& key) = 0;
    virtual void store(const memo_key& key, const parse_outcome& outcome) = 0;
    virtual std::size_t size() const = 0;
};

std::unique_ptr<memo_strategy> unbounded_memo_strategy();
// Least-recently-stored eviction once capacity is reached. Capacity 0 is rejected.
std::unique_ptr<memo_strategy> bounded_memo_strategy(std::size_t capacity);
// Keys carry the current precedence, so one (expression, position) may hold
// distinct entries per precedence level.
std::unique_ptr<memo_strategy> precedence_memo_strategy();

struct error_report {
    bool failed = false;    // whether any failure event was observed
    std::size_t position = 0; // farthest failure, in scalar offsets
    std::size_t line = 1;
    std::size_t column = 1;
    std::vector<std::string> expectations; // sorted, deduplicated
    std::optional<std::string> token_context;
    std::string render() const;
};

class error_handler {
public:
    virtual ~error_handler() = default;
    virtual void on_failure(const expression& e, std::size_t position, parse_state& st) = 0;
    virtual error_report report(const parse_state& st) const = 0;
};

// The default strategy: tracks the farthest failure position; expectation
// labels come from the innermost enclosing token or named rule of failing
// terminals (their own description when there is none).
std::unique_ptr<error_handler> farthest_error_handler(const grammar& g);

} // namespace peg

#endif
