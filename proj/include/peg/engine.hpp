// peg - PEG parsing toolkit with left recursion, precedence and expression clusters
//
// The parse driver: dispatch over expression kinds, error reporting hooks,
// and the per-parse session used by tests and tools.
#ifndef PEG_ENGINE_HPP
#define PEG_ENGINE_HPP

#include "peg/grammar.hpp"
#include "peg/memo.hpp"
#include "peg/outcome.hpp"
#include "peg/state.hpp"

#include <chrono>
#include <functional>
#include <string_view>

namespace peg {

struct trace_event {
    enum class phase { enter, exit };
    phase ph = phase::enter;
    expr_id expr = no_expr;
    std::string_view label;
    std::size_t position = 0; // where the expression was invoked
    int depth = 0;
    const parse_outcome* outcome = nullptr; // exit only
};

struct parse_options {
    // Require full input consumption (an appended end-of-input check).
    bool full_match = false;
    // Per-selector memoization strategies; the default maps every selector to
    // the unbounded (expression, position) strategy.
    std::function<std::unique_ptr<memo_strategy>(std::string_view selector)> memo_factory;
    std::function<std::unique_ptr<error_handler>(const grammar&)> error_factory;
    // When set, receives events from Trace expressions; with trace_all also
    // from every invocation.
    std::function<void(const trace_event&)> trace_sink;
    bool trace_all = false;
};

struct parse_stats {
    std::vector<std::uint64_t> by_expr;
    std::uint64_t total = 0;
    std::size_t peak_seed_entries = 0;
    double wall_ms = 0.0;
};

struct parse_result {
    parse_outcome outcome;
    error_report error;
    parse_stats stats;
    bool hygienic = true;
};

class parser;

// One parse over one input; exposes invoke() so instrumentation and tests can
// drive expressions directly.
class parse_session {
public:
    parse_session(const parser& p, std::u32string scalars);
    parse_session(const parser& p, std::string_view utf8);

    parse_outcome invoke(expr_id id, std::size_t position);
    parse_outcome run_root();

    parse_state& state() { return st_; }
    const parser& owner() const { return parser_; }
    error_report report() const { return st_.errors->report(st_); }

private:
    const parser& parser_;
    std::u32string input_;
    parse_state st_;
};

class parser {
public:
    explicit parser(grammar g, parse_options opt = {});

    parse_result run(std::string_view utf8_input) const;
    parse_result run_scalars(std::u32string input) const;

    const grammar& grammar_ref() const { return g_; }
    const parse_options& options() const { return opt_; }
    expr_id entry() const { return entry_; }

private:
    friend class parse_session;
    grammar g_; // augmented with the end-of-input check when full_match is set
    parse_options opt_;
    expr_id entry_ = no_expr;
};

} // namespace peg

#endif
