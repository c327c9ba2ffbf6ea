// peg - PEG parsing toolkit with left recursion, precedence and expression clusters
//
// Generators for the four arithmetic grammar styles parameterized by
// (levels, operators per level), plus the invocation-count harness.
#ifndef PEG_BENCH_HPP
#define PEG_BENCH_HPP

#include "peg/engine.hpp"
#include "peg/grammar.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace peg {

enum class grammar_style {
    layered_right, // E = S '+' E | S '-' E | S     (right-recursive chain of levels)
    idiomatic,     // E = S (('+' | '-') S)*         (flat operand lists)
    layered_left,  // E = E '+' S | E '-' S | S     (left-recursive, auto cycle-broken)
    cluster,       // one expression cluster, one precedence group per level
};

const char* style_name(grammar_style s);
std::optional<grammar_style> style_from_name(std::string_view name);

struct bench_config {
    int levels = 2; // L >= 1
    int ops = 2;    // P >= 1
    grammar_style style = grammar_style::cluster;
    bool memoize = false;            // wrap every rule root in a Memo node
    bool with_captures = false;      // capture operator applications and numbers
    bool cluster_left_assoc = true;  // associativity of the cluster's operator groups
};

struct generated_grammar {
    grammar g;
    expr_id digit_matcher = no_expr; // the [0-9] node, for invocation counting
    std::u32string operators;        // level-major: level 1 first
};

// The operator alphabet starts with Table-style '+','-','*','/' and continues
// through a fixed printable list, level-major, so generated grammars are
// identical across runs.
generated_grammar generate_grammar(const bench_config& cfg);

// digit (op digit)* strings of the requested length (rounded down to odd),
// operators drawn uniformly from the config's alphabet.
std::u32string generate_input(const bench_config& cfg, std::size_t length, std::uint64_t seed);

struct bench_row {
    std::string style;
    int levels = 0;
    int ops = 0;
    std::uint64_t digit_invocations = 0;
    std::uint64_t total_invocations = 0;
    double wall_ms = 0.0;
};

// Parses the input `repetitions` times (full match); wall time is the median,
// counts are asserted identical across repetitions.
bench_row run_bench(const bench_config& cfg, std::u32string_view input, int repetitions);

} // namespace peg

#endif
