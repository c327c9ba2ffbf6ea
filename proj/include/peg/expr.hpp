// peg - PEG parsing toolkit with left recursion, precedence and expression clusters
//
// The parsing-expression graph: a grammar is a table of immutable expression
// nodes addressed by integer id, so cyclic graphs (recursive rules) need no
// special representation.
#ifndef PEG_EXPR_HPP
#define PEG_EXPR_HPP

#include <any>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace peg {

class grammar_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

using expr_id = std::int32_t;
inline constexpr expr_id no_expr = -1;

enum class expr_kind : std::uint8_t {
    literal,
    char_class,
    any_char,
    sequence,
    choice,
    zero_or_more,
    one_or_more,
    option,
    and_predicate,
    not_predicate,
    reference,
    left_recursive,
    precedence,
    cluster,
    capture,
    token,
    memo,
    escape_left_block,
    trace,
};

std::string_view kind_name(expr_kind k);

// Inclusive range of Unicode scalar values.
struct char_range {
    char32_t lo = 0;
    char32_t hi = 0;
    friend bool operator==(const char_range&, const char_range&) = default;
};

// One precedence level of a cluster. The level's alternates are a slice of
// the cluster node's children; op_count gives the slice length so that the
// children list stays the single source of truth for edges.
struct cluster_level {
    int precedence = 1;
    bool left_associative = false;
    int op_count = 0;
    friend bool operator==(const cluster_level&, const cluster_level&) = default;
};

// Opaque keyed values for extensions ("a fast map that can hold arbitrary data").
class extension_map {
public:
    void set(std::string key, std::any value) { slots_[std::move(key)] = std::move(value); }
    const std::any* find(std::string_view key) const {
        auto it = slots_.find(key);
        return it == slots_.end() ? nullptr : &it->second;
    }
    std::any* find(std::string_view key) {
        auto it = slots_.find(key);
        return it == slots_.end() ? nullptr : &it->second;
    }
    bool empty() const { return slots_.empty(); }

private:
    std::map<std::string, std::any, std::less<>> slots_;
};

struct expression {
    expr_id id = no_expr;
    expr_kind kind = expr_kind::literal;
    std::vector<expr_id> children;

    // kind-specific payload
    std::u32string text;               // literal: scalars to match
    std::vector<char_range> ranges;    // char_class
    std::string name;                  // reference target, capture name, token/trace label, memo selector
    bool left_associative = false;     // left_recursive
    bool record_text = false;          // capture
    int level = 0;                     // precedence
    std::vector<cluster_level> groups; // cluster; alternates are children slices

    extension_map extensions;

    expr_id child() const { return children.front(); }

    // Alternates of cluster group g (groups are stored in decreasing precedence).
    std::span<const expr_id> group_ops(std::size_t g) const {
        std::size_t off = 0;
        for (std::size_t i = 0; i < g; ++i)
            off += static_cast<std::size_t>(groups[i].op_count);
        return {children.data() + off, static_cast<std::size_t>(groups[g].op_count)};
    }

    bool matches_scalar(char32_t c) const {
        for (const auto& r : ranges)
            if (c >= r.lo && c <= r.hi)
                return true;
        return false;
    }
};

} // namespace peg

#endif
