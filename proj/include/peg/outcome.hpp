// peg - PEG parsing toolkit with left recursion, precedence and expression clusters
#ifndef PEG_OUTCOME_HPP
#define PEG_OUTCOME_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace peg {

struct syntax_node;
using node_ptr = std::shared_ptr<const syntax_node>;

// Captured tree node. Immutable once produced; children are shared so that
// seed growing can reuse subtrees without copying them.
struct syntax_node {
    std::string name;
    std::size_t span_start = 0;
    std::size_t span_end = 0;
    std::optional<std::string> text; // recorded UTF-8, trailing whitespace trimmed
    std::vector<node_ptr> children;
};

bool same_tree(const syntax_node& a, const syntax_node& b);
bool same_forest(std::span<const node_ptr> a, std::span<const node_ptr> b);

// Result of invoking one expression. Failure carries no nodes and no end
// position; outcomes are ordered by amount of input consumed.
struct parse_outcome {
    bool ok = false;
    std::size_t end = 0;
    std::vector<node_ptr> nodes;

    static parse_outcome failure() { return {}; }
    static parse_outcome success(std::size_t end, std::vector<node_ptr> nodes = {}) {
        parse_outcome o;
        o.ok = true;
        o.end = end;
        o.nodes = std::move(nodes);
        return o;
    }
    // "result consumed more input than current": success beats failure,
    // between successes strictly greater end wins.
    bool consumed_more_than(const parse_outcome& other) const {
        return ok && (!other.ok || end > other.end);
    }
};

} // namespace peg

#endif
