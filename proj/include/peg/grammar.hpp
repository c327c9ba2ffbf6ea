// peg - PEG parsing toolkit with left recursion, precedence and expression clusters
#ifndef PEG_GRAMMAR_HPP
#define PEG_GRAMMAR_HPP

#include "peg/expr.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace peg {

// Resolved expression graph with named rules. Immutable once built; the
// analysis passes return rewritten copies, so grammars are safe to share
// across concurrent parses.
struct grammar {
    std::vector<expression> nodes;
    std::vector<std::pair<std::string, expr_id>> rules; // insertion order
    std::string root;
    std::optional<expr_id> whitespace;

    const expression& node(expr_id id) const { return nodes[static_cast<std::size_t>(id)]; }
    expression& node(expr_id id) { return nodes[static_cast<std::size_t>(id)]; }

    expr_id rule_root(std::string_view name) const;
    bool has_rule(std::string_view name) const { return rule_root(name) != no_expr; }

    // Name of the rule whose root this node is, or nullptr. O(1) after reindex().
    const std::string* rule_name_of(expr_id id) const;

    // Human-readable label: rule name, terminal description, or kind tag.
    std::string describe(expr_id id) const;

    // Ids reachable from every rule root, in deterministic order.
    std::vector<expr_id> reachable() const;

    // Rebuilds the node-to-rule index; call after editing rules or nodes.
    void reindex();

private:
    std::vector<std::int32_t> rule_of_node_; // index into rules, -1 if none
};

// DSL-syntax renderings shared by describe() and the grammar dumper.
std::string escape_literal_text(std::u32string_view text);
std::string render_char_class(const std::vector<char_range>& ranges);

// Assigns fresh ids and validates per-kind arity and attribute constraints.
class grammar_builder {
public:
    grammar_builder() = default;
    // Continues id assignment on top of an existing graph (used by transforms).
    explicit grammar_builder(grammar seed);

    expr_id literal(std::string_view utf8_text);
    expr_id literal_scalars(std::u32string text);
    expr_id char_class(std::vector<char_range> ranges);
    expr_id any_char();
    expr_id sequence(std::vector<expr_id> children);
    expr_id choice(std::vector<expr_id> children);
    expr_id zero_or_more(expr_id operand);
    expr_id one_or_more(expr_id operand);
    expr_id option(expr_id operand);
    expr_id and_predicate(expr_id operand);
    expr_id not_predicate(expr_id operand);
    expr_id reference(std::string rule_name);
    expr_id left_recursive(expr_id operand, bool left_associative = false);
    expr_id precedence(int level, expr_id operand);

    struct cluster_group {
        int precedence = 1;
        bool left_associative = false;
        std::vector<expr_id> ops;
    };
    // Groups in any order; stored sorted by decreasing precedence. Precedences
    // must be distinct and >= 1, alternates of a level share its associativity.
    expr_id cluster(std::vector<cluster_group> groups);

    struct cluster_alternate {
        expr_id expr = no_expr;
        int increments = 0; // number of @+ annotations
        bool left_recur = false;
    };
    // Builds a cluster from annotated alternates: precedence starts at 0 and
    // each @+ increments it; alternates without one join the previous level.
    expr_id cluster_of(const std::vector<cluster_alternate>& alternates);

    expr_id capture(std::string name, expr_id operand, bool record = false);
    expr_id token(std::string label, expr_id operand);
    expr_id memo(expr_id operand, std::string selector = "");
    expr_id escape(expr_id operand);
    expr_id trace(std::string label, expr_id operand);

    void rule(std::string name, expr_id root);
    void start(std::string rule_name) { start_ = std::move(rule_name); }
    void whitespace(std::string rule_name) { whitespace_rule_ = std::move(rule_name); }
    void whitespace_expr(expr_id id) { whitespace_expr_ = id; }

    extension_map& extensions(expr_id id) { return g_.node(id).extensions; }
    const expression& node(expr_id id) const { return g_.node(id); }
    std::size_t node_count() const { return g_.nodes.size(); }

    // Direct access for the analysis passes; not meant for general use.
    grammar& graph() { return g_; }

    grammar build();

private:
    expr_id add(expression e);
    void require(bool cond, const std::string& message) const {
        if (!cond)
            throw grammar_error(message);
    }

    grammar g_;
    std::string start_;
    std::string whitespace_rule_;
    expr_id whitespace_expr_ = no_expr;
};

} // namespace peg

#endif
