#include "peg/grammar.hpp"

#include "peg/unicode.hpp"

#include <algorithm>

namespace peg {

std::string_view kind_name(expr_kind k) {
    switch (k) {
    case expr_kind::literal: return "literal";
    case expr_kind::char_class: return "char_class";
    case expr_kind::any_char: return "any_char";
    case expr_kind::sequence: return "sequence";
    case expr_kind::choice: return "choice";
    case expr_kind::zero_or_more: return "zero_or_more";
    case expr_kind::one_or_more: return "one_or_more";
    case expr_kind::option: return "option";
    case expr_kind::and_predicate: return "and_predicate";
    case expr_kind::not_predicate: return "not_predicate";
    case expr_kind::reference: return "reference";
    case expr_kind::left_recursive: return "left_recursive";
    case expr_kind::precedence: return "precedence";
    case expr_kind::cluster: return "cluster";
    case expr_kind::capture: return "capture";
    case expr_kind::token: return "token";
    case expr_kind::memo: return "memo";
    case expr_kind::escape_left_block: return "escape";
    case expr_kind::trace: return "trace";
    }
    return "?";
}

expr_id grammar::rule_root(std::string_view name) const {
    for (const auto& [n, id] : rules)
        if (n == name)
            return id;
    return no_expr;
}

const std::string* grammar::rule_name_of(expr_id id) const {
    const auto i = static_cast<std::size_t>(id);
    if (i >= rule_of_node_.size() || rule_of_node_[i] < 0)
        return nullptr;
    return &rules[static_cast<std::size_t>(rule_of_node_[i])].first;
}

void grammar::reindex() {
    rule_of_node_.assign(nodes.size(), -1);
    // first (by rule order) name wins when several rules share a root node
    for (std::size_t r = rules.size(); r-- > 0;)
        rule_of_node_[static_cast<std::size_t>(rules[r].second)] = static_cast<std::int32_t>(r);
}

std::string escape_literal_text(std::u32string_view text) {
    std::string out;
    for (char32_t c : text) {
        switch (c) {
        case U'\'': out += "\\'"; break;
        case U'\\': out += "\\\\"; break;
        case U'\n': out += "\\n"; break;
        case U'\t': out += "\\t"; break;
        case U'\r': out += "\\r"; break;
        default: out += unicode::encode_utf8(c);
        }
    }
    return out;
}

std::string render_char_class(const std::vector<char_range>& ranges) {
    auto emit = [](std::string& out, char32_t c, bool last) {
        switch (c) {
        case U']': out += "\\]"; break;
        case U'\\': out += "\\\\"; break;
        case U'\n': out += "\\n"; break;
        case U'\t': out += "\\t"; break;
        case U'\r': out += "\\r"; break;
        case U'-':
            // literal '-' only unambiguous at the edges; emit last
            out += last ? "-" : "\\-";
            break;
        default: out += unicode::encode_utf8(c);
        }
    };
    std::string out = "[";
    bool dash = false;
    for (const auto& r : ranges) {
        if (r.lo == r.hi && r.lo == U'-') {
            dash = true;
            continue;
        }
        emit(out, r.lo, false);
        if (r.hi != r.lo) {
            out += '-';
            emit(out, r.hi, false);
        }
    }
    if (dash)
        out += '-';
    out += ']';
    return out;
}

std::string grammar::describe(expr_id id) const {
    if (const std::string* rn = rule_name_of(id))
        return *rn;
    const expression& e = node(id);
    switch (e.kind) {
    case expr_kind::literal: return "'" + escape_literal_text(e.text) + "'";
    case expr_kind::char_class: return render_char_class(e.ranges);
    case expr_kind::any_char: return ".";
    case expr_kind::reference: return "<ref " + e.name + ">";
    case expr_kind::token: return e.name.empty() ? "<token>" : e.name;
    case expr_kind::trace: return "<trace " + e.name + ">";
    default:
        return "<" + std::string(kind_name(e.kind)) + " #" + std::to_string(id) + ">";
    }
}

std::vector<expr_id> grammar::reachable() const {
    std::vector<char> seen(nodes.size(), 0);
    std::vector<expr_id> order;
    std::vector<expr_id> stack;
    if (whitespace)
        stack.push_back(*whitespace);
    for (const auto& [name, id] : rules)
        stack.push_back(id);
    // rules pushed in order; DFS from the last keeps output deterministic
    std::reverse(stack.begin(), stack.end());
    while (!stack.empty()) {
        const expr_id id = stack.back();
        stack.pop_back();
        auto& mark = seen[static_cast<std::size_t>(id)];
        if (mark)
            continue;
        mark = 1;
        order.push_back(id);
        const auto& kids = node(id).children;
        for (std::size_t i = kids.size(); i-- > 0;)
            stack.push_back(kids[i]);
    }
    return order;
}

grammar_builder::grammar_builder(grammar seed) : g_(std::move(seed)) {
    start_ = g_.root;
    if (g_.whitespace)
        whitespace_expr_ = *g_.whitespace;
}

expr_id grammar_builder::add(expression e) {
    e.id = static_cast<expr_id>(g_.nodes.size());
    for (expr_id c : e.children)
        require(c >= 0 && static_cast<std::size_t>(c) < g_.nodes.size(),
                "child id out of range in " + std::string(kind_name(e.kind)));
    g_.nodes.push_back(std::move(e));
    return g_.nodes.back().id;
}

expr_id grammar_builder::literal(std::string_view utf8_text) {
    return literal_scalars(unicode::decode_utf8(utf8_text));
}

expr_id grammar_builder::literal_scalars(std::u32string text) {
    expression e;
    e.kind = expr_kind::literal;
    e.text = std::move(text);
    return add(std::move(e));
}

expr_id grammar_builder::char_class(std::vector<char_range> ranges) {
    require(!ranges.empty(), "char class needs at least one range");
    for (const auto& r : ranges)
        require(r.lo <= r.hi, "char class range out of order");
    expression e;
    e.kind = expr_kind::char_class;
    e.ranges = std::move(ranges);
    return add(std::move(e));
}

expr_id grammar_builder::any_char() {
    expression e;
    e.kind = expr_kind::any_char;
    return add(std::move(e));
}

expr_id grammar_builder::sequence(std::vector<expr_id> children) {
    expression e;
    e.kind = expr_kind::sequence;
    e.children = std::move(children);
    return add(std::move(e));
}

expr_id grammar_builder::choice(std::vector<expr_id> children) {
    require(!children.empty(), "choice needs at least one alternative");
    expression e;
    e.kind = expr_kind::choice;
    e.children = std::move(children);
    return add(std::move(e));
}

static expression unary(expr_kind k, expr_id operand) {
    expression e;
    e.kind = k;
    e.children = {operand};
    return e;
}

expr_id grammar_builder::zero_or_more(expr_id x) { return add(unary(expr_kind::zero_or_more, x)); }
expr_id grammar_builder::one_or_more(expr_id x) { return add(unary(expr_kind::one_or_more, x)); }
expr_id grammar_builder::option(expr_id x) { return add(unary(expr_kind::option, x)); }
expr_id grammar_builder::and_predicate(expr_id x) { return add(unary(expr_kind::and_predicate, x)); }
expr_id grammar_builder::not_predicate(expr_id x) { return add(unary(expr_kind::not_predicate, x)); }
expr_id grammar_builder::escape(expr_id x) { return add(unary(expr_kind::escape_left_block, x)); }

expr_id grammar_builder::reference(std::string rule_name) {
    require(!rule_name.empty(), "reference needs a rule name");
    expression e;
    e.kind = expr_kind::reference;
    e.name = std::move(rule_name);
    return add(std::move(e));
}

expr_id grammar_builder::left_recursive(expr_id operand, bool left_associative) {
    expression e = unary(expr_kind::left_recursive, operand);
    e.left_associative = left_associative;
    return add(std::move(e));
}

expr_id grammar_builder::precedence(int level, expr_id operand) {
    require(level >= 0, "precedence level must be >= 0");
    expression e = unary(expr_kind::precedence, operand);
    e.level = level;
    return add(std::move(e));
}

expr_id grammar_builder::cluster(std::vector<cluster_group> groups) {
    require(!groups.empty(), "cluster needs at least one group");
    std::stable_sort(groups.begin(), groups.end(),
                     [](const cluster_group& a, const cluster_group& b) { return a.precedence > b.precedence; });
    expression e;
    e.kind = expr_kind::cluster;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const auto& g = groups[i];
        require(g.precedence >= 1, "cluster group precedence must be >= 1");
        require(!g.ops.empty(), "cluster group needs at least one alternate");
        require(i == 0 || groups[i - 1].precedence > g.precedence,
                "cluster group precedences must be distinct");
        e.groups.push_back({g.precedence, g.left_associative, static_cast<int>(g.ops.size())});
        e.children.insert(e.children.end(), g.ops.begin(), g.ops.end());
    }
    return add(std::move(e));
}

expr_id grammar_builder::cluster_of(const std::vector<cluster_alternate>& alternates) {
    require(!alternates.empty(), "cluster needs at least one alternate");
    std::vector<cluster_group> groups;
    int level = 0;
    for (std::size_t i = 0; i < alternates.size(); ++i) {
        const auto& alt = alternates[i];
        require(alt.increments >= 0, "negative @+ count");
        level += alt.increments;
        require(level >= 1, "cluster alternate at precedence 0: the first alternate needs a @+");
        if (alt.increments > 0 || groups.empty()) {
            groups.push_back({level, alt.left_recur, {alt.expr}});
        } else {
            require(!alt.left_recur || groups.back().left_associative,
                    "associativity must be declared on the first alternate of a precedence level");
            groups.back().ops.push_back(alt.expr);
        }
    }
    return cluster(std::move(groups));
}

expr_id grammar_builder::capture(std::string name, expr_id operand, bool record) {
    require(!name.empty(), "capture needs a node name");
    expression e = unary(expr_kind::capture, operand);
    e.name = std::move(name);
    e.record_text = record;
    return add(std::move(e));
}

expr_id grammar_builder::token(std::string label, expr_id operand) {
    expression e = unary(expr_kind::token, operand);
    e.name = std::move(label);
    return add(std::move(e));
}

expr_id grammar_builder::memo(expr_id operand, std::string selector) {
    expression e = unary(expr_kind::memo, operand);
    e.name = std::move(selector);
    return add(std::move(e));
}

expr_id grammar_builder::trace(std::string label, expr_id operand) {
    expression e = unary(expr_kind::trace, operand);
    e.name = std::move(label);
    return add(std::move(e));
}

void grammar_builder::rule(std::string name, expr_id root) {
    require(!name.empty(), "rule needs a name");
    require(g_.rule_root(name) == no_expr, "duplicate rule '" + name + "'");
    require(root >= 0 && static_cast<std::size_t>(root) < g_.nodes.size(), "rule body id out of range");
    g_.rules.emplace_back(std::move(name), root);
}

grammar grammar_builder::build() {
    require(!g_.rules.empty(), "grammar needs at least one rule");
    g_.root = start_.empty() ? g_.rules.front().first : start_;
    require(g_.rule_root(g_.root) != no_expr, "start rule '" + g_.root + "' is not defined");
    if (whitespace_expr_ != no_expr) {
        g_.whitespace = whitespace_expr_;
    } else if (!whitespace_rule_.empty()) {
        const expr_id ws = g_.rule_root(whitespace_rule_);
        require(ws != no_expr, "whitespace rule '" + whitespace_rule_ + "' is not defined");
        g_.whitespace = ws;
    }
    g_.reindex();
    return std::move(g_);
}

} // namespace peg
