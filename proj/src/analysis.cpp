#include "peg/analysis.hpp"

#include <algorithm>
#include <unordered_map>

namespace peg {

namespace {

// Name of a rule from whose root the given node is reachable (without the
// resolution done yet, references are leaves). Used for error attribution.
std::string containing_rule(const grammar& g, expr_id target) {
    for (const auto& [name, root] : g.rules) {
        std::vector<expr_id> stack{root};
        std::vector<char> seen(g.nodes.size(), 0);
        while (!stack.empty()) {
            const expr_id id = stack.back();
            stack.pop_back();
            if (seen[static_cast<std::size_t>(id)])
                continue;
            seen[static_cast<std::size_t>(id)] = 1;
            if (id == target)
                return name;
            for (expr_id c : g.node(id).children)
                stack.push_back(c);
        }
    }
    return "?";
}

} // namespace

grammar resolve_references(const grammar& g) {
    grammar out = g;
    // follow chains of pure-reference rules (A = B ; B = ...) to a real node
    auto resolve = [&](expr_id id) -> expr_id {
        std::vector<char> visiting(out.nodes.size(), 0);
        while (out.node(id).kind == expr_kind::reference) {
            const expression& ref = out.node(id);
            if (visiting[static_cast<std::size_t>(id)])
                throw grammar_error("reference cycle through rule '" + ref.name + "'");
            visiting[static_cast<std::size_t>(id)] = 1;
            const expr_id target = out.rule_root(ref.name);
            if (target == no_expr)
                throw grammar_error("unresolved reference " + ref.name + " in rule '" +
                                    containing_rule(g, id) + "'");
            id = target;
        }
        return id;
    };
    for (auto& e : out.nodes)
        for (auto& c : e.children)
            c = resolve(c);
    for (auto& [name, id] : out.rules)
        id = resolve(id);
    if (out.whitespace)
        out.whitespace = resolve(*out.whitespace);
    out.reindex();
    return out;
}

nullability_set compute_nullable(const grammar& g) {
    nullability_set ns;
    ns.nullable.assign(g.nodes.size(), false);
    const std::vector<expr_id> order = g.reachable();
    bool changed = true;
    while (changed) {
        changed = false;
        for (expr_id id : order) {
            if (ns.nullable[static_cast<std::size_t>(id)])
                continue;
            const expression& e = g.node(id);
            bool v = false;
            switch (e.kind) {
            case expr_kind::option:
            case expr_kind::zero_or_more:
            case expr_kind::and_predicate:
            case expr_kind::not_predicate:
                v = true;
                break;
            case expr_kind::literal:
                v = e.text.empty();
                break;
            case expr_kind::char_class:
            case expr_kind::any_char:
                v = false;
                break;
            case expr_kind::sequence:
                v = std::all_of(e.children.begin(), e.children.end(),
                                [&](expr_id c) { return ns.contains(c); });
                break;
            case expr_kind::choice:
            case expr_kind::cluster:
                v = std::any_of(e.children.begin(), e.children.end(),
                                [&](expr_id c) { return ns.contains(c); });
                break;
            case expr_kind::one_or_more:
            case expr_kind::left_recursive:
            case expr_kind::precedence:
            case expr_kind::capture:
            case expr_kind::token:
            case expr_kind::memo:
            case expr_kind::escape_left_block:
            case expr_kind::trace:
                v = ns.contains(e.child());
                break;
            case expr_kind::reference:
                throw grammar_error("compute_nullable requires resolved references");
            }
            if (v) {
                ns.nullable[static_cast<std::size_t>(id)] = true;
                changed = true;
            }
        }
    }
    return ns;
}

namespace {

std::vector<expr_id> left_edges(const grammar& g, const nullability_set& nb, expr_id id,
                                bool through_markers) {
    const expression& e = g.node(id);
    switch (e.kind) {
    case expr_kind::literal:
    case expr_kind::char_class:
    case expr_kind::any_char:
    case expr_kind::and_predicate:
    case expr_kind::not_predicate:
        return {};
    case expr_kind::reference:
        throw grammar_error("detect_left_cycles requires resolved references");
    case expr_kind::sequence: {
        std::vector<expr_id> out;
        for (expr_id c : e.children) {
            out.push_back(c);
            if (!nb.contains(c))
                break;
        }
        return out;
    }
    case expr_kind::choice:
    case expr_kind::cluster:
        if (e.kind == expr_kind::cluster && !through_markers)
            return {};
        return e.children;
    case expr_kind::left_recursive:
        if (!through_markers)
            return {};
        return {e.child()};
    default:
        return {e.child()};
    }
}

struct tarjan {
    const grammar& g;
    const nullability_set& nb;
    bool through_markers;
    std::unordered_map<expr_id, int> index, low;
    std::unordered_map<expr_id, bool> on_stack;
    std::vector<expr_id> stack;
    int next = 0;
    std::vector<std::vector<expr_id>> components;

    void visit(expr_id v) {
        index[v] = low[v] = next++;
        stack.push_back(v);
        on_stack[v] = true;
        for (expr_id w : left_edges(g, nb, v, through_markers)) {
            if (!index.count(w)) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<expr_id> comp;
            expr_id w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
            } while (w != v);
            components.push_back(std::move(comp));
        }
    }
};

} // namespace

std::vector<std::vector<expr_id>> detect_left_cycles(const grammar& g, const nullability_set& nb,
                                                     bool through_markers) {
    tarjan t{g, nb, through_markers, {}, {}, {}, {}, 0, {}};
    for (expr_id id : g.reachable())
        if (!t.index.count(id))
            t.visit(id);
    std::vector<std::vector<expr_id>> cycles;
    for (auto& comp : t.components) {
        bool cyclic = comp.size() > 1;
        if (!cyclic) {
            const expr_id v = comp.front();
            const auto edges = left_edges(g, nb, v, through_markers);
            cyclic = std::find(edges.begin(), edges.end(), v) != edges.end();
        }
        if (cyclic) {
            std::sort(comp.begin(), comp.end());
            cycles.push_back(std::move(comp));
        }
    }
    std::sort(cycles.begin(), cycles.end());
    return cycles;
}

namespace {

bool has_marker(const grammar& g, const std::vector<expr_id>& cycle) {
    return std::any_of(cycle.begin(), cycle.end(), [&](expr_id id) {
        const expr_kind k = g.node(id).kind;
        return k == expr_kind::left_recursive || k == expr_kind::cluster;
    });
}

// Deterministic cycle-breaker choice: rule root with the smallest name, else
// the smallest id.
expr_id choose_break_node(const grammar& g, const std::vector<expr_id>& cycle) {
    expr_id best = no_expr;
    const std::string* best_name = nullptr;
    for (expr_id id : cycle) {
        if (const std::string* n = g.rule_name_of(id)) {
            if (!best_name || *n < *best_name) {
                best_name = n;
                best = id;
            }
        }
    }
    if (best != no_expr)
        return best;
    return *std::min_element(cycle.begin(), cycle.end());
}

void wrap_node(grammar& g, expr_id target, break_report* report) {
    expression wrapper;
    wrapper.id = static_cast<expr_id>(g.nodes.size());
    wrapper.kind = expr_kind::left_recursive;
    wrapper.children = {target};
    const expr_id wid = wrapper.id;
    g.nodes.push_back(std::move(wrapper));
    for (auto& e : g.nodes) {
        if (e.id == wid)
            continue;
        for (auto& c : e.children)
            if (c == target)
                c = wid;
    }
    bool was_rule = false;
    for (auto& [name, id] : g.rules) {
        if (id == target) {
            id = wid;
            if (report)
                report->wrapped_rules.push_back(name);
            was_rule = true;
        }
    }
    if (g.whitespace && *g.whitespace == target)
        g.whitespace = wid;
    if (report) {
        report->wrapped_nodes.push_back(wid);
        if (!was_rule)
            report->wrapped_rules.push_back(g.describe(target));
    }
    g.reindex();
}

} // namespace

grammar break_cycles(const grammar& g, const std::vector<std::vector<expr_id>>& cycles,
                     break_report* report) {
    grammar out = g;
    for (const auto& cycle : cycles)
        if (!has_marker(out, cycle))
            wrap_node(out, choose_break_node(out, cycle), report);
    // interleaved loops inside one component may need further markers
    for (;;) {
        const nullability_set nb = compute_nullable(out);
        const auto remaining = detect_left_cycles(out, nb, /*through_markers=*/false);
        if (remaining.empty())
            break;
        wrap_node(out, choose_break_node(out, remaining.front()), report);
    }
    return out;
}

grammar transform(const grammar& g, const rewrite_fn& rewrite) {
    // copy the reachable subgraph with fresh contiguous ids
    const std::vector<expr_id> order = g.reachable();
    std::unordered_map<expr_id, expr_id> remap;
    grammar copied;
    for (expr_id old : order) {
        expression e = g.node(old);
        e.id = static_cast<expr_id>(copied.nodes.size());
        remap[old] = e.id;
        copied.nodes.push_back(std::move(e));
    }
    for (auto& e : copied.nodes)
        for (auto& c : e.children)
            c = remap.at(c);
    for (const auto& [name, id] : g.rules)
        copied.rules.emplace_back(name, remap.at(id));
    copied.root = g.root;
    if (g.whitespace)
        copied.whitespace = remap.at(*g.whitespace);
    copied.reindex();

    // post-order over the copied graph; back edges of cycles are skipped so
    // every reachable node is rewritten exactly once
    std::vector<expr_id> postorder;
    {
        std::vector<char> color(copied.nodes.size(), 0); // 0 white, 1 gray, 2 black
        std::vector<std::pair<expr_id, std::size_t>> frames;
        auto enter = [&](expr_id id) {
            if (color[static_cast<std::size_t>(id)] == 0) {
                color[static_cast<std::size_t>(id)] = 1;
                frames.emplace_back(id, 0);
            }
        };
        std::vector<expr_id> roots;
        for (const auto& [name, id] : copied.rules)
            roots.push_back(id);
        if (copied.whitespace)
            roots.push_back(*copied.whitespace);
        for (expr_id root : roots) {
            enter(root);
            while (!frames.empty()) {
                auto& [id, next] = frames.back();
                const auto& kids = copied.node(id).children;
                if (next < kids.size()) {
                    enter(kids[next++]);
                } else {
                    color[static_cast<std::size_t>(id)] = 2;
                    postorder.push_back(id);
                    frames.pop_back();
                }
            }
        }
    }

    grammar_builder b(std::move(copied));
    for (expr_id id : postorder) {
        const std::size_t watermark = b.node_count();
        const expression snapshot = b.node(id); // node table may grow during rewrite
        expr_id repl;
        try {
            repl = rewrite(snapshot, b);
        } catch (const std::exception& ex) {
            throw grammar_error("transform visitor failed at node #" + std::to_string(id) + " (" +
                                b.graph().describe(id) + "): " + ex.what());
        }
        if (repl == id)
            continue;
        if (repl < 0 || static_cast<std::size_t>(repl) >= b.node_count())
            throw grammar_error("transform visitor returned an invalid node id");
        grammar& ng = b.graph();
        // nodes the visitor just built keep their edges to the original
        for (std::size_t i = 0; i < watermark; ++i)
            for (auto& c : ng.nodes[i].children)
                if (c == id)
                    c = repl;
        for (auto& [name, rid] : ng.rules)
            if (rid == id)
                rid = repl;
        if (ng.whitespace && *ng.whitespace == id)
            ng.whitespace = repl;
    }
    grammar out = std::move(b.graph());
    out.reindex();
    return out;
}

grammar prepare(const grammar& g, prepare_report* report) {
    grammar resolved = resolve_references(g);
    const nullability_set nb = compute_nullable(resolved);
    const auto cycles = detect_left_cycles(resolved, nb);
    if (report) {
        report->cycles = cycles;
        for (expr_id id : resolved.reachable()) {
            const expression& e = resolved.node(id);
            if ((e.kind == expr_kind::zero_or_more || e.kind == expr_kind::one_or_more) &&
                nb.contains(e.child()))
                report->warnings.push_back("repetition over a nullable expression at " +
                                           resolved.describe(id));
        }
    }
    return break_cycles(resolved, cycles, report ? &report->breaks : nullptr);
}

} // namespace peg
