#include "peg/dsl.hpp"

#include "peg/engine.hpp"
#include "peg/unicode.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace peg {

namespace {

// ---------------------------------------------------------------------------
// Bootstrap grammar for .peg files.
//
//   grammar := directive* rule+ ; directive := "%start" NAME | "%whitespace" NAME
//   rule := NAME "=" (clusterBody | choice) ";"
//   clusterBody := "expr" ("->" sequence annotation*)+ ; annotation := "@+" | "@left_recur"
//   choice := sequence ("|" sequence)* ; sequence := prefixed+
//   prefixed := ("&" | "!")? suffixed ; suffixed := primary ("*" | "+" | "?")? capture?
//   capture := ":" NAME "$"?
//   primary := NAME | STRING | CHARCLASS | "." | "(" choice ")" | %token(...) | %memo(...)
//            | %left_recur(...) | %left_assoc(...) | %escape(...) | %precedence(INT, ...)
//
// NAME = [A-Za-z_][A-Za-z0-9_]*, INT = [0-9]+, comments run from '#' to end of
// line. Every construct carries a capture so the loader can work off the
// syntax tree alone.

const grammar& boot_grammar() {
    static const grammar g = [] {
        grammar_builder b;

        auto cls = [&](std::vector<char_range> rs) { return b.char_class(std::move(rs)); };
        auto tok = [&](std::string_view text) {
            return b.token("'" + std::string(text) + "'", b.literal(text));
        };

        const expr_id ws_char = cls({{U' ', U' '}, {U'\t', U'\t'}, {U'\r', U'\r'}, {U'\n', U'\n'}});
        const expr_id comment = b.sequence(
            {b.literal("#"),
             b.zero_or_more(b.sequence({b.not_predicate(cls({{U'\n', U'\n'}})), b.any_char()}))});
        const expr_id ws = b.zero_or_more(b.choice({ws_char, comment}));
        b.whitespace_expr(ws);

        const expr_id name_tok = b.token(
            "name", b.sequence({cls({{U'A', U'Z'}, {U'a', U'z'}, {U'_', U'_'}}),
                                b.zero_or_more(cls({{U'A', U'Z'}, {U'a', U'z'}, {U'0', U'9'}, {U'_', U'_'}}))}));
        const expr_id name_node = b.capture("name", name_tok, true);
        const expr_id int_node =
            b.capture("int", b.token("integer", b.one_or_more(cls({{U'0', U'9'}}))), true);

        const expr_id escape_pair = b.sequence({b.literal("\\"), b.any_char()});
        const expr_id str_node = b.capture(
            "str",
            b.token("string",
                    b.sequence({b.literal("'"),
                                b.zero_or_more(b.choice(
                                    {escape_pair,
                                     b.sequence({b.not_predicate(cls({{U'\'', U'\''}})), b.any_char()})})),
                                b.literal("'")})),
            true);
        const expr_id class_node = b.capture(
            "class",
            b.token("character class",
                    b.sequence({b.literal("["),
                                b.zero_or_more(b.choice(
                                    {escape_pair,
                                     b.sequence({b.not_predicate(cls({{U']', U']'}})), b.any_char()})})),
                                b.literal("]")})),
            true);

        const expr_id choice_ref = b.reference("choice");
        auto wrapped = [&](const char* node_name, std::string_view keyword) {
            return b.capture(node_name,
                             b.sequence({tok(keyword), tok("("), choice_ref, tok(")")}));
        };
        const expr_id prec_form = b.capture(
            "prec", b.sequence({tok("%precedence"), tok("("), int_node, tok(","), choice_ref, tok(")")}));
        const expr_id paren = b.sequence({tok("("), choice_ref, tok(")")});
        const expr_id primary = b.choice({str_node, class_node, b.capture("any", tok(".")),
                                          wrapped("tok", "%token"), wrapped("memo", "%memo"),
                                          wrapped("lrec", "%left_recur"),
                                          wrapped("lassoc", "%left_assoc"),
                                          wrapped("esc", "%escape"), prec_form, paren,
                                          b.capture("ref", name_tok, true)});

        const expr_id suffix = b.choice(
            {b.capture("star", tok("*")), b.capture("plus", tok("+")), b.capture("opt", tok("?"))});
        const expr_id capann = b.capture(
            "cap", b.sequence({tok(":"), name_node, b.option(b.capture("rec", tok("$")))}));
        const expr_id item =
            b.capture("item", b.sequence({primary, b.option(suffix), b.option(capann)}));

        const expr_id prefixed =
            b.choice({b.capture("pand", b.sequence({tok("&"), item})),
                      b.capture("pnot", b.sequence({tok("!"), item})), item});
        const expr_id seq_node = b.capture("seq", b.one_or_more(prefixed));
        const expr_id choice_node = b.capture(
            "choice", b.sequence({seq_node, b.zero_or_more(b.sequence({tok("|"), seq_node}))}));
        b.rule("choice", choice_node);

        const expr_id arm = b.capture(
            "arm", b.sequence({tok("->"), seq_node,
                               b.zero_or_more(b.choice({b.capture("inc", tok("@+")),
                                                        b.capture("leftrec", tok("@left_recur"))}))}));
        const expr_id cluster_node =
            b.capture("cluster", b.sequence({tok("expr"), b.one_or_more(arm)}));

        const expr_id rule_node = b.capture(
            "rule", b.sequence({name_node, tok("="), b.choice({cluster_node, choice_node}), tok(";")}));
        const expr_id directive = b.choice({b.capture("start", b.sequence({tok("%start"), name_node})),
                                            b.capture("wsdir", b.sequence({tok("%whitespace"), name_node}))});

        // leading whitespace is skipped by an empty token so stray "expected
        // whitespace" labels stay out of syntax error reports
        const expr_id leading_ws = b.token("start of file", b.literal(""));
        const expr_id root = b.capture(
            "grammar", b.sequence({leading_ws, b.zero_or_more(directive), b.one_or_more(rule_node),
                                   b.not_predicate(b.any_char())}));
        b.rule("grammar", root);
        b.start("grammar");
        return prepare(b.build());
    }();
    return g;
}

// ---------------------------------------------------------------------------
// Loader: walks the bootstrap syntax tree and builds the user's grammar.

struct dsl_loader {
    const std::u32string& source;
    grammar_builder b;
    std::string current_rule;

    [[noreturn]] void fail(const syntax_node& at, const std::string& message) const {
        const auto pos = unicode::position_at(source, at.span_start);
        throw grammar_error("error at " + std::to_string(pos.line) + ":" + std::to_string(pos.column) +
                            ": " + message);
    }

    std::u32string scalars(const syntax_node& n) const {
        return unicode::decode_utf8(n.text.value_or(""));
    }

    char32_t unescape(const syntax_node& at, char32_t c) const {
        switch (c) {
        case U'\'': return U'\'';
        case U'\\': return U'\\';
        case U'n': return U'\n';
        case U't': return U'\t';
        case U'r': return U'\r';
        case U']': return U']';
        case U'-': return U'-';
        default: fail(at, "unknown escape '\\" + unicode::encode_utf8(c) + "'");
        }
    }

    std::u32string string_text(const syntax_node& n) const {
        const std::u32string raw = scalars(n);
        std::u32string out;
        for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
            if (raw[i] == U'\\' && i + 2 < raw.size())
                out.push_back(unescape(n, raw[++i]));
            else
                out.push_back(raw[i]);
        }
        return out;
    }

    std::vector<char_range> class_ranges(const syntax_node& n) const {
        const std::u32string raw = scalars(n);
        std::vector<char_range> out;
        std::size_t i = 1;
        const std::size_t end = raw.size() - 1; // strip brackets
        auto next = [&]() -> char32_t {
            const char32_t c = raw[i++];
            if (c == U'\\' && i < end)
                return unescape(n, raw[i++]);
            return c;
        };
        while (i < end) {
            const char32_t lo = next();
            // 'a-z' is a range unless the dash is the last character
            if (i < end && raw[i] == U'-' && i + 1 < end) {
                ++i;
                const char32_t hi = next();
                if (lo > hi)
                    fail(n, "character class range out of order");
                out.push_back({lo, hi});
            } else {
                out.push_back({lo, lo});
            }
        }
        if (out.empty())
            fail(n, "empty character class");
        return out;
    }

    expr_id build(const syntax_node& n) {
        const std::string& k = n.name;
        if (k == "choice") {
            if (n.children.size() == 1)
                return build(*n.children.front());
            std::vector<expr_id> alts;
            for (const node_ptr& c : n.children)
                alts.push_back(build(*c));
            return b.choice(std::move(alts));
        }
        if (k == "seq") {
            if (n.children.size() == 1)
                return build(*n.children.front());
            std::vector<expr_id> parts;
            for (const node_ptr& c : n.children)
                parts.push_back(build(*c));
            return b.sequence(std::move(parts));
        }
        if (k == "item") {
            expr_id id = build(*n.children.front());
            for (std::size_t i = 1; i < n.children.size(); ++i) {
                const syntax_node& m = *n.children[i];
                if (m.name == "star")
                    id = b.zero_or_more(id);
                else if (m.name == "plus")
                    id = b.one_or_more(id);
                else if (m.name == "opt")
                    id = b.option(id);
                else if (m.name == "cap")
                    id = b.capture(*m.children.front()->text, id, m.children.size() > 1);
            }
            return id;
        }
        if (k == "pand")
            return b.and_predicate(build(*n.children.front()));
        if (k == "pnot")
            return b.not_predicate(build(*n.children.front()));
        if (k == "ref")
            return b.reference(*n.text);
        if (k == "str")
            return b.literal_scalars(string_text(n));
        if (k == "class")
            return b.char_class(class_ranges(n));
        if (k == "any")
            return b.any_char();
        if (k == "tok")
            return b.token(current_rule, build(*n.children.front()));
        if (k == "memo")
            return b.memo(build(*n.children.front()));
        if (k == "lrec")
            return b.left_recursive(build(*n.children.front()), false);
        if (k == "lassoc")
            return b.left_recursive(build(*n.children.front()), true);
        if (k == "esc")
            return b.escape(build(*n.children.front()));
        if (k == "prec") {
            const syntax_node& level = *n.children.front();
            int value = 0;
            try {
                value = std::stoi(*level.text);
            } catch (const std::exception&) {
                fail(level, "precedence level out of range");
            }
            return b.precedence(value, build(*n.children[1]));
        }
        if (k == "cluster") {
            std::vector<grammar_builder::cluster_alternate> alts;
            for (const node_ptr& arm : n.children) {
                grammar_builder::cluster_alternate alt;
                alt.expr = build(*arm->children.front());
                for (std::size_t i = 1; i < arm->children.size(); ++i) {
                    if (arm->children[i]->name == "inc")
                        ++alt.increments;
                    else
                        alt.left_recur = true;
                }
                alts.push_back(alt);
            }
            try {
                return b.cluster_of(alts);
            } catch (const grammar_error& e) {
                fail(n, e.what());
            }
        }
        fail(n, "unexpected node '" + k + "' in grammar tree");
    }
};

} // namespace

grammar load_grammar(std::string_view text, load_report* report) {
    static const parser boot(boot_grammar());
    std::u32string scalars = unicode::decode_utf8(text);

    parse_session session(boot, scalars);
    const parse_outcome out = session.run_root();
    if (!out.ok)
        throw grammar_error("grammar " + session.report().render());

    dsl_loader loader{scalars, {}, {}};
    const syntax_node& root = *out.nodes.front();
    std::string start_rule, ws_rule;
    for (const node_ptr& child : root.children) {
        const syntax_node& n = *child;
        if (n.name == "start" || n.name == "wsdir") {
            std::string& slot = n.name == "start" ? start_rule : ws_rule;
            if (!slot.empty())
                loader.fail(n, "duplicate %" + std::string(n.name == "start" ? "start" : "whitespace") +
                                   " directive");
            slot = *n.children.front()->text;
        } else { // rule
            const syntax_node& name = *n.children.front();
            loader.current_rule = *name.text;
            const expr_id body = loader.build(*n.children[1]);
            try {
                loader.b.rule(loader.current_rule, body);
            } catch (const grammar_error& e) {
                loader.fail(name, e.what());
            }
        }
    }
    if (!start_rule.empty())
        loader.b.start(start_rule);
    grammar built = [&] {
        try {
            if (!ws_rule.empty())
                loader.b.whitespace(ws_rule);
            else if (loader.b.graph().rule_root("WS") != no_expr)
                loader.b.whitespace("WS");
            return loader.b.build();
        } catch (const grammar_error& e) {
            loader.fail(root, e.what());
        }
    }();

    prepare_report prep;
    grammar ready = prepare(built, &prep);
    if (report) {
        report->cycles = std::move(prep.cycles);
        report->auto_marked_rules = std::move(prep.breaks.wrapped_rules);
        report->auto_marked_nodes = std::move(prep.breaks.wrapped_nodes);
        report->warnings = std::move(prep.warnings);
    }
    return ready;
}

// ---------------------------------------------------------------------------
// Dumper.

namespace {

struct rendered {
    std::string text;
    int tier = 4; // 0 choice, 1 sequence, 2 prefixed, 3 suffixed, 4 primary
    bool has_capture = false;
};

struct dumper {
    const grammar& g;
    std::unordered_map<expr_id, std::string> names; // node -> rule name to print

    rendered paren(const rendered& r) const { return {"(" + r.text + ")", 4, false}; }

    rendered child(expr_id id) {
        auto it = names.find(id);
        if (it != names.end())
            return {it->second, 4, false};
        return structure(id);
    }

    rendered structure(expr_id id) {
        const expression& e = g.node(id);
        auto unary_child = [&](int min_tier) {
            rendered r = child(e.child());
            return r.tier < min_tier ? paren(r) : r;
        };
        switch (e.kind) {
        case expr_kind::literal:
            return {"'" + escape_literal_text(e.text) + "'", 4, false};
        case expr_kind::char_class:
            return {render_char_class(e.ranges), 4, false};
        case expr_kind::any_char:
            return {".", 4, false};
        case expr_kind::reference:
            return {e.name, 4, false};
        case expr_kind::sequence: {
            if (e.children.empty())
                return {"''", 4, false}; // no DSL form; normalized to the empty literal
            if (e.children.size() == 1)
                return child(e.children.front());
            std::string out;
            for (expr_id c : e.children) {
                rendered r = child(c);
                if (r.tier < 2)
                    r = paren(r);
                if (!out.empty())
                    out += ' ';
                out += r.text;
            }
            return {std::move(out), 1, false};
        }
        case expr_kind::choice: {
            if (e.children.size() == 1)
                return child(e.children.front());
            std::string out;
            for (expr_id c : e.children) {
                rendered r = child(c);
                if (r.tier < 1)
                    r = paren(r);
                if (!out.empty())
                    out += " | ";
                out += r.text;
            }
            return {std::move(out), 0, false};
        }
        case expr_kind::zero_or_more:
        case expr_kind::one_or_more:
        case expr_kind::option: {
            rendered r = child(e.child());
            if (r.tier < 4)
                r = paren(r);
            const char suffix = e.kind == expr_kind::zero_or_more ? '*'
                                : e.kind == expr_kind::one_or_more ? '+'
                                                                   : '?';
            return {r.text + suffix, 3, false};
        }
        case expr_kind::and_predicate:
        case expr_kind::not_predicate: {
            rendered r = unary_child(3);
            return {(e.kind == expr_kind::and_predicate ? "&" : "!") + r.text, 2, false};
        }
        case expr_kind::capture: {
            rendered r = child(e.child());
            if (r.tier < 3 || r.has_capture)
                r = paren(r);
            return {r.text + " :" + e.name + (e.record_text ? "$" : ""), 3, true};
        }
        case expr_kind::left_recursive:
            return {(e.left_associative ? "%left_assoc(" : "%left_recur(") +
                        child(e.child()).text + ")",
                    4, false};
        case expr_kind::precedence:
            return {"%precedence(" + std::to_string(e.level) + ", " + child(e.child()).text +
                        ")",
                    4, false};
        case expr_kind::token:
            return {"%token(" + child(e.child()).text + ")", 4, false};
        case expr_kind::memo:
            return {"%memo(" + child(e.child()).text + ")", 4, false};
        case expr_kind::escape_left_block:
            return {"%escape(" + child(e.child()).text + ")", 4, false};
        case expr_kind::trace:
            return child(e.child()); // no DSL form
        case expr_kind::cluster:
            break; // handled by rule_body
        }
        return {"''", 4, false};
    }

    std::string cluster_body(const expression& e) {
        std::string out = "expr";
        int prev_level = 0;
        for (std::size_t gi = e.groups.size(); gi-- > 0;) {
            const cluster_level& group = e.groups[gi];
            const auto ops = e.group_ops(gi);
            for (std::size_t oi = 0; oi < ops.size(); ++oi) {
                rendered r = child(ops[oi]);
                if (r.tier < 1)
                    r = paren(r);
                out += "\n    -> " + r.text;
                if (oi == 0) {
                    for (int k = prev_level; k < group.precedence; ++k)
                        out += " @+";
                    if (group.left_associative)
                        out += " @left_recur";
                }
            }
            prev_level = group.precedence;
        }
        return out;
    }

    std::string rule_body(expr_id id) {
        const expression& e = g.node(id);
        if (e.kind == expr_kind::cluster)
            return cluster_body(e);
        return structure(id).text;
    }
};

} // namespace

std::string dump_grammar(const grammar& g) {
    dumper d{g, {}};

    // nodes referenced more than once (or cyclically) need a name of their own;
    // clusters are only expressible as whole rule bodies
    std::unordered_map<expr_id, int> indegree;
    const std::vector<expr_id> order = g.reachable();
    for (expr_id id : order)
        for (expr_id c : g.node(id).children)
            ++indegree[c];

    std::vector<std::pair<std::string, expr_id>> to_dump;
    std::unordered_set<expr_id> named;
    std::unordered_map<expr_id, std::vector<std::string>> aliases;
    for (const auto& [name, id] : g.rules)
        aliases[id].push_back(name);
    // when several rules share one root (aliases collapsed by resolution),
    // print the body under the name a reload would re-derive as token label
    auto pick_owner = [&](expr_id id) -> std::string {
        const auto& candidates = aliases.at(id);
        expr_id w = id;
        for (int guard = 0; guard < 64; ++guard) {
            const expression& e = g.node(w);
            if (e.kind == expr_kind::token) {
                for (const auto& c : candidates)
                    if (c == e.name)
                        return c;
                break;
            }
            if (e.kind == expr_kind::capture || e.kind == expr_kind::memo ||
                e.kind == expr_kind::trace)
                w = e.child();
            else
                break;
        }
        return candidates.front();
    };
    for (const auto& [name, id] : g.rules) {
        if (named.insert(id).second)
            d.names[id] = pick_owner(id);
        to_dump.emplace_back(name, id);
    }
    std::vector<expr_id> synthetic;
    for (expr_id id : order) {
        if (named.count(id))
            continue;
        const bool shared = indegree[id] > 1;
        const bool cluster_inside = g.node(id).kind == expr_kind::cluster;
        const bool is_ws = g.whitespace && *g.whitespace == id;
        if (shared || cluster_inside || is_ws)
            synthetic.push_back(id);
    }
    std::sort(synthetic.begin(), synthetic.end());
    for (expr_id id : synthetic) {
        std::string name = "_x" + std::to_string(id);
        while (g.has_rule(name))
            name += "_";
        d.names[id] = name;
        named.insert(id);
        to_dump.emplace_back(name, id);
    }

    std::string out = "%start " + g.root + "\n";
    if (g.whitespace)
        out += "%whitespace " + d.names.at(*g.whitespace) + "\n";
    std::unordered_set<expr_id> body_emitted;
    for (const auto& [name, id] : to_dump) {
        if (name == d.names.at(id) && body_emitted.insert(id).second)
            out += name + " = " + d.rule_body(id) + " ;\n";
        else
            out += name + " = " + d.names.at(id) + " ;\n"; // alias rule
    }
    return out;
}

} // namespace peg
