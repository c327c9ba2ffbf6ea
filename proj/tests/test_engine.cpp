#include <doctest.h>

#include <peg/analysis.hpp>
#include <peg/engine.hpp>
#include <peg/unicode.hpp>

#include "oracles.hpp"
#include "random_grammar.hpp"

#include <any>

using namespace peg;

namespace {

grammar table_1a() {
    grammar_builder b;
    b.rule("N", b.char_class({{U'0', U'9'}}));
    b.rule("S", b.choice({b.sequence({b.reference("N"), b.literal("*"), b.reference("S")}),
                          b.sequence({b.reference("N"), b.literal("/"), b.reference("S")}),
                          b.reference("N")}));
    b.rule("E", b.choice({b.sequence({b.reference("S"), b.literal("+"), b.reference("E")}),
                          b.sequence({b.reference("S"), b.literal("-"), b.reference("E")}),
                          b.reference("S")}));
    b.start("E");
    return prepare(b.build());
}

grammar single(expr_id (*make)(grammar_builder&)) {
    grammar_builder b;
    b.rule("start", make(b));
    return prepare(b.build());
}

} // namespace

TEST_CASE("terminals") {
    grammar_builder b;
    const expr_id plus = b.literal("+");
    const expr_id digit = b.char_class({{U'0', U'9'}});
    const expr_id any = b.any_char();
    const expr_id empty = b.literal("");
    b.rule("start", b.choice({plus, digit, any, empty}));
    const parser p(prepare(b.build()));

    parse_session s(p, std::string_view("+7"));
    CHECK(s.invoke(plus, 0).ok);
    CHECK(s.invoke(plus, 0).end == 1);
    CHECK(!s.invoke(plus, 1).ok);
    CHECK(s.state().position == 1); // restored after failure
    CHECK(s.invoke(digit, 1).ok);
    CHECK(!s.invoke(digit, 0).ok);
    CHECK(s.invoke(any, 0).ok);
    SUBCASE("all fail at end of input except the empty literal") {
        CHECK(!s.invoke(plus, 2).ok);
        CHECK(!s.invoke(digit, 2).ok);
        CHECK(!s.invoke(any, 2).ok);
        const parse_outcome eps = s.invoke(empty, 2);
        CHECK(eps.ok);
        CHECK(eps.end == 2);
    }
}

TEST_CASE("composites") {
    SUBCASE("prioritized choice takes the first success") {
        const grammar g = single([](grammar_builder& b) {
            return b.choice({b.literal("ab"), b.literal("a")});
        });
        const auto r = parser(g).run("ab");
        CHECK(r.outcome.ok);
        CHECK(r.outcome.end == 2);
    }
    SUBCASE("zero_or_more is greedy") {
        const grammar g = single([](grammar_builder& b) { return b.zero_or_more(b.literal("a")); });
        const auto r = parser(g).run("aaab");
        CHECK(r.outcome.ok);
        CHECK(r.outcome.end == 3);
        CHECK(parser(g).run("").outcome.ok);
    }
    SUBCASE("one_or_more requires one match") {
        const grammar g = single([](grammar_builder& b) { return b.one_or_more(b.literal("a")); });
        CHECK(!parser(g).run("b").outcome.ok);
        CHECK(parser(g).run("aa").outcome.end == 2);
    }
    SUBCASE("sequence fails and backtracks wholly") {
        const grammar g = single([](grammar_builder& b) {
            return b.choice({b.sequence({b.literal("a"), b.literal("b"), b.literal("c")}),
                             b.literal("ab")});
        });
        const auto r = parser(g).run("abx");
        CHECK(r.outcome.ok);
        CHECK(r.outcome.end == 2); // second alternative, from position 0
    }
    SUBCASE("not-predicate at end of input") {
        const grammar g = single([](grammar_builder& b) { return b.not_predicate(b.any_char()); });
        const auto r = parser(g).run("");
        CHECK(r.outcome.ok);
        CHECK(r.outcome.end == 0);
        CHECK(!parser(g).run("x").outcome.ok);
    }
    SUBCASE("and-predicate consumes nothing and drops nodes") {
        const grammar g = single([](grammar_builder& b) {
            return b.and_predicate(b.capture("x", b.literal("a")));
        });
        const auto r = parser(g).run("a");
        CHECK(r.outcome.ok);
        CHECK(r.outcome.end == 0);
        CHECK(r.outcome.nodes.empty());
    }
    SUBCASE("zero-width repetition terminates") {
        const grammar g =
            single([](grammar_builder& b) { return b.zero_or_more(b.option(b.literal("a"))); });
        const auto r = parser(g).run("aab");
        CHECK(r.outcome.ok);
        CHECK(r.outcome.end == 2);
    }
}

TEST_CASE("parse_root") {
    const grammar g = table_1a();
    SUBCASE("single digit") {
        const auto r = parser(g).run("7");
        CHECK(r.outcome.ok);
        CHECK(r.outcome.end == 1);
    }
    SUBCASE("empty input fails") { CHECK(!parser(g).run("").outcome.ok); }
    SUBCASE("whole expression, checked against the reference recognizer") {
        oracle::layered_right ref{2, 2, {}, 0, {}};
        REQUIRE(ref.accepts(U"1+2*3"));
        const auto r = parser(g).run("1+2*3");
        CHECK(r.outcome.ok);
        CHECK(r.outcome.end == 5);
    }
    SUBCASE("full-match flag rejects prefixes") {
        parse_options opt;
        opt.full_match = true;
        CHECK(!parser(g, opt).run("1+2x").outcome.ok);
        CHECK(parser(g).run("1+2x").outcome.ok); // prefix match without the flag
    }
}

TEST_CASE("extensions") {
    const grammar g = table_1a();
    const parser p(g);
    parse_session s(p, std::string_view("1+2"));
    SUBCASE("write then read") {
        s.state().extensions.set("k", std::any(42));
        const std::any* v = s.state().extensions.find("k");
        REQUIRE(v);
        CHECK(std::any_cast<int>(*v) == 42);
    }
    SUBCASE("absent key") { CHECK(s.state().extensions.find("missing") == nullptr); }
    SUBCASE("expression-attached values are set at build time") {
        grammar_builder b;
        const expr_id lit = b.literal("x");
        b.extensions(lit).set("hint", std::any(std::string("terminal")));
        b.rule("start", lit);
        const grammar g2 = prepare(b.build());
        const std::any* v = g2.node(g2.rule_root("start")).extensions.find("hint");
        REQUIRE(v);
        CHECK(std::any_cast<std::string>(*v) == "terminal");
    }
}

TEST_CASE("trace events see the invoke nesting depth") {
    // a shadow depth counter maintained from enter/exit events must agree with
    // the engine's reported depth at every event
    grammar g = table_1a();
    parse_options opt;
    opt.trace_all = true;
    int shadow = 0;
    bool agreed = true;
    opt.trace_sink = [&](const trace_event& ev) {
        if (ev.ph == trace_event::phase::enter) {
            ++shadow;
            if (shadow != ev.depth)
                agreed = false;
        } else {
            if (shadow != ev.depth)
                agreed = false;
            --shadow;
        }
    };
    const parser p(std::move(g), opt);
    CHECK(p.run("1+2*3").outcome.ok);
    CHECK(agreed);
    CHECK(shadow == 0);
}

TEST_CASE("trace expressions emit events without trace_all") {
    grammar_builder b;
    b.rule("start", b.trace("probe", b.literal("ab")));
    grammar g = prepare(b.build());
    std::vector<std::string> seen;
    parse_options opt;
    opt.trace_sink = [&](const trace_event& ev) {
        seen.push_back(std::string(ev.label) + (ev.ph == trace_event::phase::enter ? "/enter"
                                                                                   : "/exit"));
    };
    const parser p(std::move(g), opt);
    CHECK(p.run("ab").outcome.ok);
    REQUIRE(seen.size() == 2); // only the trace node reports
    CHECK(seen[0] == "probe/enter");
    CHECK(seen[1] == "probe/exit");
}

TEST_CASE("single parse rule: re-invocation yields identical outcomes") {
    // property over random cluster-free grammars
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        testutil::grammar_gen gen(seed);
        const grammar g = gen.make();
        const parser p(g);
        const std::u32string input = gen.make_input(10);
        parse_session s(p, input);
        std::uniform_int_distribution<std::size_t> pos_at(0, input.size());
        std::uniform_int_distribution<std::size_t> node_at(0, g.nodes.size() - 1);
        for (int k = 0; k < 20; ++k) {
            const auto id = static_cast<expr_id>(node_at(gen.rng()));
            if (g.node(id).kind == expr_kind::reference)
                continue;
            const std::size_t pos = pos_at(gen.rng());
            const parse_outcome a = s.invoke(id, pos);
            const parse_outcome b = s.invoke(id, pos);
            REQUIRE(a.ok == b.ok);
            if (a.ok) {
                REQUIRE(a.end == b.end);
                REQUIRE(same_forest(a.nodes, b.nodes));
            }
            ++checked;
        }
    }
    CHECK(checked >= 1000);
}

TEST_CASE("backtracking totality") {
    // a failed invoke leaves position, seeds, blocked, precedences and
    // currentPrecedence exactly as at entry
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        testutil::grammar_gen gen(seed);
        const grammar g = gen.make();
        const parser p(g);
        const std::u32string input = gen.make_input(8);
        parse_session s(p, input);
        std::uniform_int_distribution<std::size_t> pos_at(0, input.size());
        std::uniform_int_distribution<std::size_t> node_at(0, g.nodes.size() - 1);
        for (int k = 0; k < 30; ++k) {
            const auto id = static_cast<expr_id>(node_at(gen.rng()));
            if (g.node(id).kind == expr_kind::reference)
                continue;
            const std::size_t pos = pos_at(gen.rng());
            const int prec_before = s.state().current_precedence;
            const parse_outcome out = s.invoke(id, pos);
            if (!out.ok)
                CHECK(s.state().position == pos);
            CHECK(s.state().current_precedence == prec_before);
            CHECK(s.state().seeds.empty());
            CHECK(s.state().blocked.empty());
            CHECK(s.state().precedences.empty());
        }
    }
}

TEST_CASE("conservation: sibling node spans are ordered and nested in the match") {
    for (std::uint64_t seed = 200; seed < 240; ++seed) {
        testutil::grammar_gen gen(seed);
        const grammar g = gen.make();
        const parser p(g);
        const parse_result r = p.run_scalars(gen.make_input(10));
        if (!r.outcome.ok)
            continue;
        struct walker {
            static void walk(const syntax_node& n) {
                std::size_t at = n.span_start;
                for (const node_ptr& c : n.children) {
                    CHECK(c->span_start >= at);
                    CHECK(c->span_end >= c->span_start);
                    CHECK(c->span_end <= n.span_end);
                    at = c->span_end;
                    walk(*c);
                }
            }
        };
        std::size_t at = 0;
        for (const node_ptr& n : r.outcome.nodes) {
            CHECK(n->span_start >= at);
            CHECK(n->span_end <= r.outcome.end);
            at = n->span_end;
            walker::walk(*n);
        }
    }
}

TEST_CASE("differential fuzz against the reference recognizer") {
    // prefix-match semantics: success and end position must agree with the
    // independent recursive-descent recognizer on arbitrary strings
    const grammar g = table_1a();
    const parser p(g);
    std::mt19937_64 rng(4242);
    static constexpr char32_t alphabet[] = U"0123456789+-*/xy";
    std::uniform_int_distribution<std::size_t> len(0, 14);
    std::uniform_int_distribution<std::size_t> at(0, std::size(alphabet) - 2);
    std::uniform_int_distribution<int> digit_heavy(0, 1);
    for (int i = 0; i < 2000; ++i) {
        std::u32string input;
        const std::size_t n = len(rng);
        const bool heavy = digit_heavy(rng) == 1;
        for (std::size_t k = 0; k < n; ++k) {
            char32_t c = alphabet[at(rng)];
            if (heavy && k % 2 == 0)
                c = static_cast<char32_t>(U'0' + (at(rng) % 10));
            input.push_back(c);
        }
        oracle::layered_right ref{2, 2, input, 0, {}};
        const auto expected = ref.parse_rule(1, 0);
        const parse_result r = p.run_scalars(input);
        REQUIRE(r.outcome.ok == expected.has_value());
        if (expected)
            REQUIRE(r.outcome.end == *expected);
    }
}

TEST_CASE("invocation counters are always on") {
    const grammar g = table_1a();
    const auto r = parser(g).run("7");
    const expr_id digit = g.rule_root("N");
    CHECK(r.stats.by_expr[static_cast<std::size_t>(digit)] == 9); // (P+1)^L with L=P=2
    CHECK(r.stats.total > 0);
}
