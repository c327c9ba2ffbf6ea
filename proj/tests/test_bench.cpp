#include <doctest.h>

#include <peg/analysis.hpp>
#include <peg/bench.hpp>
#include <peg/dsl.hpp>
#include <peg/tree.hpp>

#include "graph_iso.hpp"
#include "oracles.hpp"

using namespace peg;

namespace {

std::uint64_t digit_count(const bench_config& cfg, std::u32string_view input) {
    return run_bench(cfg, input, 1).digit_invocations;
}

} // namespace

TEST_CASE("generated layered-right grammars reproduce the exponential blowup") {
    // validated against the brute-force counting oracle first
    for (int levels = 1; levels <= 3; ++levels)
        for (int ops = 1; ops <= 3; ++ops) {
            const std::uint64_t expected = oracle::digit_attempts_single_digit(levels, ops);
            // closed form
            std::uint64_t closed = 1;
            for (int i = 0; i < levels; ++i)
                closed *= static_cast<std::uint64_t>(ops + 1);
            REQUIRE(expected == closed);
            bench_config cfg{levels, ops, grammar_style::layered_right, false, false, true};
            CHECK(digit_count(cfg, U"7") == expected);
        }
}

TEST_CASE("cluster grammars touch the digit matcher twice on a single digit") {
    for (int levels = 1; levels <= 4; ++levels)
        for (int ops = 1; ops <= 4; ++ops) {
            bench_config cfg{levels, ops, grammar_style::cluster, false, false, true};
            const std::uint64_t n = digit_count(cfg, U"7");
            CHECK(n == 2);
            CHECK(n <= static_cast<std::uint64_t>(ops * levels + 1));
        }
}

TEST_CASE("marking the operator sequences instead of the rules stays exponential") {
    // layered-left with the LeftRecursive wrapper on each op sequence: every
    // wrapper re-parses the k-1 sibling alternatives (its own seed blocks only
    // itself, and sibling seeds are discarded on exit), so a single digit
    // costs T(P)^L digit matches with T(k) = k*T(k-1) + 1, T(0) = 1
    auto wrong_marking = [](int levels, int ops) {
        static constexpr char32_t op_chars[] = U"+-*/%^&|~";
        peg::grammar_builder b;
        const expr_id digit = b.char_class({{U'0', U'9'}});
        b.rule("num", digit);
        for (int level = levels; level >= 1; --level) {
            const std::string name = "e" + std::to_string(level);
            const std::string below = level == levels ? "num" : "e" + std::to_string(level + 1);
            std::vector<expr_id> alts;
            for (int i = 0; i < ops; ++i) {
                const char32_t op = op_chars[(level - 1) * ops + i];
                alts.push_back(b.left_recursive(
                    b.sequence({b.reference(name), b.literal_scalars({op}), b.reference(below)})));
            }
            alts.push_back(b.reference(below));
            b.rule(name, b.choice(std::move(alts)));
        }
        b.start("e1");
        return prepare(b.build());
    };
    for (int levels = 1; levels <= 3; ++levels)
        for (int ops = 1; ops <= 3; ++ops) {
            std::uint64_t per_level = 1;
            for (int k = 1; k <= ops; ++k)
                per_level = static_cast<std::uint64_t>(k) * per_level + 1;
            std::uint64_t expected = 1;
            for (int i = 0; i < levels; ++i)
                expected *= per_level;

            grammar g = wrong_marking(levels, ops);
            const expr_id digit = g.rule_root("num");
            parse_options opt;
            opt.full_match = true;
            const parse_result r = parser(std::move(g), opt).run("7");
            REQUIRE(r.outcome.ok);
            CHECK(r.stats.by_expr[static_cast<std::size_t>(digit)] == expected);
        }
    // rule-root marking is what the generator's layered-left style does, and
    // it stays linear on the same grid
    for (int levels = 1; levels <= 3; ++levels)
        for (int ops = 1; ops <= 3; ++ops) {
            bench_config cfg{levels, ops, grammar_style::layered_left, false, false, true};
            CHECK(digit_count(cfg, U"7") <= static_cast<std::uint64_t>(2 * levels * ops + 2));
        }
}

TEST_CASE("full memoization collapses the layered-right count") {
    for (int levels = 1; levels <= 4; ++levels) {
        bench_config cfg{levels, 3, grammar_style::layered_right, true, false, true};
        CHECK(digit_count(cfg, U"7") <= static_cast<std::uint64_t>(2 * levels * 3 + 2));
    }
}

TEST_CASE("all four styles accept the same sample strings") {
    const char32_t* samples[] = {U"1",      U"1+2",   U"1+2*3", U"8-3-2", U"2/3/4", U"1*",
                                 U"+1",     U"",      U"12",    U"1-2+3", U"9*8+7", U"5/4-3*2+1"};
    for (const char32_t* s : samples) {
        oracle::layered_right ref{2, 2, {}, 0, {}};
        const bool expected = ref.accepts(s);
        for (grammar_style style : {grammar_style::layered_right, grammar_style::idiomatic,
                                    grammar_style::layered_left, grammar_style::cluster}) {
            bench_config cfg{2, 2, style, false, false, true};
            generated_grammar gen = generate_grammar(cfg);
            parse_options opt;
            opt.full_match = true;
            const parser p(std::move(gen.g), opt);
            CHECK_MESSAGE(p.run_scalars(s).outcome.ok == expected, style_name(style));
        }
    }
}

TEST_CASE("generated tree shapes") {
    auto tree = [](grammar_style style, bool cluster_left, const char32_t* input) {
        bench_config cfg{1, 1, style, false, true, cluster_left};
        generated_grammar gen = generate_grammar(cfg);
        parse_options opt;
        opt.full_match = true;
        const parse_result r = parser(std::move(gen.g), opt).run_scalars(input);
        REQUIRE(r.outcome.ok);
        return to_sexpr(r.outcome.nodes);
    };
    SUBCASE("layered-right chains right") {
        CHECK(tree(grammar_style::layered_right, true, U"1+2+3") ==
              "(op (num) (op (num) (num)))");
    }
    SUBCASE("layered-left chains left") {
        CHECK(tree(grammar_style::layered_left, true, U"1+2+3") ==
              "(op (op (num) (num)) (num))");
    }
    SUBCASE("cluster follows the group associativity") {
        CHECK(tree(grammar_style::cluster, true, U"1+2+3") == "(op (op (num) (num)) (num))");
        CHECK(tree(grammar_style::cluster, false, U"1+2+3") == "(op (num) (op (num) (num)))");
    }
}

TEST_CASE("generated shapes mirror the table grammars at L=P=2") {
    SUBCASE("layered-right: per-level choice of op-sequences plus fallthrough") {
        generated_grammar gen =
            generate_grammar({2, 2, grammar_style::layered_right, false, false, true});
        const grammar& g = gen.g;
        for (const char* rule : {"e1", "e2"}) {
            const expression& root = g.node(g.rule_root(rule));
            REQUIRE(root.kind == expr_kind::choice);
            REQUIRE(root.children.size() == 3); // P op alternates + fallthrough
            for (int i = 0; i < 2; ++i) {
                const expression& alt = g.node(root.children[static_cast<std::size_t>(i)]);
                REQUIRE(alt.kind == expr_kind::sequence);
                REQUIRE(alt.children.size() == 3);
                CHECK(g.node(alt.children[1]).kind == expr_kind::literal);
                CHECK(alt.children[2] == root.id); // right recursion into the same level
            }
        }
        // operators land level-major: e1 gets + and -, e2 gets * and /
        const expression& e1 = g.node(g.rule_root("e1"));
        CHECK(g.node(g.node(e1.children[0]).children[1]).text == U"+");
        CHECK(g.node(g.node(e1.children[1]).children[1]).text == U"-");
        const expression& e2 = g.node(g.rule_root("e2"));
        CHECK(g.node(g.node(e2.children[0]).children[1]).text == U"*");
        CHECK(g.node(g.node(e2.children[1]).children[1]).text == U"/");
        CHECK(g.node(g.rule_root("num")).kind == expr_kind::char_class);
    }
    SUBCASE("cluster: one group per level plus the atom group") {
        generated_grammar gen = generate_grammar({2, 2, grammar_style::cluster, false, false, true});
        const expression& root = gen.g.node(gen.g.rule_root("e1"));
        REQUIRE(root.kind == expr_kind::cluster);
        REQUIRE(root.groups.size() == 3);
        CHECK(root.groups[0].precedence == 3);
        CHECK(root.groups[0].op_count == 1);
        CHECK(root.groups[1].precedence == 2);
        CHECK(root.groups[1].op_count == 2);
        CHECK(root.groups[1].left_associative);
        CHECK(root.groups[2].precedence == 1);
        CHECK(root.groups[2].op_count == 2);
        CHECK(root.groups[2].left_associative);
    }
    SUBCASE("smallest instance accepts digit (op digit)* in every style") {
        for (grammar_style style : {grammar_style::layered_right, grammar_style::idiomatic,
                                    grammar_style::layered_left, grammar_style::cluster}) {
            bench_config cfg{1, 1, style, false, false, true};
            generated_grammar gen = generate_grammar(cfg);
            parse_options opt;
            opt.full_match = true;
            const parser p(std::move(gen.g), opt);
            CHECK(p.run_scalars(U"1").outcome.ok);
            CHECK(p.run_scalars(U"1+2").outcome.ok);
            CHECK(p.run_scalars(U"1+2+3").outcome.ok);
            CHECK(!p.run_scalars(U"+1").outcome.ok);
            CHECK(!p.run_scalars(U"1+").outcome.ok);
            CHECK(!p.run_scalars(U"1-2").outcome.ok); // only one operator exists
        }
    }
}

TEST_CASE("operator alphabet is level-major and deterministic") {
    bench_config cfg{3, 2, grammar_style::cluster, false, false, true};
    generated_grammar gen = generate_grammar(cfg);
    CHECK(gen.operators == U"+-*/%^");
    CHECK_THROWS_AS(static_cast<void>(generate_grammar({7, 6, grammar_style::cluster, false,
                                                        false, true})),
                    grammar_error);
}

TEST_CASE("input generator produces digit (op digit)* strings") {
    bench_config cfg{2, 2, grammar_style::cluster, false, false, true};
    const std::u32string a = generate_input(cfg, 101, 7);
    const std::u32string b = generate_input(cfg, 101, 7);
    CHECK(a == b); // deterministic per seed
    REQUIRE(a.size() == 101);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i % 2 == 0)
            CHECK((a[i] >= U'0' && a[i] <= U'9'));
        else
            CHECK(cfg.ops * cfg.levels >= 1);
    }
    parse_options opt;
    opt.full_match = true;
    generated_grammar gen = generate_grammar(cfg);
    CHECK(parser(std::move(gen.g), opt).run_scalars(a).outcome.ok);
}

TEST_CASE("generated grammars survive a dump/load round trip") {
    for (grammar_style style : {grammar_style::layered_right, grammar_style::idiomatic,
                                grammar_style::layered_left, grammar_style::cluster}) {
        bench_config cfg{2, 2, style, false, true, true};
        generated_grammar gen = generate_grammar(cfg);
        const grammar reloaded = load_grammar(dump_grammar(gen.g));
        CHECK(testutil::isomorphic(gen.g, reloaded));
    }
}

TEST_CASE("bench rows carry stable counts and a median time") {
    bench_config cfg{2, 2, grammar_style::layered_right, false, false, true};
    const bench_row row = run_bench(cfg, U"7", 5);
    CHECK(row.style == "layered-right");
    CHECK(row.digit_invocations == 9);
    CHECK(row.total_invocations > row.digit_invocations);
    CHECK(row.wall_ms >= 0.0);
}
