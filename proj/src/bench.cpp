#include "peg/bench.hpp"

#include "peg/analysis.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <stdexcept>

namespace peg {

const char* style_name(grammar_style s) {
    switch (s) {
    case grammar_style::layered_right: return "layered-right";
    case grammar_style::idiomatic: return "idiomatic";
    case grammar_style::layered_left: return "layered-left";
    case grammar_style::cluster: return "cluster";
    }
    return "?";
}

std::optional<grammar_style> style_from_name(std::string_view name) {
    for (grammar_style s : {grammar_style::layered_right, grammar_style::idiomatic,
                            grammar_style::layered_left, grammar_style::cluster})
        if (name == style_name(s))
            return s;
    return std::nullopt;
}

namespace {

// level-major, Table 1 operators first; enough for a 6x6 grid
constexpr char32_t op_alphabet[] = U"+-*/%^&|~<>=!?@#$:;,.abcdefghijklmno";
constexpr std::size_t op_alphabet_size = std::size(op_alphabet) - 1;

std::u32string pick_operators(const bench_config& cfg) {
    if (cfg.levels < 1 || cfg.ops < 1)
        throw grammar_error("bench grammars need levels >= 1 and ops >= 1");
    const std::size_t needed = static_cast<std::size_t>(cfg.levels) * static_cast<std::size_t>(cfg.ops);
    if (needed > op_alphabet_size)
        throw grammar_error("operator alphabet exhausted: levels*ops must be <= " +
                            std::to_string(op_alphabet_size));
    return std::u32string(op_alphabet, needed);
}

std::string level_rule(int level) { return "e" + std::to_string(level); }

} // namespace

generated_grammar generate_grammar(const bench_config& cfg) {
    const std::u32string operators = pick_operators(cfg);
    grammar_builder b;

    auto op_char = [&](int level, int i) {
        return operators[static_cast<std::size_t>(level - 1) * cfg.ops + i];
    };
    auto maybe_capture = [&](const char* name, expr_id id) {
        return cfg.with_captures ? b.capture(name, id) : id;
    };
    auto finish_rule = [&](const std::string& name, expr_id body) {
        b.rule(name, cfg.memoize ? b.memo(body) : body);
    };

    const expr_id digit = b.char_class({{U'0', U'9'}});
    finish_rule("num", maybe_capture("num", digit));

    switch (cfg.style) {
    case grammar_style::layered_right:
        for (int level = cfg.levels; level >= 1; --level) {
            const std::string below = level == cfg.levels ? "num" : level_rule(level + 1);
            std::vector<expr_id> alts;
            for (int i = 0; i < cfg.ops; ++i) {
                const expr_id seq =
                    b.sequence({b.reference(below), b.literal_scalars({op_char(level, i)}),
                                b.reference(level_rule(level))});
                alts.push_back(maybe_capture("op", seq));
            }
            alts.push_back(b.reference(below));
            finish_rule(level_rule(level), b.choice(std::move(alts)));
        }
        break;
    case grammar_style::idiomatic:
        for (int level = cfg.levels; level >= 1; --level) {
            const std::string below = level == cfg.levels ? "num" : level_rule(level + 1);
            std::vector<expr_id> ops;
            ops.reserve(static_cast<std::size_t>(cfg.ops));
            for (int i = 0; i < cfg.ops; ++i)
                ops.push_back(b.literal_scalars({op_char(level, i)}));
            const expr_id tail =
                b.zero_or_more(b.sequence({b.choice(std::move(ops)), b.reference(below)}));
            finish_rule(level_rule(level), b.sequence({b.reference(below), tail}));
        }
        break;
    case grammar_style::layered_left:
        for (int level = cfg.levels; level >= 1; --level) {
            const std::string below = level == cfg.levels ? "num" : level_rule(level + 1);
            std::vector<expr_id> alts;
            for (int i = 0; i < cfg.ops; ++i) {
                const expr_id seq =
                    b.sequence({b.reference(level_rule(level)), b.literal_scalars({op_char(level, i)}),
                                b.reference(below)});
                alts.push_back(maybe_capture("op", seq));
            }
            alts.push_back(b.reference(below));
            finish_rule(level_rule(level), b.choice(std::move(alts)));
        }
        break;
    case grammar_style::cluster: {
        std::vector<grammar_builder::cluster_group> groups;
        groups.push_back({cfg.levels + 1, false, {b.reference("num")}});
        for (int level = 1; level <= cfg.levels; ++level) {
            grammar_builder::cluster_group group{level, cfg.cluster_left_assoc, {}};
            for (int i = 0; i < cfg.ops; ++i) {
                const expr_id seq =
                    b.sequence({b.reference(level_rule(1)), b.literal_scalars({op_char(level, i)}),
                                b.reference(level_rule(1))});
                group.ops.push_back(maybe_capture("op", seq));
            }
            groups.push_back(std::move(group));
        }
        finish_rule(level_rule(1), b.cluster(std::move(groups)));
        break;
    }
    }

    b.start(level_rule(1));
    generated_grammar out{prepare(b.build()), digit, operators};
    return out;
}

std::u32string generate_input(const bench_config& cfg, std::size_t length, std::uint64_t seed) {
    const std::u32string operators = pick_operators(cfg);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> op_at(0, operators.size() - 1);
    std::uniform_int_distribution<int> digit_at(0, 9);
    std::u32string out;
    if (length == 0)
        return out;
    const std::size_t pairs = (length - 1) / 2;
    out.reserve(pairs * 2 + 1);
    out.push_back(static_cast<char32_t>(U'0' + digit_at(rng)));
    for (std::size_t i = 0; i < pairs; ++i) {
        out.push_back(operators[op_at(rng)]);
        out.push_back(static_cast<char32_t>(U'0' + digit_at(rng)));
    }
    return out;
}

bench_row run_bench(const bench_config& cfg, std::u32string_view input, int repetitions) {
    if (repetitions < 1)
        repetitions = 1;
    generated_grammar gen = generate_grammar(cfg);
    parse_options opt;
    opt.full_match = true;
    const parser p(std::move(gen.g), opt);

    bench_row row;
    row.style = style_name(cfg.style);
    row.levels = cfg.levels;
    row.ops = cfg.ops;
    std::vector<double> times;
    for (int rep = 0; rep < repetitions; ++rep) {
        const parse_result r = p.run_scalars(std::u32string(input));
        const std::uint64_t digits = r.stats.by_expr[static_cast<std::size_t>(gen.digit_matcher)];
        if (rep == 0) {
            row.digit_invocations = digits;
            row.total_invocations = r.stats.total;
        } else {
            assert(digits == row.digit_invocations && r.stats.total == row.total_invocations);
        }
        times.push_back(r.stats.wall_ms);
    }
    std::sort(times.begin(), times.end());
    row.wall_ms = times[times.size() / 2];
    return row;
}

} // namespace peg
