// peg - command line front end: parse / check / bench
#include "peg/analysis.hpp"
#include "peg/bench.hpp"
#include "peg/dsl.hpp"
#include "peg/engine.hpp"
#include "peg/tree.hpp"
#include "peg/unicode.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_parse_failure = 1;
constexpr int exit_grammar_error = 2;
constexpr int exit_io_error = 3;

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return false;
    std::ostringstream buf;
    buf << in.rdbuf();
    out = buf.str();
    return true;
}

struct parse_args {
    std::string grammar_path;
    std::string input_path;
    std::string tree_format = "sexpr";
    bool stats = false;
    bool trace = false;
    bool no_full_match = false;
};

int run_parse(const parse_args& args) {
    std::string grammar_text, input_text;
    if (!read_file(args.grammar_path, grammar_text)) {
        std::cerr << "cannot read grammar file: " << args.grammar_path << "\n";
        return exit_io_error;
    }
    if (!read_file(args.input_path, input_text)) {
        std::cerr << "cannot read input file: " << args.input_path << "\n";
        return exit_io_error;
    }

    peg::grammar g;
    try {
        g = peg::load_grammar(grammar_text);
    } catch (const std::exception& e) {
        std::cerr << args.grammar_path << ": " << e.what() << "\n";
        return exit_grammar_error;
    }

    peg::parse_options opt;
    opt.full_match = !args.no_full_match;
    if (args.trace) {
        opt.trace_all = true;
        opt.trace_sink = [](const peg::trace_event& ev) {
            if (ev.ph != peg::trace_event::phase::exit)
                return;
            std::cout << std::string(static_cast<std::size_t>(ev.depth > 0 ? ev.depth - 1 : 0), ' ')
                      << ev.label << " @" << ev.position << " -> "
                      << (ev.outcome->ok ? "ok end=" + std::to_string(ev.outcome->end)
                                         : std::string("fail"))
                      << "\n";
        };
    }

    const peg::parser p(std::move(g), opt);
    peg::parse_result result;
    try {
        result = p.run(input_text);
    } catch (const std::exception& e) {
        std::cerr << args.input_path << ": " << e.what() << "\n";
        return exit_io_error;
    }

    int status = exit_ok;
    if (result.outcome.ok) {
        try {
            std::cout << peg::serialize_tree(result.outcome.nodes, args.tree_format) << "\n";
        } catch (const std::exception& e) {
            std::cerr << e.what() << "\n";
            return exit_grammar_error;
        }
    } else {
        std::cout << result.error.render() << "\n";
        status = exit_parse_failure;
    }

    if (args.stats) {
        const auto& g2 = p.grammar_ref();
        std::cout << "# stats\n";
        std::cout << "total_invocations\t" << result.stats.total << "\n";
        std::cout << "peak_seed_entries\t" << result.stats.peak_seed_entries << "\n";
        std::cout << "wall_ms\t" << result.stats.wall_ms << "\n";
        for (std::size_t id = 0; id < result.stats.by_expr.size(); ++id)
            if (result.stats.by_expr[id])
                std::cout << "expr\t" << id << "\t" << g2.describe(static_cast<peg::expr_id>(id))
                          << "\t" << result.stats.by_expr[id] << "\n";
    }
    return status;
}

int run_check(const std::string& grammar_path) {
    std::string grammar_text;
    if (!read_file(grammar_path, grammar_text)) {
        std::cerr << "cannot read grammar file: " << grammar_path << "\n";
        return exit_io_error;
    }
    peg::load_report report;
    peg::grammar g;
    try {
        g = peg::load_grammar(grammar_text, &report);
    } catch (const std::exception& e) {
        std::cerr << grammar_path << ": " << e.what() << "\n";
        return exit_grammar_error;
    }

    std::cout << "grammar ok: " << g.rules.size() << " rules, start rule '" << g.root << "'\n";
    if (report.cycles.empty()) {
        std::cout << "no left recursion\n";
    } else {
        std::cout << "left-recursive cycles: " << report.cycles.size() << "\n";
        for (std::size_t i = 0; i < report.cycles.size(); ++i) {
            std::cout << "  cycle " << i + 1 << ":";
            for (peg::expr_id id : report.cycles[i])
                std::cout << " " << g.describe(id);
            std::cout << "\n";
        }
        if (report.auto_marked_rules.empty()) {
            std::cout << "all cycles already marked\n";
        } else {
            std::cout << "auto-marked left-recursive:";
            for (const auto& name : report.auto_marked_rules)
                std::cout << " " << name;
            std::cout << "\n";
        }
    }
    for (const auto& w : report.warnings)
        std::cout << "warning: " << w << "\n";
    return exit_ok;
}

struct bench_args {
    int levels = 2;
    int ops = 2;
    std::vector<std::string> styles;
    bool memo = false;
    std::size_t input_len = 4097;
    int reps = 3;
};

void print_bench_row(const peg::bench_row& row) {
    std::cout << row.style << "\t" << row.levels << "\t" << row.ops << "\t"
              << row.digit_invocations << "\t" << row.total_invocations << "\t" << row.wall_ms
              << "\n";
}

int run_bench_cmd(const bench_args& args) {
    std::vector<peg::grammar_style> styles;
    if (args.styles.empty()) {
        styles = {peg::grammar_style::layered_right, peg::grammar_style::idiomatic,
                  peg::grammar_style::layered_left, peg::grammar_style::cluster};
    } else {
        for (const auto& name : args.styles) {
            const auto s = peg::style_from_name(name);
            if (!s) {
                std::cerr << "unknown style '" << name
                          << "' (layered-right, idiomatic, layered-left, cluster)\n";
                return exit_grammar_error;
            }
            styles.push_back(*s);
        }
    }

    std::cout << "style\tL\tP\tdigit_invocations\ttotal_invocations\twall_ms\n";
    std::cout << "# single-digit input\n";
    for (const auto style : styles) {
        peg::bench_config cfg{args.levels, args.ops, style, args.memo, false, true};
        print_bench_row(peg::run_bench(cfg, U"7", args.reps));
    }
    if (args.input_len > 0) {
        std::cout << "# generated input, length " << args.input_len << "\n";
        for (const auto style : styles) {
            peg::bench_config cfg{args.levels, args.ops, style, args.memo, false, true};
            const std::u32string input = peg::generate_input(cfg, args.input_len, 42);
            print_bench_row(peg::run_bench(cfg, input, args.reps));
        }
    }
    return exit_ok;
}

} // namespace

int run_main(int argc, char** argv) {
    CLI::App app{"PEG parsing toolkit with left recursion, precedence and expression clusters"};
    app.require_subcommand(1);

    parse_args pargs;
    auto* parse_cmd = app.add_subcommand("parse", "parse an input file with a .peg grammar");
    parse_cmd->add_option("grammar", pargs.grammar_path, "grammar file")->required();
    parse_cmd->add_option("input", pargs.input_path, "input file")->required();
    parse_cmd->add_option("--tree-format", pargs.tree_format, "sexpr or json");
    parse_cmd->add_flag("--stats", pargs.stats, "append invocation statistics");
    parse_cmd->add_flag("--trace", pargs.trace, "print one line per expression invocation");
    parse_cmd->add_flag("--no-full-match", pargs.no_full_match, "allow trailing unmatched input");

    std::string check_path;
    auto* check_cmd = app.add_subcommand("check", "load a grammar and report left-recursion info");
    check_cmd->add_option("grammar", check_path, "grammar file")->required();

    bench_args bargs;
    auto* bench_cmd = app.add_subcommand("bench", "invocation-count and timing harness");
    bench_cmd->add_option("--levels", bargs.levels, "precedence levels (L)");
    bench_cmd->add_option("--ops", bargs.ops, "operators per level (P)");
    bench_cmd->add_option("--style", bargs.styles, "grammar style; repeatable; default all");
    bench_cmd->add_flag("--memo", bargs.memo, "memoize every rule");
    bench_cmd->add_option("--input-len", bargs.input_len, "length of the long-input experiment (0 disables)");
    bench_cmd->add_option("--reps", bargs.reps, "repetitions per measurement");

    CLI11_PARSE(app, argc, argv);

    if (*parse_cmd)
        return run_parse(pargs);
    if (*check_cmd)
        return run_check(check_path);
    if (*bench_cmd)
        return run_bench_cmd(bargs);
    return exit_ok;
}

int main(int argc, char** argv) try {
    return run_main(argc, argv);
} catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_grammar_error;
}
