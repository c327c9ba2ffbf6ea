#include "peg/engine.hpp"

#include "engine_detail.hpp"
#include "peg/analysis.hpp"
#include "peg/unicode.hpp"

#include <cassert>
#include <utility>

namespace peg {
namespace detail {

namespace {

parse_outcome parse_terminal(engine_ctx& cx, const expression& e) {
    parse_state& st = cx.st;
    const std::size_t pos = st.position;
    switch (e.kind) {
    case expr_kind::literal: {
        if (pos + e.text.size() > st.input.size())
            return parse_outcome::failure();
        if (st.input.compare(pos, e.text.size(), e.text) != 0)
            return parse_outcome::failure();
        st.position = pos + e.text.size();
        return parse_outcome::success(st.position);
    }
    case expr_kind::char_class:
        if (pos >= st.input.size() || !e.matches_scalar(st.input[pos]))
            return parse_outcome::failure();
        st.position = pos + 1;
        return parse_outcome::success(st.position);
    case expr_kind::any_char:
        if (pos >= st.input.size())
            return parse_outcome::failure();
        st.position = pos + 1;
        return parse_outcome::success(st.position);
    default:
        assert(false);
        return parse_outcome::failure();
    }
}

parse_outcome parse_sequence(engine_ctx& cx, const expression& e) {
    std::vector<node_ptr> nodes;
    for (expr_id c : e.children) {
        parse_outcome out = invoke(cx, c);
        if (!out.ok)
            return parse_outcome::failure();
        nodes.insert(nodes.end(), std::make_move_iterator(out.nodes.begin()),
                     std::make_move_iterator(out.nodes.end()));
    }
    return parse_outcome::success(cx.st.position, std::move(nodes));
}

parse_outcome parse_choice(engine_ctx& cx, const expression& e) {
    for (expr_id c : e.children) {
        parse_outcome out = invoke(cx, c);
        if (out.ok)
            return out;
    }
    return parse_outcome::failure();
}

parse_outcome parse_repetition(engine_ctx& cx, const expression& e, bool at_least_one) {
    std::vector<node_ptr> nodes;
    std::size_t matches = 0;
    for (;;) {
        const std::size_t before = cx.st.position;
        parse_outcome out = invoke(cx, e.child());
        if (!out.ok)
            break;
        ++matches;
        nodes.insert(nodes.end(), std::make_move_iterator(out.nodes.begin()),
                     std::make_move_iterator(out.nodes.end()));
        if (out.end == before)
            break; // zero-width match; further repeats would not advance
    }
    if (at_least_one && matches == 0)
        return parse_outcome::failure();
    return parse_outcome::success(cx.st.position, std::move(nodes));
}

parse_outcome parse_option(engine_ctx& cx, const expression& e) {
    const std::size_t start = cx.st.position;
    parse_outcome out = invoke(cx, e.child());
    if (out.ok)
        return out;
    return parse_outcome::success(start);
}

parse_outcome parse_predicate(engine_ctx& cx, const expression& e, bool expect_success) {
    const std::size_t start = cx.st.position;
    const parse_outcome out = invoke(cx, e.child());
    cx.st.position = start; // predicates consume nothing
    if (out.ok == expect_success)
        return parse_outcome::success(start);
    return parse_outcome::failure();
}

parse_outcome parse_memo(engine_ctx& cx, const expression& e) {
    parse_state& st = cx.st;
    if (st.memo_suppressed())
        return invoke(cx, e.child());
    memo_strategy* strategy = st.memo.get();
    if (!e.name.empty()) {
        auto it = st.memo_by_selector.find(e.name);
        if (it == st.memo_by_selector.end())
            it = st.memo_by_selector.emplace(e.name, cx.opt.memo_factory(e.name)).first;
        strategy = it->second.get();
    }
    if (!strategy)
        return invoke(cx, e.child());
    memo_key key{e.id, st.position, std::nullopt};
    if (strategy->precedence_aware())
        key.precedence = st.current_precedence;
    if (const parse_outcome* hit = strategy->lookup(key)) {
        if (hit->ok)
            st.position = hit->end;
        return *hit;
    }
    parse_outcome out = invoke(cx, e.child());
    strategy->store(key, out);
    return out;
}

parse_outcome parse_capture(engine_ctx& cx, const expression& e) {
    parse_state& st = cx.st;
    const std::size_t start = st.position;
    parse_outcome out = invoke(cx, e.child());
    if (!out.ok)
        return out;
    auto node = std::make_shared<syntax_node>();
    node->name = e.name;
    node->span_start = start;
    node->span_end = out.end;
    node->children = std::move(out.nodes);
    if (e.record_text) {
        // trim trailing whitespace skipped by a token that ends the capture
        std::size_t text_end = out.end;
        if (out.end == st.last_token_end && st.nonws_watermark >= start &&
            st.nonws_watermark < out.end)
            text_end = st.nonws_watermark;
        node->text = unicode::encode_utf8(st.input.substr(start, text_end - start));
    }
    return parse_outcome::success(out.end, {std::move(node)});
}

parse_outcome parse_token(engine_ctx& cx, const expression& e) {
    parse_state& st = cx.st;
    parse_outcome out = invoke(cx, e.child());
    if (!out.ok)
        return out;
    st.nonws_watermark = out.end;
    std::size_t end = out.end;
    if (cx.g.whitespace) {
        // a failing whitespace expression is tolerated: the token keeps its
        // operand match (invoke already restored the position)
        const bool saved = st.in_whitespace;
        st.in_whitespace = true;
        const parse_outcome ws = invoke(cx, *cx.g.whitespace);
        st.in_whitespace = saved;
        if (ws.ok)
            end = ws.end;
    }
    st.last_token_end = end;
    st.position = end;
    return parse_outcome::success(end, std::move(out.nodes)); // whitespace nodes dropped
}

parse_outcome parse_trace(engine_ctx& cx, const expression& e) {
    const auto& sink = cx.opt.trace_sink;
    const std::size_t entry = cx.st.position;
    if (sink)
        sink({trace_event::phase::enter, e.id, e.name, entry, cx.st.depth, nullptr});
    parse_outcome out = invoke(cx, e.child());
    if (sink)
        sink({trace_event::phase::exit, e.id, e.name, entry, cx.st.depth, &out});
    return out;
}

parse_outcome dispatch(engine_ctx& cx, const expression& e) {
    switch (e.kind) {
    case expr_kind::literal:
    case expr_kind::char_class:
    case expr_kind::any_char:
        return parse_terminal(cx, e);
    case expr_kind::sequence:
        return parse_sequence(cx, e);
    case expr_kind::choice:
        return parse_choice(cx, e);
    case expr_kind::zero_or_more:
        return parse_repetition(cx, e, false);
    case expr_kind::one_or_more:
        return parse_repetition(cx, e, true);
    case expr_kind::option:
        return parse_option(cx, e);
    case expr_kind::and_predicate:
        return parse_predicate(cx, e, true);
    case expr_kind::not_predicate:
        return parse_predicate(cx, e, false);
    case expr_kind::left_recursive:
        return parse_left_recursive(cx, e);
    case expr_kind::precedence:
        return parse_precedence(cx, e);
    case expr_kind::cluster:
        return parse_cluster(cx, e);
    case expr_kind::capture:
        return parse_capture(cx, e);
    case expr_kind::token:
        return parse_token(cx, e);
    case expr_kind::memo:
        return parse_memo(cx, e);
    case expr_kind::escape_left_block:
        return parse_escape(cx, e);
    case expr_kind::trace:
        return parse_trace(cx, e);
    case expr_kind::reference:
        throw grammar_error("reference '" + e.name + "' reached the engine; run resolve_references");
    }
    return parse_outcome::failure();
}

} // namespace

parse_outcome invoke(engine_ctx& cx, expr_id id) {
    parse_state& st = cx.st;
    const expression& e = cx.g.node(id);
    ++st.counters[static_cast<std::size_t>(id)];
    const std::size_t entry = st.position;

    std::size_t pushed = 0;
    if (const std::string* rule = cx.g.rule_name_of(id)) {
        st.labels.push_back({rule, false});
        ++pushed;
    }
    if (e.kind == expr_kind::token) {
        st.labels.push_back({&e.name, true});
        ++pushed;
    }
    ++st.depth;
    const bool traced = cx.opt.trace_all && cx.opt.trace_sink;
    if (traced)
        cx.opt.trace_sink({trace_event::phase::enter, id, cx.g.describe(id), entry, st.depth, nullptr});

    parse_outcome out = dispatch(cx, e);
    if (!out.ok) {
        st.position = entry;
        if (st.errors)
            st.errors->on_failure(e, entry, st);
    }

    if (traced)
        cx.opt.trace_sink({trace_event::phase::exit, id, cx.g.describe(id), entry, st.depth, &out});
    --st.depth;
    st.labels.resize(st.labels.size() - pushed);
    assert(!out.ok || st.position == out.end);
    return out;
}

} // namespace detail

parser::parser(grammar g, parse_options opt) : g_(std::move(g)), opt_(std::move(opt)) {
    for (expr_id id : g_.reachable())
        if (g_.node(id).kind == expr_kind::reference)
            throw grammar_error("parser requires a resolved grammar; run prepare()");
    if (!detect_left_cycles(g_, compute_nullable(g_), /*through_markers=*/false).empty())
        throw grammar_error("grammar has unmarked left-recursive cycles; run prepare()");
    const expr_id root = g_.rule_root(g_.root);
    if (root == no_expr)
        throw grammar_error("grammar has no start rule");
    if (opt_.full_match) {
        grammar_builder b(std::move(g_));
        const expr_id eoi = b.not_predicate(b.any_char());
        entry_ = b.sequence({root, eoi});
        g_ = b.build();
    } else {
        entry_ = root;
    }
    if (!opt_.memo_factory)
        opt_.memo_factory = [](std::string_view) { return unbounded_memo_strategy(); };
    if (!opt_.error_factory)
        opt_.error_factory = [](const grammar& gr) { return farthest_error_handler(gr); };
}

parse_session::parse_session(const parser& p, std::u32string scalars)
    : parser_(p), input_(std::move(scalars)) {
    st_.input = input_;
    st_.counters.assign(p.grammar_ref().nodes.size(), 0);
    st_.memo = p.options().memo_factory("");
    st_.errors = p.options().error_factory(p.grammar_ref());
}

parse_session::parse_session(const parser& p, std::string_view utf8)
    : parse_session(p, unicode::decode_utf8(utf8)) {}

parse_outcome parse_session::invoke(expr_id id, std::size_t position) {
    st_.position = position;
    detail::engine_ctx cx{parser_.grammar_ref(), parser_.options(), st_};
    return detail::invoke(cx, id);
}

parse_outcome parse_session::run_root() { return invoke(parser_.entry(), 0); }

parse_result parser::run_scalars(std::u32string input) const {
    const auto t0 = std::chrono::steady_clock::now();
    parse_session session(*this, std::move(input));
    parse_result r;
    r.outcome = session.run_root();
    const auto t1 = std::chrono::steady_clock::now();
    const parse_state& st = session.state();
    r.error = session.report();
    r.hygienic = st.hygienic();
    assert(r.hygienic);
    r.stats.by_expr = st.counters;
    for (std::uint64_t c : st.counters)
        r.stats.total += c;
    r.stats.peak_seed_entries = st.seeds.peak;
    r.stats.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return r;
}

parse_result parser::run(std::string_view utf8_input) const {
    return run_scalars(unicode::decode_utf8(utf8_input));
}

} // namespace peg
