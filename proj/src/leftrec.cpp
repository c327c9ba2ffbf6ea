// Left-recursion with associativity selection (the seed-growing algorithm),
// the escape hatch operator, and the standalone precedence wrapper.
#include "engine_detail.hpp"

#include <utility>

namespace peg::detail {

namespace {

struct suppress_memo {
    parse_state& st;
    explicit suppress_memo(parse_state& s) : st(s) { ++st.memo_suppress_depth; }
    ~suppress_memo() { --st.memo_suppress_depth; }
};

} // namespace

parse_outcome parse_left_recursive(engine_ctx& cx, const expression& e) {
    parse_state& st = cx.st;
    const std::size_t pos = st.position;

    if (const parse_outcome* seed = st.seeds.find(pos, e.id)) {
        parse_outcome out = *seed;
        if (out.ok)
            st.position = out.end;
        return out;
    }
    if (st.blocked.count(e.id))
        return parse_outcome::failure();

    parse_outcome current = parse_outcome::failure();
    st.seeds.set(pos, e.id, current);
    if (e.left_associative)
        st.blocked.insert(e.id);
    suppress_memo guard(st);

    // grow the seed until the operand stops consuming more input
    for (;;) {
        st.position = pos;
        parse_outcome result = invoke(cx, e.child());
        if (result.consumed_more_than(current)) {
            current = result;
            st.seeds.set(pos, e.id, std::move(result));
        } else {
            st.seeds.remove(pos, e.id);
            if (e.left_associative)
                st.blocked.erase(e.id);
            st.position = current.ok ? current.end : pos;
            return current;
        }
    }
}

parse_outcome parse_escape(engine_ctx& cx, const expression& e) {
    parse_state& st = cx.st;
    std::unordered_set<expr_id> saved;
    saved.swap(st.blocked);
    parse_outcome out = invoke(cx, e.child());
    st.blocked = std::move(saved);
    return out;
}

parse_outcome parse_precedence(engine_ctx& cx, const expression& e) {
    parse_state& st = cx.st;
    if (e.level < st.current_precedence)
        return parse_outcome::failure();
    const int saved = st.current_precedence;
    st.current_precedence = e.level;
    parse_outcome out = invoke(cx, e.child());
    st.current_precedence = saved;
    return out;
}

} // namespace peg::detail
