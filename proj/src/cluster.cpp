// Expression clusters: precedence groups with per-level associativity and
// seed growing in one operator.
#include "engine_detail.hpp"

#include <utility>

namespace peg::detail {

parse_outcome parse_cluster(engine_ctx& cx, const expression& e) {
    parse_state& st = cx.st;
    const std::size_t pos = st.position;

    if (const parse_outcome* seed = st.seeds.find(pos, e.id)) {
        parse_outcome out = *seed;
        if (out.ok)
            st.position = out.end;
        return out;
    }

    parse_outcome current = parse_outcome::failure();
    st.seeds.set(pos, e.id, current);
    const auto prec_it = st.precedences.find(e.id);
    const int min_precedence = prec_it == st.precedences.end() ? 0 : prec_it->second;
    ++st.cluster_depth[e.id];
    ++st.memo_suppress_depth;

restart:
    // groups are stored in decreasing order of precedence
    for (std::size_t gi = 0; gi < e.groups.size(); ++gi) {
        const cluster_level& group = e.groups[gi];
        if (group.precedence < min_precedence)
            break;
        // a left-associative group forbids recursive entry into itself
        st.precedences[e.id] = group.precedence + (group.left_associative ? 1 : 0);
        for (expr_id op : e.group_ops(gi)) {
            st.position = pos;
            parse_outcome result = invoke(cx, op);
            if (result.consumed_more_than(current)) {
                current = result;
                st.seeds.set(pos, e.id, std::move(result));
                goto restart;
            }
        }
    }

    st.seeds.remove(pos, e.id);
    if (--st.cluster_depth[e.id] == 0) {
        st.cluster_depth.erase(e.id);
        st.precedences.erase(e.id);
    }
    --st.memo_suppress_depth;
    st.position = current.ok ? current.end : pos;
    return current;
}

} // namespace peg::detail
