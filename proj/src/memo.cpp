#include "peg/memo.hpp"

#include "peg/grammar.hpp"
#include "peg/state.hpp"
#include "peg/unicode.hpp"

#include <deque>
#include <set>
#include <unordered_map>

namespace peg {

namespace {

class unbounded_memo : public memo_strategy {
public:
    const parse_outcome* lookup(const memo_key& key) override {
        auto it = table_.find(key);
        return it == table_.end() ? nullptr : &it->second;
    }
    void store(const memo_key& key, const parse_outcome& outcome) override {
        table_.insert_or_assign(key, outcome);
    }
    std::size_t size() const override { return table_.size(); }

private:
    std::unordered_map<memo_key, parse_outcome, memo_key_hash> table_;
};

class precedence_memo final : public unbounded_memo {
public:
    bool precedence_aware() const override { return true; }
};

class bounded_memo final : public memo_strategy {
public:
    explicit bounded_memo(std::size_t capacity) : capacity_(capacity) {
        if (capacity == 0)
            throw grammar_error("bounded memo capacity must be >= 1");
    }
    const parse_outcome* lookup(const memo_key& key) override {
        auto it = table_.find(key);
        return it == table_.end() ? nullptr : &it->second.first;
    }
    void store(const memo_key& key, const parse_outcome& outcome) override {
        const std::uint64_t gen = next_gen_++;
        table_.insert_or_assign(key, std::make_pair(outcome, gen));
        order_.emplace_back(key, gen);
        while (table_.size() > capacity_) {
            auto [victim, vgen] = order_.front();
            order_.pop_front();
            auto it = table_.find(victim);
            // skip stale entries for keys that were stored again since
            if (it != table_.end() && it->second.second == vgen)
                table_.erase(it);
        }
    }
    std::size_t size() const override { return table_.size(); }

private:
    std::size_t capacity_;
    std::uint64_t next_gen_ = 0;
    std::unordered_map<memo_key, std::pair<parse_outcome, std::uint64_t>, memo_key_hash> table_;
    std::deque<std::pair<memo_key, std::uint64_t>> order_;
};

} // namespace

std::unique_ptr<memo_strategy> unbounded_memo_strategy() { return std::make_unique<unbounded_memo>(); }
std::unique_ptr<memo_strategy> bounded_memo_strategy(std::size_t capacity) {
    return std::make_unique<bounded_memo>(capacity);
}
std::unique_ptr<memo_strategy> precedence_memo_strategy() { return std::make_unique<precedence_memo>(); }

std::string error_report::render() const {
    std::string out = "error at " + std::to_string(line) + ":" + std::to_string(column) + ": ";
    if (expectations.empty())
        return out + "unexpected input";
    out += "expected one of {";
    for (std::size_t i = 0; i < expectations.size(); ++i) {
        if (i)
            out += ", ";
        out += expectations[i];
    }
    out += "}";
    return out;
}

namespace {

bool is_terminal(expr_kind k) {
    return k == expr_kind::literal || k == expr_kind::char_class || k == expr_kind::any_char;
}

class farthest_handler final : public error_handler {
public:
    explicit farthest_handler(const grammar& g) : g_(g) {}

    void on_failure(const expression& e, std::size_t position, parse_state& st) override {
        st.saw_failure = true;
        if (!any_ || position > st.error_watermark) {
            any_ = true;
            st.error_watermark = position;
            expectations_.clear();
            token_context_.reset();
        } else if (position < st.error_watermark) {
            return;
        }
        // failures inside a token's trailing whitespace move the watermark but
        // make for useless "expected whitespace" messages
        if (is_terminal(e.kind) && !st.in_whitespace) {
            if (const std::string* label = st.innermost_label())
                expectations_.insert(*label);
            else
                expectations_.insert(g_.describe(e.id));
            if (!token_context_)
                if (const std::string* tok = st.innermost_token())
                    token_context_ = *tok;
        }
    }

    error_report report(const parse_state& st) const override {
        error_report r;
        r.failed = any_;
        r.position = st.error_watermark;
        const auto pos = unicode::position_at(st.input, r.position);
        r.line = pos.line;
        r.column = pos.column;
        r.expectations.assign(expectations_.begin(), expectations_.end());
        r.token_context = token_context_;
        return r;
    }

private:
    const grammar& g_;
    bool any_ = false;
    std::set<std::string> expectations_;
    std::optional<std::string> token_context_;
};

} // namespace

std::unique_ptr<error_handler> farthest_error_handler(const grammar& g) {
    return std::make_unique<farthest_handler>(g);
}

bool same_tree(const syntax_node& a, const syntax_node& b) {
    if (a.name != b.name || a.span_start != b.span_start || a.span_end != b.span_end ||
        a.text != b.text || a.children.size() != b.children.size())
        return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!same_tree(*a.children[i], *b.children[i]))
            return false;
    return true;
}

bool same_forest(std::span<const node_ptr> a, std::span<const node_ptr> b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!same_tree(*a[i], *b[i]))
            return false;
    return true;
}

} // namespace peg
