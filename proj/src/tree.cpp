#include "peg/tree.hpp"

#include "peg/expr.hpp"

#include <json.hpp>

namespace peg {

namespace {

void sexpr_node(std::string& out, const syntax_node& n) {
    out += '(';
    out += n.name;
    if (n.text) {
        out += " \"";
        for (char c : *n.text) {
            switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
            }
        }
        out += '"';
    }
    for (const node_ptr& c : n.children) {
        out += ' ';
        sexpr_node(out, *c);
    }
    out += ')';
}

nlohmann::json json_node(const syntax_node& n) {
    nlohmann::json j;
    j["name"] = n.name;
    j["span"] = {n.span_start, n.span_end};
    if (n.text)
        j["text"] = *n.text;
    nlohmann::json kids = nlohmann::json::array();
    for (const node_ptr& c : n.children)
        kids.push_back(json_node(*c));
    j["children"] = std::move(kids);
    return j;
}

} // namespace

std::string to_sexpr(std::span<const node_ptr> forest) {
    if (forest.empty())
        return "(root)";
    if (forest.size() == 1) {
        std::string out;
        sexpr_node(out, *forest.front());
        return out;
    }
    std::string out = "(root";
    for (const node_ptr& n : forest) {
        out += ' ';
        sexpr_node(out, *n);
    }
    out += ')';
    return out;
}

std::string to_json(std::span<const node_ptr> forest) {
    if (forest.size() == 1)
        return json_node(*forest.front()).dump(2);
    nlohmann::json root;
    root["name"] = "root";
    nlohmann::json kids = nlohmann::json::array();
    for (const node_ptr& n : forest)
        kids.push_back(json_node(*n));
    root["children"] = std::move(kids);
    return root.dump(2);
}

std::string serialize_tree(std::span<const node_ptr> forest, std::string_view format) {
    if (format == "sexpr")
        return to_sexpr(forest);
    if (format == "json")
        return to_json(forest);
    throw grammar_error("unknown tree format '" + std::string(format) + "' (use sexpr or json)");
}

} // namespace peg
