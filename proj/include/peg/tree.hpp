// peg - PEG parsing toolkit with left recursion, precedence and expression clusters
#ifndef PEG_TREE_HPP
#define PEG_TREE_HPP

#include "peg/outcome.hpp"

#include <span>
#include <string>
#include <string_view>

namespace peg {

// Deterministic renderings of a capture forest.
//   sexpr: (name "text"? child*), an empty forest renders as (root)
//   json:  objects with name, span, text?, children fields
std::string to_sexpr(std::span<const node_ptr> forest);
std::string to_json(std::span<const node_ptr> forest);

// format is "sexpr" or "json"; anything else raises grammar_error.
std::string serialize_tree(std::span<const node_ptr> forest, std::string_view format);

} // namespace peg

#endif
