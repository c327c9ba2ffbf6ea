// peg - PEG parsing toolkit with left recursion, precedence and expression clusters
#ifndef PEG_UNICODE_HPP
#define PEG_UNICODE_HPP

#include <string>
#include <string_view>

namespace peg::unicode {

// Decodes UTF-8 into a sequence of Unicode scalar values. Throws
// std::runtime_error on malformed input (with the byte offset).
std::u32string decode_utf8(std::string_view bytes);

std::string encode_utf8(std::u32string_view scalars);
std::string encode_utf8(char32_t scalar);

// 1-based line/column of a scalar offset, counting '\n' as line breaks.
struct text_position {
    std::size_t line = 1;
    std::size_t column = 1;
};
text_position position_at(std::u32string_view text, std::size_t offset);

} // namespace peg::unicode

#endif
