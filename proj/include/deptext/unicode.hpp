#ifndef DEPTEXT_UNICODE_HPP
#define DEPTEXT_UNICODE_HPP

#include <cstddef>
#include <string>
#include <string_view>

namespace deptext::unicode {

// Code point level helpers over UTF-8 strings. Invalid byte sequences decode
// as U+FFFD, so every function here is total.

std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view code_points);
std::size_t length(std::string_view utf8);
bool is_valid_utf8(std::string_view bytes);

bool is_whitespace(char32_t c);
/// General category P*.
bool is_punctuation(char32_t c);
/// General category Pd.
bool is_dash(char32_t c);
/// General category S*.
bool is_symbol(char32_t c);
/// General category Nd.
bool is_decimal_digit(char32_t c);
/// Letter in the Latin script.
bool is_latin_letter(char32_t c);
/// Extended_Pictographic property.
bool is_emoji(char32_t c);
char32_t to_lower(char32_t c);

}  // namespace deptext::unicode

#endif  // DEPTEXT_UNICODE_HPP
