#ifndef CWI_TEXT_HPP
#define CWI_TEXT_HPP

// Small UTF-8 and character-class helpers. All span/offset arithmetic in the
// toolkit is over decoded Unicode scalar values, never bytes, so the corpus
// offsets line up for the accented Spanish/German/French data.

#include <cstddef>
#include <string>
#include <string_view>

namespace cwi::text {

// Throws cwi::ParseError on malformed UTF-8.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

std::size_t utf8_length(std::string_view s);

// Substring by character offsets, [from, to). Clamped to the string length.
std::string utf8_substr(std::string_view s, std::size_t from, std::size_t to);

bool is_space(char32_t c);
bool is_digit(char32_t c);
bool is_alpha(char32_t c);
bool is_upper(char32_t c);
bool is_lower(char32_t c);

// Case folding for ASCII + Latin-1 + Latin Extended-A, which covers the four
// corpus languages. Other characters pass through unchanged.
char32_t to_lower(char32_t c);
std::string lower_copy(std::string_view s);

// Vowels (lowercased): a e i o u plus their accented Latin-1 forms. "y" is
// treated as a consonant.
bool is_vowel(char32_t c);

// Punctuation counted by the num_complex_punct feature:
// hyphens/dashes, apostrophes, slash, brackets and clause punctuation.
bool is_complex_punct(char32_t c);

// Characters kept word-internal by the tokenizer (hyphens and apostrophes).
bool is_word_internal_punct(char32_t c);

std::string trim(std::string_view s);

}  // namespace cwi::text

#endif  // CWI_TEXT_HPP
