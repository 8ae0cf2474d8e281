#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace noncanon::unicode {

struct CodePoint {
  char32_t value = 0;
  std::size_t length = 1;  // bytes consumed
  bool valid = true;       // false for a malformed or truncated sequence
};

// Decodes the UTF-8 sequence starting at `pos`. Malformed input yields a
// single-byte, invalid code point so callers can still make progress.
CodePoint decode_at(std::string_view text, std::size_t pos);

void append_utf8(std::string& out, char32_t cp);

// Splits text into UTF-8 characters (malformed bytes become 1-byte pieces).
std::vector<std::string_view> split_chars(std::string_view text);

std::size_t char_count(std::string_view text);

// General-category tests matching \p{L}, \p{N}, \s and \p{P}.
bool is_letter(char32_t cp);
bool is_number(char32_t cp);
bool is_whitespace(char32_t cp);
bool is_punctuation(char32_t cp);

char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view text);

// Removes leading and trailing punctuation characters.
std::string_view strip_punctuation(std::string_view word);

// Whitespace-delimited words (Unicode White_Space separators).
std::vector<std::string_view> split_whitespace(std::string_view text);

}  // namespace noncanon::unicode
