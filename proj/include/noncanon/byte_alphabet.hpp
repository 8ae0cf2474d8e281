#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

// The 256-entry byte <-> printable code point table used by byte-level BPE
// distributions (vocab.json / merges.txt). Printable ASCII and most of
// Latin-1 map to themselves; the remaining bytes are shifted to U+0100 and up,
// e.g. ' ' -> 'Ġ' (U+0120) and '\n' -> 'Ċ' (U+010A).
namespace noncanon::byte_alphabet {

char32_t to_codepoint(std::uint8_t byte);
std::optional<std::uint8_t> from_codepoint(char32_t cp);

// Raw bytes -> UTF-8 string over the printable alphabet.
std::string encode(std::string_view raw);

// Inverse of encode(). Returns nullopt when the input contains a code point
// outside the alphabet or is not valid UTF-8.
std::optional<std::string> decode(std::string_view printable);

}  // namespace noncanon::byte_alphabet
