#include "noncanon/byte_alphabet.hpp"

#include <array>

#include "noncanon/unicode.hpp"

namespace noncanon::byte_alphabet {
namespace {

struct Tables {
  std::array<char32_t, 256> forward{};
  std::array<int, 324> inverse{};  // highest mapped code point is U+0143

  Tables() {
    inverse.fill(-1);
    auto keeps_itself = [](int b) {
      return (b >= '!' && b <= '~') || (b >= 0xA1 && b <= 0xAC) || (b >= 0xAE && b <= 0xFF);
    };
    int shifted = 0;
    for (int b = 0; b < 256; ++b) {
      char32_t cp = keeps_itself(b) ? static_cast<char32_t>(b) : static_cast<char32_t>(256 + shifted++);
      forward[b] = cp;
      inverse[cp] = b;
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

char32_t to_codepoint(std::uint8_t byte) { return tables().forward[byte]; }

std::optional<std::uint8_t> from_codepoint(char32_t cp) {
  const auto& inv = tables().inverse;
  if (cp >= inv.size() || inv[cp] < 0) return std::nullopt;
  return static_cast<std::uint8_t>(inv[cp]);
}

std::string encode(std::string_view raw) {
  std::string out;
  out.reserve(raw.size() * 2);
  for (unsigned char b : raw) unicode::append_utf8(out, to_codepoint(b));
  return out;
}

std::optional<std::string> decode(std::string_view printable) {
  std::string out;
  out.reserve(printable.size());
  std::size_t pos = 0;
  while (pos < printable.size()) {
    auto cp = unicode::decode_at(printable, pos);
    if (!cp.valid) return std::nullopt;
    auto byte = from_codepoint(cp.value);
    if (!byte) return std::nullopt;
    out.push_back(static_cast<char>(*byte));
    pos += cp.length;
  }
  return out;
}

}  // namespace noncanon::byte_alphabet
