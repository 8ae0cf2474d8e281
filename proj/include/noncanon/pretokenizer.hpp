#pragma once

#include <cstddef>
#include <filesystem>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace noncanon {

enum class SpanKind { word, whitespace, digits, punctuation, other };

std::string_view to_string(SpanKind kind);

// Half-open byte range [begin, end) of one pretoken.
struct PretokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  SpanKind kind = SpanKind::other;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const PretokenSpan&, const PretokenSpan&) = default;
};

// gpt2:   's|'t|'re|'ve|'m|'ll|'d| ?\p{L}+| ?\p{N}+| ?[^\s\p{L}\p{N}]+|\s+(?!\S)|\s+
// llama3: (?i:'s|'t|'re|'ve|'m|'ll|'d)|[^\r\n\p{L}\p{N}]?\p{L}+|\p{N}{1,3}
//         | ?[^\s\p{L}\p{N}]+[\r\n]*|\s*[\r\n]+|\s+(?!\S)|\s+
enum class PretokPattern { gpt2, llama3 };

struct PretokConfig {
  PretokPattern pattern = PretokPattern::gpt2;
  // Maximum number of digits per digit pretoken; 0 means unbounded.
  std::size_t digit_chunk = 0;

  static PretokConfig gpt2() { return {}; }
  static PretokConfig llama3() { return {PretokPattern::llama3, 3}; }

  // Reads {"pattern": "gpt2"|"llama3", "digit_chunk": N}. Unknown keys are
  // left for the tokenizer loader.
  static PretokConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Splits text into pretokens. Total: every byte lands in exactly one span and
// spans come back in order.
std::vector<PretokenSpan> pretokenize(std::string_view text, const PretokConfig& config);

}  // namespace noncanon
