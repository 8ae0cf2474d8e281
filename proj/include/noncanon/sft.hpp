#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "noncanon/tokenizer.hpp"

namespace noncanon {

enum class AblationMode { chat, full_gradient, qa_template, no_template, remove_instruction };

std::string_view to_string(AblationMode mode);
// Accepts the names above plus "qa" and "none". Throws std::invalid_argument.
AblationMode parse_ablation_mode(std::string_view name);

inline constexpr std::string_view kUserMarker = "<|user|>";
inline constexpr std::string_view kAssistantMarker = "<|assistant|>";

struct SftRecord {
  std::string instruction;  // after remove_instruction: the borrowed response prefix
  std::string response;
  AblationMode mode = AblationMode::chat;
  std::string text;                  // rendered training text
  std::size_t loss_offset = 0;       // byte offset where the loss starts
  std::vector<TokenId> token_ids;    // canonical ids of `text`, split at the loss offset
  std::size_t loss_token_offset = 0; // index into token_ids matching loss_offset
  std::size_t instruction_tokens = 0;  // n, for remove_instruction

  nlohmann::json to_json() const;
};

// Renders one pair. In remove_instruction mode, n is the canonical token count
// of `instruction` unless `instruction_tokens` overrides it; the response's
// first n tokens become the new instruction and whitespace at the split is
// absorbed by the template. Throws DataError when the response has no more
// than n tokens, std::invalid_argument on empty inputs.
SftRecord format_sft(std::string_view instruction, std::string_view response, AblationMode mode,
                     const Tokenizer& tok, std::optional<std::size_t> instruction_tokens = std::nullopt);

}  // namespace noncanon
