#include "noncanon/sft.hpp"

#include <stdexcept>

#include "noncanon/error.hpp"

namespace noncanon {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string_view trim_right(std::string_view s) {
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string_view trim_left(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  return s;
}

std::string chat_prefix(std::string_view instruction) {
  std::string out(kUserMarker);
  out.append(instruction).append(" ").append(kAssistantMarker);
  return out;
}

void render(SftRecord& rec, const Tokenizer& tok, std::string prefix, bool loss_everywhere) {
  const auto head = tok.encode(prefix);
  const auto tail = tok.encode(rec.response);
  rec.text = std::move(prefix);
  rec.loss_offset = loss_everywhere ? 0 : rec.text.size();
  rec.loss_token_offset = loss_everywhere ? 0 : head.size();
  rec.text.append(rec.response);
  rec.token_ids = head.ids;
  rec.token_ids.insert(rec.token_ids.end(), tail.ids.begin(), tail.ids.end());
}

}  // namespace

std::string_view to_string(AblationMode mode) {
  switch (mode) {
    case AblationMode::chat: return "chat";
    case AblationMode::full_gradient: return "full_gradient";
    case AblationMode::qa_template: return "qa_template";
    case AblationMode::no_template: return "no_template";
    case AblationMode::remove_instruction: return "remove_instruction";
  }
  return "?";
}

AblationMode parse_ablation_mode(std::string_view name) {
  if (name == "chat") return AblationMode::chat;
  if (name == "full_gradient" || name == "full-gradient") return AblationMode::full_gradient;
  if (name == "qa_template" || name == "qa-template" || name == "qa") return AblationMode::qa_template;
  if (name == "no_template" || name == "no-template" || name == "none") return AblationMode::no_template;
  if (name == "remove_instruction" || name == "remove-instruction") return AblationMode::remove_instruction;
  throw std::invalid_argument("unknown ablation mode '" + std::string(name) + "'");
}

SftRecord format_sft(std::string_view instruction, std::string_view response, AblationMode mode,
                     const Tokenizer& tok, std::optional<std::size_t> instruction_tokens) {
  if (response.empty()) throw std::invalid_argument("format_sft: empty response");
  if (instruction.empty() && !(mode == AblationMode::remove_instruction && instruction_tokens)) {
    throw std::invalid_argument("format_sft: empty instruction");
  }
  SftRecord rec;
  rec.mode = mode;
  switch (mode) {
    case AblationMode::chat:
    case AblationMode::full_gradient:
      rec.instruction = instruction;
      rec.response = response;
      render(rec, tok, chat_prefix(instruction), mode == AblationMode::full_gradient);
      break;
    case AblationMode::qa_template:
      rec.instruction = instruction;
      rec.response = response;
      render(rec, tok, "Question: " + std::string(instruction) + " Answer: ", false);
      break;
    case AblationMode::no_template:
      rec.instruction = instruction;
      rec.response = response;
      render(rec, tok, std::string(instruction) + " ", false);
      break;
    case AblationMode::remove_instruction: {
      const std::size_t n = instruction_tokens ? *instruction_tokens : tok.encode(instruction).size();
      const auto ids = tok.encode(response).ids;
      if (ids.size() <= n) {
        throw DataError("response has " + std::to_string(ids.size()) + " tokens, need more than " +
                        std::to_string(n));
      }
      const auto head = tok.decode(std::span<const TokenId>(ids.data(), n));
      const auto tail = tok.decode(std::span<const TokenId>(ids.data() + n, ids.size() - n));
      rec.instruction = trim_right(head);
      rec.response = trim_left(tail);
      if (rec.response.empty()) throw DataError("response is only whitespace after the first " + std::to_string(n) + " tokens");
      rec.instruction_tokens = n;
      render(rec, tok, chat_prefix(rec.instruction), false);
      break;
    }
  }
  return rec;
}

nlohmann::json SftRecord::to_json() const {
  nlohmann::json j = {{"instruction", instruction},   {"response", response},
                      {"mode", std::string(to_string(mode))}, {"text", text},
                      {"loss_offset", loss_offset},   {"token_ids", token_ids},
                      {"loss_token_offset", loss_token_offset}};
  if (mode == AblationMode::remove_instruction) j["instruction_tokens"] = instruction_tokens;
  return j;
}

}  // namespace noncanon
