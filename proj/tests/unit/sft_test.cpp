#include <gtest/gtest.h>

#include "noncanon/error.hpp"
#include "noncanon/sft.hpp"
#include "support/fixtures.hpp"

using namespace noncanon;

namespace {

const std::string kInstruction =
    "Provide a detailed analysis of Candace Parker's defensive techniques in her recent games, excluding the words "
    "\"aggressive\" and \"blocking\", in the format of a sports commentary script.";
const std::string kResponse =
    "[Sports Commentary Script]\n[Opening Scene: A packed basketball arena, with fans eagerly awaiting the analysis "
    "of Candace Parker\xE2\x80\x99s recent performances on the court.]\nCommentator 1: Welcome back, basketball fans! "
    "Tonight, we're diving into the defensive prowess of Candace Parker...";

}  // namespace

TEST(Sft, ChatTemplate) {
  const auto& tok = fixtures::real_gpt2();
  const auto rec = format_sft(kInstruction, kResponse, AblationMode::chat, tok);
  const std::string prefix = "<|user|>" + kInstruction + " <|assistant|>";
  EXPECT_EQ(rec.text, prefix + kResponse);
  EXPECT_EQ(rec.loss_offset, prefix.size());
  EXPECT_EQ(tok.decode(std::span(rec.token_ids).first(rec.loss_token_offset)), prefix);
  EXPECT_EQ(tok.decode(rec.token_ids), rec.text);
}

TEST(Sft, FullGradient) {
  const auto rec = format_sft(kInstruction, kResponse, AblationMode::full_gradient, fixtures::real_gpt2());
  EXPECT_EQ(rec.text, "<|user|>" + kInstruction + " <|assistant|>" + kResponse);
  EXPECT_EQ(rec.loss_offset, 0u);
  EXPECT_EQ(rec.loss_token_offset, 0u);
}

TEST(Sft, QaTemplate) {
  const auto rec = format_sft(kInstruction, kResponse, AblationMode::qa_template, fixtures::real_gpt2());
  EXPECT_EQ(rec.text, "Question: " + kInstruction + " Answer: " + kResponse);
  EXPECT_EQ(rec.text.substr(rec.loss_offset), kResponse);
}

TEST(Sft, NoTemplate) {
  const auto rec = format_sft(kInstruction, kResponse, AblationMode::no_template, fixtures::real_gpt2());
  EXPECT_EQ(rec.text, kInstruction + " " + kResponse);
  EXPECT_EQ(rec.text.substr(rec.loss_offset), kResponse);
}

TEST(Sft, RemoveInstructionSplitsAtN) {
  const auto& tok = fixtures::real_gpt2();
  const std::string instruction = "Summarize the following passage in two sentences for a busy reader.";
  const std::string response =
      "The committee met on Tuesday to discuss the budget. After a long debate, members agreed to fund the new "
      "library, expand the park, and repair three bridges before winter arrives in the northern districts.";
  const auto n = tok.encode(instruction).size();
  const auto ids = tok.encode(response).ids;
  ASSERT_GT(ids.size(), n);
  const auto rec = format_sft(instruction, response, AblationMode::remove_instruction, tok);
  EXPECT_EQ(rec.instruction_tokens, n);
  auto trim = [](std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    return s;
  };
  const auto head = tok.decode(std::span(ids).first(n));
  const auto tail = tok.decode(std::span(ids).subspan(n));
  EXPECT_EQ(rec.instruction, trim(head));
  EXPECT_EQ(rec.response, trim(tail));
  EXPECT_EQ(rec.text, "<|user|>" + rec.instruction + " <|assistant|>" + rec.response);
}

TEST(Sft, RemoveInstructionWithExplicitCount) {
  const auto& tok = fixtures::real_gpt2();
  const std::string prefix =
      "[Sports Commentary Script]\n[Opening Scene: A packed basketball arena, with fans eagerly awaiting the "
      "analysis of Candace Parker\xE2\x80\x99s recent performances on the court.]\nCommentator 1: Welcome back, "
      "basketball fans!";
  const auto n = tok.encode(prefix).size();
  const auto rec = format_sft("", kResponse, AblationMode::remove_instruction, tok, n);
  EXPECT_EQ(rec.text, "<|user|>" + prefix + " <|assistant|>Tonight, we're diving into the defensive prowess of Candace Parker...");
}

TEST(Sft, RemoveInstructionTooShort) {
  EXPECT_THROW(format_sft("one two three four five six", "short", AblationMode::remove_instruction,
                          fixtures::real_gpt2()),
               DataError);
}

TEST(Sft, RejectsEmptyInputs) {
  EXPECT_THROW(format_sft("", "x", AblationMode::chat, fixtures::real_gpt2()), std::invalid_argument);
  EXPECT_THROW(format_sft("x", "", AblationMode::chat, fixtures::real_gpt2()), std::invalid_argument);
}

TEST(Sft, ModeNames) {
  EXPECT_EQ(parse_ablation_mode("qa"), AblationMode::qa_template);
  EXPECT_EQ(to_string(AblationMode::remove_instruction), "remove_instruction");
  EXPECT_THROW(parse_ablation_mode("dpo"), std::invalid_argument);
}
