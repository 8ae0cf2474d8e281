#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "noncanon/rng.hpp"
#include "noncanon/schemes.hpp"
#include "noncanon/tasks.hpp"
#include "noncanon/tokenizer.hpp"

namespace noncanon {

inline constexpr std::string_view kWordRepeatHeader = "Repeat each word directly, while correcting any typos.";
inline constexpr std::string_view kMisspellingHeader =
    "Question: Which of the two words contains a misspelling? Respond directly with the answer option.";

struct ProbeOptions {
  // Tokenization of the probed word; seed is replaced by a draw from the rng.
  SchemeConfig alternative{Scheme::character};
  // Words for in-context examples; "guarantees" always leads.
  std::vector<std::string> demo_words;
  std::size_t word_repeat_shots = 1;
  std::size_t misspelling_shots = 10;
};

// Builds a word_repeat or identify_misspelling prompt around `word`. Segments
// flagged `alternative` are tokenized with options.alternative, the rest
// canonically; prompt_ids holds the result. Throws std::invalid_argument for
// other kinds or a word shorter than two bytes.
TaskExample build_probe(TaskKind kind, std::string_view word, const Tokenizer& tok, const ProbeOptions& options,
                        Rng& rng);

// Token ids for a segmented prompt.
std::vector<TokenId> encode_segments(const Tokenizer& tok, const std::vector<PromptSegment>& segments,
                                     const SchemeConfig& alternative);

}  // namespace noncanon
