#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "noncanon/rng.hpp"
#include "noncanon/tokenizer.hpp"

namespace noncanon {

enum class TaskKind { count_chars, acronym, arithmetic, word_repeat, identify_misspelling, multiple_choice };

std::string_view to_string(TaskKind kind);
// Throws std::invalid_argument.
TaskKind parse_task_kind(std::string_view name);

using Gold = std::variant<std::int64_t, std::string>;

// A slice of the prompt. `alternative` marks text meant to be tokenized with
// the non-canonical scheme; the rest stays canonical.
struct PromptSegment {
  std::string text;
  bool alternative = false;
  friend bool operator==(const PromptSegment&, const PromptSegment&) = default;
};

struct TaskExample {
  std::string id;
  TaskKind kind = TaskKind::count_chars;
  std::string system;  // system prompt, may be empty
  std::string prompt;
  Gold gold;
  std::uint64_t seed = 0;
  nlohmann::json details = nlohmann::json::object();
  std::vector<PromptSegment> segments;  // empty: the whole prompt is one segment
  std::vector<TokenId> prompt_ids;      // filled by build_probe

  nlohmann::json to_json() const;
  // Throws FormatError on missing fields.
  static TaskExample from_json(const nlohmann::json& j);
};

struct LetterCount {
  char letter = 0;
  std::size_t count = 0;
};

// Most frequent letter, ties broken by earliest occurrence.
LetterCount most_common_letter(std::string_view word);

// Vocabulary units made of 5-10 lowercase ASCII letters, sorted.
std::vector<std::string> count_chars_candidates(const Vocabulary& vocab);

// n distinct qualifying units drawn without replacement. Throws DataError
// when fewer than n units qualify.
std::vector<TaskExample> gen_count_chars(const Vocabulary& vocab, std::size_t n, Rng& rng);

std::vector<TaskExample> gen_acronyms(std::size_t n, std::size_t length, Rng& rng);

// Operands have exactly `digits` digits (1 <= digits <= 18, no leading zero);
// example i is an addition when i is even and a subtraction otherwise.
std::vector<TaskExample> gen_arithmetic(std::size_t n, std::size_t digits, Rng& rng);

// One random insertion, deletion or substitution of a lowercase letter.
// Throws std::invalid_argument for words shorter than two bytes.
std::string gen_misspelling(std::string_view word, Rng& rng);

}  // namespace noncanon
