#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "noncanon/tasks.hpp"

namespace noncanon {

// Last numeric literal in the text (optional sign, digits with optional
// thousands commas, optional decimal part), commas removed.
std::optional<std::string> last_number(std::string_view generation);

// Rounds a literal like "-12.5" to the nearest integer, halves away from zero.
std::optional<std::int64_t> round_number(std::string_view literal);

// True iff the last number in the generation rounds to gold. Generations
// without any number are incorrect.
bool grade_last_number(std::string_view generation, std::int64_t gold);

// First letters of the whitespace-delimited words, lowercased; surrounding
// punctuation is stripped and words that are only punctuation are ignored.
std::string first_letters(std::string_view generation);

bool grade_acronym(std::string_view generation, std::string_view acronym);

// First standalone option letter in [A, last_option] (as in "A", "B.",
// "(C)") equals the gold letter.
bool grade_choice(std::string_view generation, char gold_letter, char last_option = 'D');

// First word of the generation equals the target word, ignoring case and
// surrounding punctuation.
bool grade_word_repeat(std::string_view generation, std::string_view word);

// Dispatches on the example's task kind.
bool grade(const TaskExample& example, std::string_view generation);

// A generation that is correct by construction for the example.
std::string gold_as_generation(const TaskExample& example);

}  // namespace noncanon
