#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "noncanon/tokenizer.hpp"

namespace noncanon {

// One word per line, UTF-8, most frequent first. Lookups are lowercase.
class WordList {
 public:
  WordList() = default;
  explicit WordList(std::vector<std::string> words);
  // Throws FormatError when the file cannot be read.
  static WordList load(const std::filesystem::path& path);

  bool contains(std::string_view word) const { return set_.count(std::string(word)) != 0; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_set<std::string> set_;
};

struct SpellingResult {
  double score = 0.0;
  std::size_t qualifying = 0;  // words longer than one character
  std::size_t found = 0;
};

// Among whitespace-delimited words with more than one character after
// stripping surrounding punctuation and lowercasing, the fraction found in the
// word list; 0 when there are none.
SpellingResult spelling(std::string_view generation, const WordList& words);
double spelling_score(std::string_view generation, const WordList& words);

// Whitespace-delimited word count.
std::size_t word_count(std::string_view generation);

inline constexpr double kSpellingGate = 0.5;

// 0 when spelling < 0.5, else max(0, 1 - mistakes / words). Throws
// std::invalid_argument when the gate passes with words == 0.
double grammaticality_score(std::size_t mistakes, std::size_t words, double spelling);

// 100 * alt / canon. Throws std::invalid_argument unless canon > 0.
double retention(double canon, double alt);

struct GenerationScore {
  std::string id;
  double spelling = 0.0;
  std::size_t words = 0;
  std::optional<std::size_t> mistakes;
  std::optional<double> grammaticality;
};

struct MetricReport {
  std::vector<GenerationScore> records;
  double mean_spelling = 0.0;
  std::optional<double> mean_grammaticality;  // absent without a grammar provider

  nlohmann::json to_json() const;
};

}  // namespace noncanon
