#include "noncanon/graders.hpp"

#include <cctype>
#include <regex>

#include "noncanon/unicode.hpp"

namespace noncanon {
namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

const std::string& gold_string(const TaskExample& ex) {
  static const std::string empty;
  const auto* s = std::get_if<std::string>(&ex.gold);
  return s ? *s : empty;
}

std::int64_t gold_integer(const TaskExample& ex) {
  if (const auto* v = std::get_if<std::int64_t>(&ex.gold)) return *v;
  return 0;
}

}  // namespace

std::optional<std::string> last_number(std::string_view generation) {
  static const std::regex number(R"([-+]?\d[\d,]*(?:\.\d+)?)");
  const std::string text(generation);
  std::optional<std::string> last;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), number); it != std::sregex_iterator(); ++it) {
    last = it->str();
  }
  if (!last) return std::nullopt;
  std::string cleaned;
  for (char c : *last) {
    if (c != ',') cleaned.push_back(c);
  }
  return cleaned;
}

std::optional<std::int64_t> round_number(std::string_view literal) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < literal.size() && (literal[pos] == '-' || literal[pos] == '+')) negative = literal[pos++] == '-';
  std::int64_t value = 0;
  bool any = false;
  for (; pos < literal.size() && std::isdigit(static_cast<unsigned char>(literal[pos])); ++pos) {
    if (value > (INT64_MAX - 9) / 10) return std::nullopt;
    value = value * 10 + (literal[pos] - '0');
    any = true;
  }
  if (!any) return std::nullopt;
  if (pos + 1 < literal.size() && literal[pos] == '.' && literal[pos + 1] >= '5') ++value;
  return negative ? -value : value;
}

bool grade_last_number(std::string_view generation, std::int64_t gold) {
  auto literal = last_number(generation);
  if (!literal) return false;
  auto value = round_number(*literal);
  return value && *value == gold;
}

std::string first_letters(std::string_view generation) {
  std::string letters;
  for (auto word : unicode::split_whitespace(generation)) {
    word = unicode::strip_punctuation(word);
    if (word.empty()) continue;
    auto cp = unicode::decode_at(word, 0);
    if (cp.valid) {
      unicode::append_utf8(letters, unicode::to_lower(cp.value));
    } else {
      letters.append(word.substr(0, cp.length));
    }
  }
  return letters;
}

bool grade_acronym(std::string_view generation, std::string_view acronym) {
  return !acronym.empty() && first_letters(generation) == unicode::to_lower(acronym);
}

bool grade_choice(std::string_view generation, char gold_letter, char last_option) {
  for (std::size_t i = 0; i < generation.size(); ++i) {
    const char c = generation[i];
    if (c < 'A' || c > last_option) continue;
    const bool left_ok = i == 0 || !is_alnum(generation[i - 1]);
    const bool right_ok = i + 1 == generation.size() || !is_alnum(generation[i + 1]);
    if (left_ok && right_ok) return c == gold_letter;
  }
  return false;
}

bool grade_word_repeat(std::string_view generation, std::string_view word) {
  const auto words = unicode::split_whitespace(generation);
  if (words.empty()) return false;
  return unicode::to_lower(unicode::strip_punctuation(words.front())) == unicode::to_lower(word);
}

bool grade(const TaskExample& ex, std::string_view generation) {
  switch (ex.kind) {
    case TaskKind::count_chars:
    case TaskKind::arithmetic:
      return grade_last_number(generation, gold_integer(ex));
    case TaskKind::acronym:
      return grade_acronym(generation, gold_string(ex));
    case TaskKind::word_repeat:
      return grade_word_repeat(generation, gold_string(ex));
    case TaskKind::identify_misspelling:
    case TaskKind::multiple_choice: {
      const auto& g = gold_string(ex);
      char last = 'D';
      if (ex.details.contains("options") && ex.details["options"].is_array() && !ex.details["options"].empty()) {
        last = static_cast<char>('A' + ex.details["options"].size() - 1);
      }
      return g.size() == 1 && grade_choice(generation, g.front(), last);
    }
  }
  return false;
}

std::string gold_as_generation(const TaskExample& ex) {
  switch (ex.kind) {
    case TaskKind::count_chars:
    case TaskKind::arithmetic:
      return std::to_string(gold_integer(ex));
    case TaskKind::acronym: {
      // One single-letter word per acronym letter.
      std::string out;
      for (auto ch : unicode::split_chars(gold_string(ex))) {
        if (!out.empty()) out.push_back(' ');
        out.append(ch);
      }
      return out;
    }
    case TaskKind::word_repeat:
    case TaskKind::identify_misspelling:
    case TaskKind::multiple_choice:
      return gold_string(ex);
  }
  return {};
}

}  // namespace noncanon
