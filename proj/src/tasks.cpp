#include "noncanon/tasks.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "noncanon/error.hpp"

namespace noncanon {
namespace {

constexpr std::string_view kArithmeticSystem =
    "You are a computational assistant trained to evaluate arithmetic operations. When provided with an "
    "arithmetic expression, calculate the result and round it to the nearest integer. Respond only with the "
    "rounded result, without any additional text or explanation.";

constexpr std::string_view kAcronymSystem =
    "You are a helpful assistant. The following prompt will ask you to return a sequence of words. Only "
    "return the sequence, separated by spaces. Do not provide any additional text or explanation.";

std::string make_id(TaskKind kind, std::size_t index) {
  std::string num = std::to_string(index);
  return std::string(to_string(kind)) + "-" + std::string(num.size() < 6 ? 6 - num.size() : 0, '0') + num;
}

char random_letter(Rng& rng) { return static_cast<char>('a' + rng.below(26)); }

std::int64_t pow10(std::size_t k) {
  std::int64_t v = 1;
  for (std::size_t i = 0; i < k; ++i) v *= 10;
  return v;
}

}  // namespace

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::count_chars: return "count_chars";
    case TaskKind::acronym: return "acronym";
    case TaskKind::arithmetic: return "arithmetic";
    case TaskKind::word_repeat: return "word_repeat";
    case TaskKind::identify_misspelling: return "identify_misspelling";
    case TaskKind::multiple_choice: return "multiple_choice";
  }
  return "count_chars";
}

TaskKind parse_task_kind(std::string_view name) {
  for (auto k : {TaskKind::count_chars, TaskKind::acronym, TaskKind::arithmetic, TaskKind::word_repeat,
                 TaskKind::identify_misspelling, TaskKind::multiple_choice}) {
    if (name == to_string(k)) return k;
  }
  if (name == "acronyms") return TaskKind::acronym;
  throw std::invalid_argument("unknown task kind '" + std::string(name) + "'");
}

nlohmann::json TaskExample::to_json() const {
  nlohmann::json j;
  j["id"] = id;
  j["task"] = to_string(kind);
  if (!system.empty()) j["system"] = system;
  j["prompt"] = prompt;
  std::visit([&](const auto& g) { j["gold"] = g; }, gold);
  j["seed"] = seed;
  if (!details.empty()) j["details"] = details;
  if (!segments.empty()) {
    auto& segs = j["segments"] = nlohmann::json::array();
    for (const auto& s : segments) segs.push_back({{"text", s.text}, {"alternative", s.alternative}});
  }
  if (!prompt_ids.empty()) j["prompt_ids"] = prompt_ids;
  return j;
}

TaskExample TaskExample::from_json(const nlohmann::json& j) {
  try {
    TaskExample ex;
    ex.id = j.at("id").get<std::string>();
    ex.kind = parse_task_kind(j.at("task").get<std::string>());
    ex.system = j.value("system", std::string());
    ex.prompt = j.at("prompt").get<std::string>();
    const auto& g = j.at("gold");
    if (g.is_number_integer()) {
      ex.gold = g.get<std::int64_t>();
    } else {
      ex.gold = g.get<std::string>();
    }
    ex.seed = j.value("seed", std::uint64_t{0});
    ex.details = j.value("details", nlohmann::json::object());
    if (j.contains("segments")) {
      for (const auto& s : j.at("segments")) {
        ex.segments.push_back({s.at("text").get<std::string>(), s.value("alternative", false)});
      }
    }
    if (j.contains("prompt_ids")) ex.prompt_ids = j.at("prompt_ids").get<std::vector<TokenId>>();
    return ex;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("task example: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("task example: ") + e.what());
  }
}

LetterCount most_common_letter(std::string_view word) {
  std::array<std::size_t, 256> counts{};
  for (unsigned char c : word) ++counts[c];
  LetterCount best;
  for (char c : word) {
    const auto n = counts[static_cast<unsigned char>(c)];
    if (n > best.count) best = {c, n};
  }
  return best;
}

std::vector<std::string> count_chars_candidates(const Vocabulary& vocab) {
  std::vector<std::string> out;
  vocab.for_each([&](const std::string& unit, TokenId) {
    if (unit.size() < 5 || unit.size() > 10) return;
    if (std::all_of(unit.begin(), unit.end(), [](char c) { return c >= 'a' && c <= 'z'; })) out.push_back(unit);
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TaskExample> gen_count_chars(const Vocabulary& vocab, std::size_t n, Rng& rng) {
  std::vector<std::string> pool = count_chars_candidates(vocab);
  if (pool.size() < n) {
    throw DataError("count_chars: need " + std::to_string(n) + " qualifying vocabulary units, found " +
                    std::to_string(pool.size()));
  }
  std::vector<TaskExample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Partial Fisher-Yates: pool[i] becomes a uniform pick from the rest.
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    const std::string& word = pool[i];
    const LetterCount best = most_common_letter(word);
    TaskExample ex;
    ex.id = make_id(TaskKind::count_chars, i);
    ex.kind = TaskKind::count_chars;
    ex.prompt = "Count the number of the letter '" + std::string(1, best.letter) + "' in the word " + word + ".";
    ex.gold = static_cast<std::int64_t>(best.count);
    ex.seed = rng.seed();
    ex.details = {{"word", word}, {"letter", std::string(1, best.letter)}};
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<TaskExample> gen_acronyms(std::size_t n, std::size_t length, Rng& rng) {
  if (length == 0) throw std::invalid_argument("acronym length must be positive");
  std::vector<TaskExample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string acronym;
    for (std::size_t k = 0; k < length; ++k) acronym.push_back(random_letter(rng));
    TaskExample ex;
    ex.id = make_id(TaskKind::acronym, i);
    ex.kind = TaskKind::acronym;
    ex.system = kAcronymSystem;
    ex.prompt = "Come up with a sequence of words where the first letters would form this acronym: " + acronym;
    ex.gold = acronym;
    ex.seed = rng.seed();
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<TaskExample> gen_arithmetic(std::size_t n, std::size_t digits, Rng& rng) {
  if (digits < 1 || digits > 18) throw std::invalid_argument("arithmetic digits must be in [1, 18]");
  const std::int64_t lo = digits == 1 ? 0 : pow10(digits - 1);
  const std::int64_t hi = pow10(digits) - 1;
  auto operand = [&] { return lo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))); };

  std::vector<TaskExample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool add = i % 2 == 0;
    const std::int64_t a = operand();
    const std::int64_t b = operand();
    TaskExample ex;
    ex.id = make_id(TaskKind::arithmetic, i);
    ex.kind = TaskKind::arithmetic;
    ex.system = kArithmeticSystem;
    ex.prompt = std::to_string(a) + (add ? " + " : " - ") + std::to_string(b) + " =";
    ex.gold = add ? a + b : a - b;
    ex.seed = rng.seed();
    ex.details = {{"a", a}, {"b", b}, {"op", add ? "+" : "-"}};
    out.push_back(std::move(ex));
  }
  return out;
}

std::string gen_misspelling(std::string_view word, Rng& rng) {
  if (word.size() < 2) throw std::invalid_argument("misspelling needs a word of at least two characters");
  std::string out(word);
  switch (rng.below(3)) {
    case 0: {  // insert
      const auto pos = static_cast<std::ptrdiff_t>(rng.below(out.size() + 1));
      out.insert(out.begin() + pos, random_letter(rng));
      break;
    }
    case 1: {  // delete
      out.erase(out.begin() + static_cast<std::ptrdiff_t>(rng.below(out.size())));
      break;
    }
    default: {  // substitute, never with the same letter
      const auto pos = rng.below(out.size());
      char c = static_cast<char>('a' + rng.below(25));
      if (c >= out[pos] && out[pos] >= 'a' && out[pos] <= 'z') ++c;
      out[pos] = c;
      break;
    }
  }
  return out;
}

}  // namespace noncanon
