#include "noncanon/pretokenizer.hpp"

#include "noncanon/error.hpp"
#include "noncanon/unicode.hpp"

namespace noncanon {
namespace {

enum class CharClass { letter, number, space, other };

struct Cursor {
  std::string_view text;

  bool at_end(std::size_t pos) const { return pos >= text.size(); }

  unicode::CodePoint at(std::size_t pos) const { return unicode::decode_at(text, pos); }

  CharClass classify(std::size_t pos) const {
    auto cp = at(pos);
    if (!cp.valid) return CharClass::other;
    if (unicode::is_letter(cp.value)) return CharClass::letter;
    if (unicode::is_number(cp.value)) return CharClass::number;
    if (unicode::is_whitespace(cp.value)) return CharClass::space;
    return CharClass::other;
  }

  bool is(std::size_t pos, CharClass cls) const { return !at_end(pos) && classify(pos) == cls; }

  bool is_newline(std::size_t pos) const {
    return !at_end(pos) && (text[pos] == '\n' || text[pos] == '\r');
  }

  std::size_t next(std::size_t pos) const { return pos + at(pos).length; }

  // End of the run of `cls` starting at pos, capped at `max_chars` (0 = no cap).
  std::size_t run(std::size_t pos, CharClass cls, std::size_t max_chars = 0) const {
    std::size_t n = 0;
    while (is(pos, cls) && (max_chars == 0 || n < max_chars)) {
      pos = next(pos);
      ++n;
    }
    return pos;
  }
};

SpanKind kind_of_other_run(const Cursor& c, std::size_t begin) {
  std::size_t pos = begin;
  if (c.text[pos] == ' ') ++pos;
  auto cp = c.at(pos);
  return cp.valid && unicode::is_punctuation(cp.value) ? SpanKind::punctuation : SpanKind::other;
}

// Length of a contraction suffix ('s, 't, 're, 've, 'm, 'll, 'd) at pos, or 0.
std::size_t contraction(std::string_view text, std::size_t pos, bool ignore_case) {
  if (pos >= text.size() || text[pos] != '\'') return 0;
  auto lower = [&](std::size_t i) -> char {
    if (i >= text.size()) return '\0';
    char ch = text[i];
    if (ignore_case && ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    return ch;
  };
  const char a = lower(pos + 1);
  if (a == 's' || a == 't' || a == 'm' || a == 'd') return 2;
  const char b = lower(pos + 2);
  if ((a == 'r' && b == 'e') || (a == 'v' && b == 'e') || (a == 'l' && b == 'l')) return 3;
  return 0;
}

// \s+(?!\S) falling back to \s+, for a whitespace run starting at pos.
std::size_t whitespace_tail(const Cursor& c, std::size_t pos) {
  std::size_t end = c.run(pos, CharClass::space);
  if (c.at_end(end)) return end;
  // Leave the last whitespace character for the following pretoken.
  std::size_t last = pos;
  for (std::size_t p = pos; p < end; p = c.next(p)) last = p;
  return last > pos ? last : end;
}

PretokenSpan match_gpt2(const Cursor& c, std::size_t pos, std::size_t digit_chunk) {
  if (std::size_t n = contraction(c.text, pos, false)) return {pos, pos + n, SpanKind::word};

  const std::size_t body = c.text[pos] == ' ' ? pos + 1 : pos;
  if (c.is(body, CharClass::letter)) return {pos, c.run(body, CharClass::letter), SpanKind::word};
  if (c.is(body, CharClass::number)) {
    return {pos, c.run(body, CharClass::number, digit_chunk), SpanKind::digits};
  }
  if (c.is(body, CharClass::other)) {
    return {pos, c.run(body, CharClass::other), kind_of_other_run(c, pos)};
  }
  return {pos, whitespace_tail(c, pos), SpanKind::whitespace};
}

PretokenSpan match_llama3(const Cursor& c, std::size_t pos, std::size_t digit_chunk) {
  if (std::size_t n = contraction(c.text, pos, true)) return {pos, pos + n, SpanKind::word};

  const CharClass here = c.classify(pos);
  if (here == CharClass::letter) return {pos, c.run(pos, CharClass::letter), SpanKind::word};
  if (here != CharClass::number && !c.is_newline(pos)) {
    const std::size_t after = c.next(pos);
    if (c.is(after, CharClass::letter)) return {pos, c.run(after, CharClass::letter), SpanKind::word};
  }
  if (here == CharClass::number) {
    return {pos, c.run(pos, CharClass::number, digit_chunk), SpanKind::digits};
  }

  const std::size_t body = c.text[pos] == ' ' ? pos + 1 : pos;
  if (c.is(body, CharClass::other)) {
    std::size_t end = c.run(body, CharClass::other);
    while (c.is_newline(end)) ++end;
    return {pos, end, kind_of_other_run(c, pos)};
  }

  // Whitespace: \s*[\r\n]+ wins when the run holds a line break.
  const std::size_t run_end = c.run(pos, CharClass::space);
  std::size_t last_newline = std::string_view::npos;
  for (std::size_t p = pos; p < run_end; p = c.next(p)) {
    if (c.is_newline(p)) last_newline = p;
  }
  if (last_newline != std::string_view::npos) return {pos, last_newline + 1, SpanKind::whitespace};
  return {pos, whitespace_tail(c, pos), SpanKind::whitespace};
}

}  // namespace

std::string_view to_string(SpanKind kind) {
  switch (kind) {
    case SpanKind::word: return "word";
    case SpanKind::whitespace: return "whitespace";
    case SpanKind::digits: return "digits";
    case SpanKind::punctuation: return "punctuation";
    case SpanKind::other: return "other";
  }
  return "other";
}

PretokConfig PretokConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("pretokenizer config must be a JSON object");
  PretokConfig cfg;
  const std::string pattern = j.value("pattern", std::string("gpt2"));
  if (pattern == "gpt2") {
    cfg = gpt2();
  } else if (pattern == "llama3") {
    cfg = llama3();
  } else {
    throw FormatError("unknown pretokenizer pattern '" + pattern + "'");
  }
  if (j.contains("digit_chunk")) {
    const auto& d = j.at("digit_chunk");
    if (!d.is_number_integer() || d.get<std::int64_t>() < 0) throw FormatError("digit_chunk must be a non-negative integer");
    cfg.digit_chunk = d.get<std::size_t>();
  }
  return cfg;
}

nlohmann::json PretokConfig::to_json() const {
  return {{"pattern", pattern == PretokPattern::gpt2 ? "gpt2" : "llama3"}, {"digit_chunk", digit_chunk}};
}

std::vector<PretokenSpan> pretokenize(std::string_view text, const PretokConfig& config) {
  std::vector<PretokenSpan> spans;
  const Cursor cursor{text};
  std::size_t pos = 0;
  while (pos < text.size()) {
    PretokenSpan span = config.pattern == PretokPattern::gpt2
                            ? match_gpt2(cursor, pos, config.digit_chunk)
                            : match_llama3(cursor, pos, config.digit_chunk);
    spans.push_back(span);
    pos = span.end;
  }
  return spans;
}

}  // namespace noncanon
