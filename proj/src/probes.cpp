#include "noncanon/probes.hpp"

#include <stdexcept>

namespace noncanon {
namespace {

constexpr std::string_view kLeadWord = "guarantees";
constexpr std::string_view kLeadMisspelling = "garantees";

std::vector<std::string> demo_list(const ProbeOptions& options, std::string_view target, std::size_t shots) {
  std::vector<std::string> out;
  if (shots == 0) return out;
  out.emplace_back(kLeadWord);
  for (const auto& w : options.demo_words) {
    if (out.size() >= shots) break;
    if (w != target && w != kLeadWord && w.size() >= 2) out.push_back(w);
  }
  return out;
}

class PromptBuilder {
 public:
  void canonical(std::string_view s) {
    if (!segments_.empty() && !segments_.back().alternative) {
      segments_.back().text.append(s);
    } else {
      segments_.push_back({std::string(s), false});
    }
  }
  void alternative(std::string_view s) { segments_.push_back({std::string(s), true}); }

  std::string text() const {
    std::string out;
    for (const auto& s : segments_) out += s.text;
    return out;
  }
  std::vector<PromptSegment> take() { return std::move(segments_); }

 private:
  std::vector<PromptSegment> segments_;
};

}  // namespace

std::vector<TokenId> encode_segments(const Tokenizer& tok, const std::vector<PromptSegment>& segments,
                                     const SchemeConfig& alternative) {
  std::vector<TokenId> ids;
  for (const auto& seg : segments) {
    const auto part = seg.alternative ? apply_scheme(tok, seg.text, alternative).tokens : tok.encode(seg.text);
    ids.insert(ids.end(), part.ids.begin(), part.ids.end());
  }
  return ids;
}

TaskExample build_probe(TaskKind kind, std::string_view word, const Tokenizer& tok, const ProbeOptions& options,
                        Rng& rng) {
  if (word.size() < 2) throw std::invalid_argument("probe word must have at least two bytes");
  TaskExample ex;
  ex.kind = kind;
  SchemeConfig alt = options.alternative;
  alt.seed = rng.next();
  ex.seed = alt.seed;
  PromptBuilder b;

  if (kind == TaskKind::word_repeat) {
    b.canonical(kWordRepeatHeader);
    b.canonical("\n\n");
    for (const auto& w : demo_list(options, word, options.word_repeat_shots)) {
      b.canonical("Question: " + w + "\nAnswer: " + w + "\n\n");
    }
    b.canonical("Question:");
    b.alternative(" " + std::string(word));
    b.canonical("\nAnswer: ");
    ex.gold = std::string(word);
    ex.details = {{"word", word}};
  } else if (kind == TaskKind::identify_misspelling) {
    b.canonical(kMisspellingHeader);
    b.canonical("\n\n");
    const auto demos = demo_list(options, word, options.misspelling_shots);
    for (std::size_t i = 0; i < demos.size(); ++i) {
      std::string wrong = i == 0 ? std::string(kLeadMisspelling) : gen_misspelling(demos[i], rng);
      const bool wrong_first = i == 0 ? false : rng.bernoulli(0.5);
      const auto& first = wrong_first ? wrong : demos[i];
      const auto& second = wrong_first ? demos[i] : wrong;
      b.canonical("Question:\n\nA. " + first + "\nB. " + second + "\n\nAnswer: " + (wrong_first ? "A" : "B") +
                  "\n\n");
    }
    const std::string wrong = gen_misspelling(word, rng);
    const bool wrong_first = rng.bernoulli(0.5);
    b.canonical("Question:\n\nA.");
    if (wrong_first) {
      b.canonical(" " + wrong + "\nB.");
      b.alternative(" " + std::string(word));
    } else {
      b.alternative(" " + std::string(word));
      b.canonical("\nB. " + wrong);
    }
    b.canonical("\n\nAnswer:");
    ex.gold = std::string(wrong_first ? "A" : "B");
    ex.details = {{"word", word},
                  {"misspelling", wrong},
                  {"options", wrong_first ? nlohmann::json::array({wrong, std::string(word)})
                                          : nlohmann::json::array({std::string(word), wrong})}};
  } else {
    throw std::invalid_argument("build_probe: unsupported task kind '" + std::string(to_string(kind)) + "'");
  }
  ex.details["scheme"] = alt.to_json();
  ex.prompt = b.text();
  ex.segments = b.take();
  ex.prompt_ids = encode_segments(tok, ex.segments, alt);
  return ex;
}

}  // namespace noncanon
