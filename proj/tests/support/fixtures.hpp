#pragma once

#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "noncanon/tokenizer.hpp"
#include "support/oracles.hpp"

namespace fixtures {

inline const noncanon::Tokenizer& toy() {
  static const auto tok =
      noncanon::Tokenizer::load(oracle::fixture("toy/vocab.json"), oracle::fixture("toy/merges.txt"));
  return tok;
}

inline const noncanon::Tokenizer& toy_ext() {
  static const auto tok =
      noncanon::Tokenizer::load(oracle::fixture("toy_ext/vocab.json"), oracle::fixture("toy_ext/merges.txt"));
  return tok;
}

inline const noncanon::Tokenizer& real_gpt2() {
  static const auto tok = noncanon::Tokenizer::load(
      oracle::fixture("real/vocab.json"), oracle::fixture("real/merges.txt"),
      noncanon::TokenizerOptions::load(oracle::fixture("real/pretok_gpt2.json")));
  return tok;
}

inline const noncanon::Tokenizer& real_llama3() {
  static const auto tok = noncanon::Tokenizer::load(
      oracle::fixture("real/vocab.json"), oracle::fixture("real/merges.txt"),
      noncanon::TokenizerOptions::load(oracle::fixture("real/pretok_llama3.json")));
  return tok;
}

inline const std::set<std::string>& toy_units() {
  static const std::set<std::string> units{"a", "b", "c", "ab", "bc", "abc"};
  return units;
}

struct Line {
  std::string id;
  std::string text;
};

inline std::vector<Line> corpus() {
  std::vector<Line> out;
  std::ifstream in(oracle::fixture("corpus.jsonl"));
  std::string line;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    out.push_back({j["id"].get<std::string>(), j["text"].get<std::string>()});
  }
  return out;
}

inline std::vector<std::pair<std::string, std::vector<noncanon::TokenId>>> reference(const std::string& name) {
  std::vector<std::pair<std::string, std::vector<noncanon::TokenId>>> out;
  std::ifstream in(oracle::fixture("real/" + name));
  std::string line;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    out.emplace_back(j["id"].get<std::string>(), j["ids"].get<std::vector<noncanon::TokenId>>());
  }
  return out;
}

}  // namespace fixtures
