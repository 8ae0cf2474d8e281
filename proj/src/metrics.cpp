#include "noncanon/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "noncanon/error.hpp"
#include "noncanon/unicode.hpp"

namespace noncanon {

WordList::WordList(std::vector<std::string> words) : words_(std::move(words)) {
  for (const auto& w : words_) set_.insert(unicode::to_lower(w));
}

WordList WordList::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open word list " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  return WordList(std::move(words));
}

SpellingResult spelling(std::string_view generation, const WordList& words) {
  SpellingResult r;
  for (auto raw : unicode::split_whitespace(generation)) {
    const std::string word = unicode::to_lower(unicode::strip_punctuation(raw));
    if (unicode::char_count(word) <= 1) continue;
    ++r.qualifying;
    if (words.contains(word)) ++r.found;
  }
  if (r.qualifying > 0) r.score = static_cast<double>(r.found) / static_cast<double>(r.qualifying);
  return r;
}

double spelling_score(std::string_view generation, const WordList& words) {
  return spelling(generation, words).score;
}

std::size_t word_count(std::string_view generation) { return unicode::split_whitespace(generation).size(); }

double grammaticality_score(std::size_t mistakes, std::size_t words, double spelling) {
  if (spelling < kSpellingGate) return 0.0;
  if (words == 0) throw std::invalid_argument("grammaticality: generation has no words");
  return std::max(0.0, 1.0 - static_cast<double>(mistakes) / static_cast<double>(words));
}

double retention(double canon, double alt) {
  if (!(canon > 0.0)) throw std::invalid_argument("retention: canonical score must be positive");
  return 100.0 * alt / canon;
}

nlohmann::json MetricReport::to_json() const {
  nlohmann::json j;
  auto& recs = j["records"] = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json o = {{"id", r.id}, {"spelling", r.spelling}, {"words", r.words}};
    if (r.mistakes) o["grammar_mistakes"] = *r.mistakes;
    if (r.grammaticality) o["grammaticality"] = *r.grammaticality;
    recs.push_back(std::move(o));
  }
  j["count"] = records.size();
  j["mean_spelling"] = mean_spelling;
  if (mean_grammaticality) j["mean_grammaticality"] = *mean_grammaticality;
  return j;
}

}  // namespace noncanon
