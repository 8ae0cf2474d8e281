#include "noncanon/segmentation.hpp"

#include <algorithm>
#include <stdexcept>

#include "noncanon/error.hpp"

namespace noncanon {

SegmentationTable::SegmentationTable(std::string token, const Vocabulary& vocab)
    : token_(std::move(token)), counts_(token_.size() + 1), ends_(token_.size() + 1) {
  const std::size_t n = token_.size();
  const std::size_t max_len = vocab.max_unit_length();
  const std::string_view view(token_);
  counts_[n] = 1;
  for (std::size_t start = n; start-- > 0;) {
    SegmentationCount total = 0;
    const std::size_t last = std::min(n, start + max_len);
    for (std::size_t end = start + 1; end <= last; ++end) {
      if (counts_[end] == 0) continue;
      if (!vocab.contains(view.substr(start, end - start))) continue;
      total += counts_[end];
      ends_[start].push_back(end);
    }
    counts_[start] = std::move(total);
  }
}

Segmentation SegmentationTable::sample(Rng& rng, bool exclude_identity) const {
  if (total() == 0) throw DataError("no valid segmentation exists");
  const std::size_t n = length();
  Segmentation out;
  std::size_t start = 0;
  while (start < n) {
    const auto& choices = ends(start);
    // At the root, dropping the single-step branch (end == n) removes exactly
    // the identity segmentation, whose subtree has one leaf.
    const bool drop_identity = exclude_identity && start == 0 && !choices.empty() && choices.back() == n &&
                               total() > 1;
    const SegmentationCount weight_total = drop_identity ? total() - 1 : completions(start);
    // Walk prefix sums with a uniform draw in [0, weight_total).
    SegmentationCount pick = rng.below(weight_total);
    std::size_t chosen = choices.back();
    for (std::size_t end : choices) {
      if (drop_identity && end == n) continue;
      const auto& w = completions(end);
      if (pick < w) {
        chosen = end;
        break;
      }
      pick -= w;
    }
    out.push_back(token_.substr(start, chosen - start));
    start = chosen;
  }
  return out;
}

std::vector<Segmentation> SegmentationTable::enumerate(std::size_t limit) const {
  std::vector<Segmentation> out;
  if (limit == 0 || total() == 0) return out;
  Segmentation current;
  // Iterative DFS over (start, index into ends(start)).
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty() && out.size() < limit) {
    auto& [start, idx] = stack.back();
    if (start == length()) {
      out.push_back(current);
      stack.pop_back();
      if (!current.empty()) current.pop_back();
      continue;
    }
    const auto& choices = ends(start);
    if (idx == choices.size()) {
      stack.pop_back();
      if (!current.empty()) current.pop_back();
      continue;
    }
    const std::size_t end = choices[idx++];
    current.push_back(token_.substr(start, end - start));
    stack.emplace_back(end, 0);
  }
  return out;
}

SegmentationCount count_segmentations(std::string_view token, const Vocabulary& vocab) {
  if (token.empty()) throw std::invalid_argument("count_segmentations: empty token");
  return SegmentationTable(std::string(token), vocab).total();
}

std::vector<Segmentation> enumerate_segmentations(std::string_view token, const Vocabulary& vocab,
                                                  std::size_t limit) {
  if (token.empty()) throw std::invalid_argument("enumerate_segmentations: empty token");
  if (limit == 0) throw std::invalid_argument("enumerate_segmentations: limit must be positive");
  return SegmentationTable(std::string(token), vocab).enumerate(limit);
}

Segmentation sample_segmentation(std::string_view token, const Vocabulary& vocab, Rng& rng) {
  if (token.empty()) throw std::invalid_argument("sample_segmentation: empty token");
  return SegmentationTable(std::string(token), vocab).sample(rng);
}

SegmentationCache::SegmentationCache(const Vocabulary& vocab, std::size_t capacity)
    : vocab_(vocab), capacity_(std::max<std::size_t>(capacity, 1)) {}

std::shared_ptr<const SegmentationTable> SegmentationCache::get(std::string_view token) {
  {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(token);
    if (it != entries_.end()) {
      order_.splice(order_.begin(), order_, it->second.position);
      return it->second.table;
    }
  }
  // Built outside the lock; a racing duplicate build is harmless since
  // tables are deterministic.
  auto table = std::make_shared<const SegmentationTable>(std::string(token), vocab_);
  std::lock_guard lock(mutex_);
  auto it = entries_.find(token);
  if (it != entries_.end()) return it->second.table;
  order_.emplace_front(token);
  entries_.emplace(order_.front(), Entry{table, order_.begin()});
  while (entries_.size() > capacity_) {
    entries_.erase(entries_.find(order_.back()));
    order_.pop_back();
  }
  return table;
}

std::size_t SegmentationCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

TokenSequence random_tokenize_text(const Tokenizer& tok, std::string_view text, Rng& rng,
                                   const RandomTokenizeOptions& options, SegmentationCache* cache) {
  const TokenSequence canonical = tok.encode(text);
  TokenSequence out;
  out.ids.reserve(canonical.size());
  out.units.reserve(canonical.size());
  for (const auto& unit : canonical.units) {
    std::shared_ptr<const SegmentationTable> table =
        cache ? cache->get(unit) : std::make_shared<const SegmentationTable>(unit, tok.vocab());
    for (auto& piece : table->sample(rng, options.exclude_identity)) {
      const TokenId id = *tok.vocab().find(piece);
      out.push_back(id, std::move(piece));
    }
  }
  return out;
}

}  // namespace noncanon
