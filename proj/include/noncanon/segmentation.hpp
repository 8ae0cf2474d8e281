#pragma once

#include <cstddef>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "noncanon/rng.hpp"
#include "noncanon/tokenizer.hpp"

namespace noncanon {

using SegmentationCount = BigInt;

// Units (raw bytes) whose concatenation is the segmented token.
using Segmentation = std::vector<std::string>;

// Memo table for one token: completions(i) is the number of ways to segment
// token[i:] into vocabulary units, with completions(|token|) = 1 and
//   completions(i) = sum of completions(j) over j with token[i:j] in the vocabulary.
class SegmentationTable {
 public:
  SegmentationTable(std::string token, const Vocabulary& vocab);

  const std::string& token() const { return token_; }
  std::size_t length() const { return token_.size(); }

  const SegmentationCount& completions(std::size_t start) const { return counts_.at(start); }
  const SegmentationCount& total() const { return counts_.front(); }

  // Ends j > start with token[start:j] in the vocabulary and completions(j) > 0,
  // in increasing order.
  const std::vector<std::size_t>& ends(std::size_t start) const { return ends_.at(start); }

  // Uniform over all segmentations (each has probability 1 / total()).
  // With exclude_identity, uniform over segmentations other than [token];
  // falls back to [token] when it is the only one. Throws DataError when
  // total() is 0.
  Segmentation sample(Rng& rng, bool exclude_identity = false) const;

  // Segmentations ordered lexicographically by their split positions,
  // truncated at `limit`.
  std::vector<Segmentation> enumerate(std::size_t limit) const;

 private:
  std::string token_;
  std::vector<SegmentationCount> counts_;
  std::vector<std::vector<std::size_t>> ends_;
};

// Throws std::invalid_argument for an empty token.
SegmentationCount count_segmentations(std::string_view token, const Vocabulary& vocab);
std::vector<Segmentation> enumerate_segmentations(std::string_view token, const Vocabulary& vocab,
                                                  std::size_t limit);
Segmentation sample_segmentation(std::string_view token, const Vocabulary& vocab, Rng& rng);

// Bounded LRU of segmentation tables keyed by token bytes. Safe for
// concurrent use; tables are immutable once built.
class SegmentationCache {
 public:
  static constexpr std::size_t kDefaultCapacity = 100'000;

  explicit SegmentationCache(const Vocabulary& vocab, std::size_t capacity = kDefaultCapacity);

  std::shared_ptr<const SegmentationTable> get(std::string_view token);

  std::size_t size() const;
  std::size_t capacity() const { return capacity_; }

 private:
  using Lru = std::list<std::string>;
  struct Entry {
    std::shared_ptr<const SegmentationTable> table;
    Lru::iterator position;
  };

  const Vocabulary& vocab_;
  std::size_t capacity_;
  mutable std::mutex mutex_;
  Lru order_;
  std::unordered_map<std::string, Entry, StringHash, std::equal_to<>> entries_;
};

struct RandomTokenizeOptions {
  // Draw only from segmentations finer than the canonical token.
  bool exclude_identity = false;
};

// Canonical encoding, then each token independently replaced by a uniform
// segmentation of its surface unit.
TokenSequence random_tokenize_text(const Tokenizer& tok, std::string_view text, Rng& rng,
                                   const RandomTokenizeOptions& options = {},
                                   SegmentationCache* cache = nullptr);

}  // namespace noncanon
