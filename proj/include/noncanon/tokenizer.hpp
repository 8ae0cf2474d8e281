#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "noncanon/pretokenizer.hpp"

namespace noncanon {

using TokenId = std::uint32_t;

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
};

// Token surface units are stored as raw bytes; the printable byte alphabet is
// only a file/display encoding.
class Vocabulary {
 public:
  // Throws FormatError on a duplicate unit or ID.
  void add(std::string unit, TokenId id);

  std::optional<TokenId> find(std::string_view unit) const;
  bool contains(std::string_view unit) const { return find(unit).has_value(); }
  // Throws std::out_of_range for an unknown ID.
  const std::string& unit(TokenId id) const;
  bool contains_id(TokenId id) const { return id_to_unit_.count(id) != 0; }

  std::size_t size() const { return unit_to_id_.size(); }
  std::size_t max_unit_length() const { return max_unit_length_; }
  // True when all 256 single-byte units are present.
  bool has_all_bytes() const;

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [unit, id] : unit_to_id_) fn(unit, id);
  }

 private:
  std::unordered_map<std::string, TokenId, StringHash, std::equal_to<>> unit_to_id_;
  std::unordered_map<TokenId, std::string> id_to_unit_;
  std::size_t max_unit_length_ = 0;
};

struct MergeRule {
  TokenId left;
  TokenId right;
  TokenId result;
};

class MergeRules {
 public:
  struct Hit {
    std::uint32_t rank;
    TokenId result;
  };

  void push_back(MergeRule rule);
  std::optional<Hit> find(TokenId left, TokenId right) const;
  std::size_t size() const { return rules_.size(); }
  const MergeRule& operator[](std::size_t rank) const { return rules_[rank]; }

 private:
  std::vector<MergeRule> rules_;
  std::unordered_map<std::uint64_t, std::uint32_t> rank_of_pair_;
};

// Token IDs with their raw-byte surface units, kept in lockstep.
struct TokenSequence {
  std::vector<TokenId> ids;
  std::vector<std::string> units;

  std::size_t size() const { return ids.size(); }
  bool empty() const { return ids.empty(); }
  void push_back(TokenId id, std::string unit) {
    ids.push_back(id);
    units.push_back(std::move(unit));
  }
  void append(const TokenSequence& other) {
    ids.insert(ids.end(), other.ids.begin(), other.ids.end());
    units.insert(units.end(), other.units.begin(), other.units.end());
  }
  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

// How units are spelled in vocab.json / merges.txt.
enum class UnitEncoding { byte_alphabet, raw };
// Whether base units are single bytes or UTF-8 characters.
enum class BaseUnits { auto_detect, bytes, chars };

struct TokenizerOptions {
  PretokConfig pretok;
  UnitEncoding unit_encoding = UnitEncoding::byte_alphabet;
  BaseUnits base_units = BaseUnits::auto_detect;

  // Reads the pretokenizer config file; also accepts "unit_encoding"
  // ("byte_alphabet"|"raw") and "base_units" ("auto"|"bytes"|"chars").
  static TokenizerOptions load(const std::filesystem::path& config_file);
  static TokenizerOptions from_json(const nlohmann::json& j);
};

// Returns true when the merge about to be applied should be skipped.
using MergeSkipFn = std::function<bool()>;

class Tokenizer {
 public:
  static Tokenizer load(const std::filesystem::path& vocab_file, const std::filesystem::path& merges_file,
                        const TokenizerOptions& options = {});

  // Units are raw bytes here. Merges are (left, right) unit pairs in rank order.
  static Tokenizer from_parts(Vocabulary vocab, const std::vector<std::pair<std::string, std::string>>& merges,
                              const TokenizerOptions& options = {});

  const Vocabulary& vocab() const { return vocab_; }
  const MergeRules& merges() const { return merges_; }
  const TokenizerOptions& options() const { return options_; }
  bool byte_level() const { return byte_level_; }
  // Stable hash of vocabulary, merges and options.
  const std::string& fingerprint() const { return fingerprint_; }

  std::vector<PretokenSpan> pretokenize(std::string_view text) const;

  // Canonical BPE: per pretoken, start from base units and repeatedly apply
  // the lowest-rank applicable merge (leftmost on equal rank).
  TokenSequence encode(std::string_view text) const;

  // BPE over a single piece of text, with no pretokenization. When `skip` is
  // set, applicable merges are tried in (rank, position) order and each one is
  // applied unless skip() returns true; the pass stops when every candidate
  // was skipped.
  void encode_piece(std::string_view piece, TokenSequence& out, const MergeSkipFn& skip = {}) const;

  // Unmerged base units of a piece (bytes, or UTF-8 characters).
  std::vector<TokenId> base_units(std::string_view piece) const;

  // Throws std::out_of_range on unknown IDs.
  std::string decode(std::span<const TokenId> ids) const;

  // Unit spelled the way the vocabulary files spell it (see UnitEncoding).
  std::string display_unit(std::string_view raw_unit) const;

  TokenSequence make_sequence(std::span<const TokenId> ids) const;

 private:
  Vocabulary vocab_;
  MergeRules merges_;
  TokenizerOptions options_;
  bool byte_level_ = false;
  std::string fingerprint_;
};

// Concatenation of the surface units.
std::string decode(const TokenSequence& seq);

}  // namespace noncanon
