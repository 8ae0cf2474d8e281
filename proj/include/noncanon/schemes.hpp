#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "noncanon/rng.hpp"
#include "noncanon/segmentation.hpp"
#include "noncanon/tokenizer.hpp"

namespace noncanon {

enum class Scheme { canonical, random, character, dropout, digits_right };

// CLI spellings: canonical, random, char, dropout, digits-right.
std::string_view to_string(Scheme scheme);
// Also accepts "character" and "digits_right". Throws std::invalid_argument.
Scheme parse_scheme(std::string_view name);

struct SchemeConfig {
  Scheme scheme = Scheme::canonical;
  double p = 0.0;  // dropout only
  std::uint64_t seed = 0;
  std::size_t digit_group_size = 3;
  bool exclude_identity = false;  // random only
  bool force_bytes = false;       // char only

  // Throws std::invalid_argument unless 0 <= p <= 1 and digit_group_size >= 1.
  void validate() const;
  nlohmann::json to_json() const;
};

// One token per character: the unit spelling exactly that character when the
// vocabulary has it, otherwise the character's byte units.
TokenSequence char_tokenize(const Tokenizer& tok, std::string_view text, bool force_bytes = false);

// BPE-dropout: canonical merging where every attempted merge application is
// skipped independently with probability p.
TokenSequence dropout_encode(const Tokenizer& tok, std::string_view text, double p, Rng& rng);

// Group sizes for a digit run of `run_length`, aligned from the right:
// first group ((L-1) mod g) + 1, the rest exactly g.
std::vector<std::size_t> right_aligned_groups(std::size_t run_length, std::size_t group_size = 3);

// Canonical encoding except that maximal ASCII digit runs are cut into
// right-aligned groups. A group that is not a single vocabulary unit falls
// back to one token per digit.
TokenSequence digits_right_encode(const Tokenizer& tok, std::string_view text, std::size_t group_size = 3);

struct SchemeOutput {
  TokenSequence tokens;
  SchemeConfig config;  // provenance: scheme, parameters and seed used
  std::string rng = std::string(Rng::kName);
};

// Dispatches on cfg.scheme. Random and dropout draw from Rng(cfg.seed).
SchemeOutput apply_scheme(const Tokenizer& tok, std::string_view text, const SchemeConfig& cfg,
                          SegmentationCache* cache = nullptr);

}  // namespace noncanon
