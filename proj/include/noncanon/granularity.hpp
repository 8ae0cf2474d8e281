#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noncanon/tokenizer.hpp"

namespace noncanon {

// Exact non-negative rational, always reduced, den > 0.
class Ratio {
 public:
  Ratio() = default;
  Ratio(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  // Decimal rendering rounded half-up at `places` digits, e.g. "1.333333".
  std::string to_string(int places = 6) const;
  // `value()` rounded to `places` decimals.
  double rounded(int places = 6) const;

  friend bool operator==(const Ratio& a, const Ratio& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Parses a non-negative decimal such as "2", "1.25" or ".5" exactly.
// Throws std::invalid_argument.
Ratio parse_ratio(std::string_view decimal);

// |alt| / |canon|. Throws std::invalid_argument when canon_length is 0.
Ratio length_ratio(std::size_t alt_length, std::size_t canon_length);
Ratio length_ratio(const TokenSequence& alt, const TokenSequence& canon);

struct GranularityRecord {
  std::string id;
  std::size_t canonical_length = 0;
  std::size_t alternative_length = 0;

  Ratio ratio() const { return length_ratio(alternative_length, canonical_length); }
};

struct RatioBucket {
  Ratio lower;
  Ratio upper;
  std::size_t count = 0;
  double mean_ratio = 0.0;  // 0 when empty
};

// Half-open buckets [edge_i, edge_{i+1}); records below the first edge or at
// or above the last edge go to the two overflow counters, so the counts
// always sum to the number of records.
struct RatioHistogram {
  std::vector<RatioBucket> buckets;
  std::size_t below = 0;
  std::size_t above = 0;

  std::size_t total() const;
};

// Throws std::invalid_argument unless edges are strictly increasing (and at
// least two).
RatioHistogram bucket_by_ratio(std::span<const GranularityRecord> records, std::span<const Ratio> edges);

}  // namespace noncanon
