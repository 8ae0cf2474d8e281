#include "noncanon/granularity.hpp"

#include <algorithm>
#include <compare>
#include <numeric>
#include <stdexcept>

namespace noncanon {

Ratio::Ratio(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num < 0) throw std::invalid_argument("ratio must be non-negative with positive denominator");
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
  const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Ratio::to_string(int places) const {
  __int128 scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const __int128 scaled = (static_cast<__int128>(num_) * scale * 2 + den_) / (2 * static_cast<__int128>(den_));
  const auto whole = static_cast<std::int64_t>(scaled / scale);
  auto frac = static_cast<std::int64_t>(scaled % scale);
  std::string out = std::to_string(whole);
  if (places > 0) {
    std::string digits = std::to_string(frac);
    out += '.' + std::string(static_cast<std::size_t>(places) - digits.size(), '0') + digits;
  }
  return out;
}

double Ratio::rounded(int places) const { return std::stod(to_string(places)); }

Ratio parse_ratio(std::string_view decimal) {
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool seen_point = false;
  bool seen_digit = false;
  for (char c : decimal) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      seen_digit = true;
      if (num > (INT64_MAX - 9) / 10 || (seen_point && den > INT64_MAX / 10)) {
        throw std::invalid_argument("ratio literal too long: " + std::string(decimal));
      }
      num = num * 10 + (c - '0');
      if (seen_point) den *= 10;
    } else {
      throw std::invalid_argument("not a non-negative decimal: '" + std::string(decimal) + "'");
    }
  }
  if (!seen_digit) throw std::invalid_argument("not a non-negative decimal: '" + std::string(decimal) + "'");
  return Ratio(num, den);
}

Ratio length_ratio(std::size_t alt_length, std::size_t canon_length) {
  if (canon_length == 0) throw std::invalid_argument("length ratio: empty canonical tokenization");
  return Ratio(static_cast<std::int64_t>(alt_length), static_cast<std::int64_t>(canon_length));
}

Ratio length_ratio(const TokenSequence& alt, const TokenSequence& canon) {
  return length_ratio(alt.size(), canon.size());
}

std::size_t RatioHistogram::total() const {
  std::size_t n = below + above;
  for (const auto& b : buckets) n += b.count;
  return n;
}

RatioHistogram bucket_by_ratio(std::span<const GranularityRecord> records, std::span<const Ratio> edges) {
  if (edges.size() < 2) throw std::invalid_argument("bucket edges: need at least two edges");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i - 1] < edges[i])) throw std::invalid_argument("bucket edges must be strictly increasing");
  }
  RatioHistogram hist;
  std::vector<double> sums(edges.size() - 1, 0.0);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) hist.buckets.push_back({edges[i], edges[i + 1], 0, 0.0});

  for (const auto& rec : records) {
    const Ratio r = rec.ratio();
    if (r < edges.front()) {
      ++hist.below;
      continue;
    }
    if (r >= edges.back()) {
      ++hist.above;
      continue;
    }
    // Last edge <= r.
    auto it = std::upper_bound(edges.begin(), edges.end(), r);
    const auto idx = static_cast<std::size_t>(it - edges.begin()) - 1;
    ++hist.buckets[idx].count;
    sums[idx] += r.value();
  }
  for (std::size_t i = 0; i < hist.buckets.size(); ++i) {
    if (hist.buckets[i].count > 0) hist.buckets[i].mean_ratio = sums[i] / static_cast<double>(hist.buckets[i].count);
  }
  return hist;
}

}  // namespace noncanon
