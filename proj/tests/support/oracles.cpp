#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace oracle {

std::string fixture(std::string_view relative) { return std::string(NONCANON_FIXTURES) + "/" + std::string(relative); }
std::string data(std::string_view relative) { return std::string(NONCANON_DATA) + "/" + std::string(relative); }

namespace {

void recurse(std::string_view rest, const std::set<std::string>& units, std::vector<std::string>& path,
             std::vector<std::vector<std::string>>& out) {
  if (rest.empty()) {
    out.push_back(path);
    return;
  }
  // Shorter first piece means an earlier split position.
  for (std::size_t len = 1; len <= rest.size(); ++len) {
    std::string piece(rest.substr(0, len));
    if (units.count(piece) == 0) continue;
    path.push_back(piece);
    recurse(rest.substr(len), units, path, out);
    path.pop_back();
  }
}

}  // namespace

std::vector<std::vector<std::string>> brute_force_segmentations(std::string_view s,
                                                                const std::set<std::string>& units) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> path;
  recurse(s, units, path, out);
  return out;
}

double chi_square_p(const std::vector<double>& observed, const std::vector<double>& expected) {
  if (observed.size() != expected.size() || observed.size() < 2) throw std::invalid_argument("chi-square sizes");
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

double chi_square_uniform_p(const std::vector<std::size_t>& observed) {
  const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
  std::vector<double> obs(observed.begin(), observed.end());
  std::vector<double> exp(observed.size(), total / static_cast<double>(observed.size()));
  return chi_square_p(obs, exp);
}

KendallResult kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 3) throw std::invalid_argument("kendall sizes");
  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[j] - x[i];
      const double dy = y[j] - y[i];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        ++ties_x;
      } else if (dy == 0) {
        ++ties_y;
      } else if ((dx > 0) == (dy > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double n0 = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double s = static_cast<double>(concordant - discordant);
  KendallResult r;
  const double denom = std::sqrt(static_cast<double>(concordant + discordant + ties_x) *
                                 static_cast<double>(concordant + discordant + ties_y));
  r.tau = denom > 0 ? s / denom : 0.0;

  if (ties_x == 0 && ties_y == 0 && n <= 10) {
    // Exact null distribution of S by counting inversions over all permutations.
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    long long at_least = 0, total = 0;
    do {
      long long c = 0, d = 0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) (perm[j] > perm[i] ? c : d)++;
      }
      ++total;
      if (static_cast<double>(c - d) >= s) ++at_least;
    } while (std::next_permutation(perm.begin(), perm.end()));
    r.p_value = static_cast<double>(at_least) / static_cast<double>(total);
    return r;
  }
  const double var = static_cast<double>(n) * (n - 1) * (2.0 * n + 5) / 18.0;
  const double z = (s - (s > 0 ? 1 : s < 0 ? -1 : 0)) / std::sqrt(var);
  boost::math::normal std_normal;
  r.p_value = boost::math::cdf(boost::math::complement(std_normal, z));
  (void)n0;
  return r;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<std::string> group_digits_from_right(std::string_view digits, std::size_t group) {
  std::vector<std::string> rev;
  std::size_t end = digits.size();
  while (end > 0) {
    const std::size_t start = end >= group ? end - group : 0;
    rev.emplace_back(digits.substr(start, end - start));
    end = start;
  }
  return {rev.rbegin(), rev.rend()};
}

std::vector<char32_t> byte_alphabet_table() {
  std::vector<char32_t> table(256, 0);
  std::vector<bool> printable(256, false);
  for (int b = '!'; b <= '~'; ++b) printable[b] = true;
  for (int b = 0xA1; b <= 0xAC; ++b) printable[b] = true;
  for (int b = 0xAE; b <= 0xFF; ++b) printable[b] = true;
  char32_t next = 256;
  for (int b = 0; b < 256; ++b) table[b] = printable[b] ? static_cast<char32_t>(b) : next++;
  return table;
}

std::string to_printable(std::string_view raw) {
  static const auto table = byte_alphabet_table();
  std::string out;
  for (unsigned char c : raw) {
    const char32_t cp = table[c];
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

}  // namespace oracle

namespace oracle {
namespace {

void put_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace

std::string random_text(std::mt19937_64& gen, std::size_t max_chars) {
  std::uniform_int_distribution<std::size_t> len_dist(0, max_chars);
  std::uniform_int_distribution<int> kind(0, 99);
  const std::size_t n = len_dist(gen);
  std::string out;
  static constexpr std::string_view punct = ".,;:!?'\"()[]{}-_/\\@#$%^&*+=<>|~`";
  static constexpr std::string_view spaces = "  \t\n\r";
  for (std::size_t i = 0; i < n; ++i) {
    const int k = kind(gen);
    if (k < 45) {
      out.push_back(static_cast<char>('a' + std::uniform_int_distribution<int>(0, 25)(gen)));
    } else if (k < 52) {
      out.push_back(static_cast<char>('A' + std::uniform_int_distribution<int>(0, 25)(gen)));
    } else if (k < 64) {
      out.push_back(static_cast<char>('0' + std::uniform_int_distribution<int>(0, 9)(gen)));
    } else if (k < 78) {
      out.push_back(spaces[std::uniform_int_distribution<std::size_t>(0, spaces.size() - 1)(gen)]);
    } else if (k < 86) {
      out.push_back(punct[std::uniform_int_distribution<std::size_t>(0, punct.size() - 1)(gen)]);
    } else if (k < 90) {
      put_utf8(out, std::uniform_int_distribution<char32_t>(0xC0, 0x17F)(gen));
    } else if (k < 94) {
      put_utf8(out, std::uniform_int_distribution<char32_t>(0x4E00, 0x9FFF)(gen));
    } else if (k < 96) {
      put_utf8(out, std::uniform_int_distribution<char32_t>(0x1F600, 0x1F64F)(gen));
    } else if (k < 98) {
      put_utf8(out, std::uniform_int_distribution<char32_t>(0x300, 0x36F)(gen));
    } else {
      put_utf8(out, std::uniform_int_distribution<char32_t>(0x2000, 0x206F)(gen));
    }
  }
  return out;
}

}  // namespace oracle
