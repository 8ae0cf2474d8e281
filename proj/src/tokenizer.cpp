#include "noncanon/tokenizer.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "noncanon/byte_alphabet.hpp"
#include "noncanon/error.hpp"
#include "noncanon/unicode.hpp"

namespace noncanon {
namespace {

std::uint64_t pair_key(TokenId left, TokenId right) {
  return (static_cast<std::uint64_t>(left) << 32) | right;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string decode_file_unit(std::string_view spelled, UnitEncoding encoding, std::string_view where) {
  if (encoding == UnitEncoding::raw) return std::string(spelled);
  auto raw = byte_alphabet::decode(spelled);
  if (!raw) throw FormatError(std::string(where) + ": unit '" + std::string(spelled) + "' is outside the byte alphabet");
  return *raw;
}

class Fnv1a {
 public:
  void update(std::string_view bytes) {
    for (unsigned char b : bytes) {
      hash_ ^= b;
      hash_ *= 0x100000001b3ULL;
    }
  }
  void update(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      hash_ ^= (v >> (8 * i)) & 0xFF;
      hash_ *= 0x100000001b3ULL;
    }
  }
  std::string hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 0; i < 16; ++i) out[15 - i] = digits[(hash_ >> (4 * i)) & 0xF];
    return out;
  }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

void Vocabulary::add(std::string unit, TokenId id) {
  if (unit.empty()) throw FormatError("empty vocabulary unit");
  if (unit_to_id_.count(unit) != 0) throw FormatError("duplicate vocabulary unit");
  if (id_to_unit_.count(id) != 0) throw FormatError("duplicate token ID " + std::to_string(id));
  max_unit_length_ = std::max(max_unit_length_, unit.size());
  id_to_unit_.emplace(id, unit);
  unit_to_id_.emplace(std::move(unit), id);
}

std::optional<TokenId> Vocabulary::find(std::string_view unit) const {
  auto it = unit_to_id_.find(unit);
  if (it == unit_to_id_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::unit(TokenId id) const {
  auto it = id_to_unit_.find(id);
  if (it == id_to_unit_.end()) throw std::out_of_range("unknown token ID " + std::to_string(id));
  return it->second;
}

bool Vocabulary::has_all_bytes() const {
  for (int b = 0; b < 256; ++b) {
    const char c = static_cast<char>(b);
    if (!contains(std::string_view(&c, 1))) return false;
  }
  return true;
}

void MergeRules::push_back(MergeRule rule) {
  const auto rank = static_cast<std::uint32_t>(rules_.size());
  // First occurrence keeps its rank if a pair is listed twice.
  rank_of_pair_.emplace(pair_key(rule.left, rule.right), rank);
  rules_.push_back(rule);
}

std::optional<MergeRules::Hit> MergeRules::find(TokenId left, TokenId right) const {
  auto it = rank_of_pair_.find(pair_key(left, right));
  if (it == rank_of_pair_.end()) return std::nullopt;
  return Hit{it->second, rules_[it->second].result};
}

TokenizerOptions TokenizerOptions::from_json(const nlohmann::json& j) {
  TokenizerOptions opts;
  opts.pretok = PretokConfig::from_json(j);
  const std::string enc = j.value("unit_encoding", std::string("byte_alphabet"));
  if (enc == "byte_alphabet") {
    opts.unit_encoding = UnitEncoding::byte_alphabet;
  } else if (enc == "raw") {
    opts.unit_encoding = UnitEncoding::raw;
  } else {
    throw FormatError("unknown unit_encoding '" + enc + "'");
  }
  const std::string base = j.value("base_units", std::string("auto"));
  if (base == "auto") {
    opts.base_units = BaseUnits::auto_detect;
  } else if (base == "bytes") {
    opts.base_units = BaseUnits::bytes;
  } else if (base == "chars") {
    opts.base_units = BaseUnits::chars;
  } else {
    throw FormatError("unknown base_units '" + base + "'");
  }
  return opts;
}

TokenizerOptions TokenizerOptions::load(const std::filesystem::path& config_file) {
  try {
    return from_json(nlohmann::json::parse(read_file(config_file)));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(config_file.string() + ": " + e.what());
  }
}

Tokenizer Tokenizer::load(const std::filesystem::path& vocab_file, const std::filesystem::path& merges_file,
                          const TokenizerOptions& options) {
  nlohmann::json vocab_json;
  try {
    vocab_json = nlohmann::json::parse(read_file(vocab_file));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(vocab_file.string() + ": " + e.what());
  }
  if (!vocab_json.is_object()) throw FormatError(vocab_file.string() + ": expected a JSON object");

  Vocabulary vocab;
  for (const auto& [key, value] : vocab_json.items()) {
    if (!value.is_number_integer() || value.get<std::int64_t>() < 0 ||
        value.get<std::int64_t>() > std::numeric_limits<TokenId>::max()) {
      throw FormatError(vocab_file.string() + ": ID for '" + key + "' is not a non-negative integer");
    }
    vocab.add(decode_file_unit(key, options.unit_encoding, vocab_file.string()), value.get<TokenId>());
  }

  std::vector<std::pair<std::string, std::string>> merges;
  std::istringstream lines(read_file(merges_file));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.front() == '#') continue;
    const auto space = line.find(' ');
    if (space == std::string::npos || space == 0 || space + 1 == line.size() ||
        line.find(' ', space + 1) != std::string::npos) {
      throw FormatError(merges_file.string() + ":" + std::to_string(line_no) + ": expected 'left right'");
    }
    const std::string where = merges_file.string() + ":" + std::to_string(line_no);
    merges.emplace_back(decode_file_unit(std::string_view(line).substr(0, space), options.unit_encoding, where),
                        decode_file_unit(std::string_view(line).substr(space + 1), options.unit_encoding, where));
  }
  return from_parts(std::move(vocab), merges, options);
}

Tokenizer Tokenizer::from_parts(Vocabulary vocab, const std::vector<std::pair<std::string, std::string>>& merges,
                                const TokenizerOptions& options) {
  Tokenizer tok;
  tok.options_ = options;
  tok.byte_level_ = options.base_units == BaseUnits::bytes ||
                    (options.base_units == BaseUnits::auto_detect && vocab.has_all_bytes());
  if (options.base_units == BaseUnits::bytes && !vocab.has_all_bytes()) {
    throw FormatError("byte-level vocabulary is missing single-byte units");
  }
  for (const auto& [left, right] : merges) {
    auto l = vocab.find(left);
    auto r = vocab.find(right);
    if (!l || !r) throw FormatError("merge operand not in vocabulary: '" + left + "' '" + right + "'");
    auto result = vocab.find(left + right);
    if (!result) throw FormatError("merge result not in vocabulary: '" + left + right + "'");
    tok.merges_.push_back({*l, *r, *result});
  }
  tok.vocab_ = std::move(vocab);

  Fnv1a h;
  std::vector<std::pair<TokenId, const std::string*>> by_id;
  tok.vocab_.for_each([&](const std::string& unit, TokenId id) { by_id.emplace_back(id, &unit); });
  std::sort(by_id.begin(), by_id.end());
  for (const auto& [id, unit] : by_id) {
    h.update(id);
    h.update(*unit);
  }
  for (std::size_t i = 0; i < tok.merges_.size(); ++i) {
    h.update(tok.merges_[i].left);
    h.update(tok.merges_[i].right);
  }
  h.update(options.pretok.to_json().dump());
  h.update(static_cast<std::uint64_t>(tok.byte_level_));
  tok.fingerprint_ = h.hex();
  return tok;
}

std::vector<PretokenSpan> Tokenizer::pretokenize(std::string_view text) const {
  return noncanon::pretokenize(text, options_.pretok);
}

std::vector<TokenId> Tokenizer::base_units(std::string_view piece) const {
  std::vector<TokenId> ids;
  ids.reserve(piece.size());
  if (byte_level_) {
    for (char c : piece) ids.push_back(*vocab_.find(std::string_view(&c, 1)));
    return ids;
  }
  for (std::string_view ch : unicode::split_chars(piece)) {
    auto id = vocab_.find(ch);
    if (!id) throw EncodingError("character '" + std::string(ch) + "' is not in the vocabulary");
    ids.push_back(*id);
  }
  return ids;
}

void Tokenizer::encode_piece(std::string_view piece, TokenSequence& out, const MergeSkipFn& skip) const {
  std::vector<TokenId> ids = base_units(piece);

  struct Candidate {
    std::uint32_t rank;
    std::size_t pos;
    TokenId result;
  };
  std::vector<Candidate> candidates;
  while (ids.size() > 1) {
    candidates.clear();
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
      if (auto hit = merges_.find(ids[i], ids[i + 1])) candidates.push_back({hit->rank, i, hit->result});
    }
    if (candidates.empty()) break;

    const Candidate* chosen = nullptr;
    if (!skip) {
      chosen = &*std::min_element(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        return a.rank != b.rank ? a.rank < b.rank : a.pos < b.pos;
      });
    } else {
      std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        return a.rank != b.rank ? a.rank < b.rank : a.pos < b.pos;
      });
      for (const auto& c : candidates) {
        if (!skip()) {
          chosen = &c;
          break;
        }
      }
      if (chosen == nullptr) break;
    }
    ids[chosen->pos] = chosen->result;
    ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(chosen->pos) + 1);
  }

  for (TokenId id : ids) out.push_back(id, vocab_.unit(id));
}

TokenSequence Tokenizer::encode(std::string_view text) const {
  TokenSequence out;
  for (const auto& span : pretokenize(text)) encode_piece(text.substr(span.begin, span.size()), out);
  return out;
}

std::string Tokenizer::decode(std::span<const TokenId> ids) const {
  std::string out;
  for (TokenId id : ids) out += vocab_.unit(id);
  return out;
}

std::string Tokenizer::display_unit(std::string_view raw_unit) const {
  if (options_.unit_encoding == UnitEncoding::byte_alphabet) return byte_alphabet::encode(raw_unit);
  return std::string(raw_unit);
}

TokenSequence Tokenizer::make_sequence(std::span<const TokenId> ids) const {
  TokenSequence seq;
  for (TokenId id : ids) seq.push_back(id, vocab_.unit(id));
  return seq;
}

std::string decode(const TokenSequence& seq) {
  std::string out;
  for (const auto& u : seq.units) out += u;
  return out;
}

}  // namespace noncanon
