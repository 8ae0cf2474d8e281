#include "noncanon/schemes.hpp"

#include <stdexcept>

#include "noncanon/error.hpp"
#include "noncanon/unicode.hpp"

namespace noncanon {
namespace {

bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

void push_unit(const Tokenizer& tok, std::string_view unit, TokenSequence& out) {
  auto id = tok.vocab().find(unit);
  if (!id) throw EncodingError("unit '" + std::string(unit) + "' is not in the vocabulary");
  out.push_back(*id, std::string(unit));
}

void push_digit_run(const Tokenizer& tok, std::string_view run, std::size_t group_size, TokenSequence& out) {
  std::size_t pos = 0;
  for (std::size_t size : right_aligned_groups(run.size(), group_size)) {
    const std::string_view group = run.substr(pos, size);
    if (tok.vocab().contains(group)) {
      push_unit(tok, group, out);
    } else {
      for (std::size_t i = 0; i < group.size(); ++i) push_unit(tok, group.substr(i, 1), out);
    }
    pos += size;
  }
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::canonical: return "canonical";
    case Scheme::random: return "random";
    case Scheme::character: return "char";
    case Scheme::dropout: return "dropout";
    case Scheme::digits_right: return "digits-right";
  }
  return "canonical";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "canonical") return Scheme::canonical;
  if (name == "random") return Scheme::random;
  if (name == "char" || name == "character") return Scheme::character;
  if (name == "dropout") return Scheme::dropout;
  if (name == "digits-right" || name == "digits_right") return Scheme::digits_right;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

void SchemeConfig::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("dropout p must be in [0, 1]");
  if (digit_group_size == 0) throw std::invalid_argument("digit group size must be at least 1");
}

nlohmann::json SchemeConfig::to_json() const {
  nlohmann::json j = {{"scheme", to_string(scheme)}, {"seed", seed}};
  switch (scheme) {
    case Scheme::dropout: j["p"] = p; break;
    case Scheme::digits_right: j["group_size"] = digit_group_size; break;
    case Scheme::random: j["exclude_identity"] = exclude_identity; break;
    case Scheme::character: j["force_bytes"] = force_bytes; break;
    case Scheme::canonical: break;
  }
  return j;
}

TokenSequence char_tokenize(const Tokenizer& tok, std::string_view text, bool force_bytes) {
  TokenSequence out;
  for (std::string_view ch : unicode::split_chars(text)) {
    if (!force_bytes) {
      if (auto id = tok.vocab().find(ch)) {
        out.push_back(*id, std::string(ch));
        continue;
      }
    }
    for (std::size_t i = 0; i < ch.size(); ++i) {
      auto id = tok.vocab().find(ch.substr(i, 1));
      if (!id) throw EncodingError("character '" + std::string(ch) + "' is not coverable by the vocabulary");
      out.push_back(*id, std::string(ch.substr(i, 1)));
    }
  }
  return out;
}

TokenSequence dropout_encode(const Tokenizer& tok, std::string_view text, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("dropout p must be in [0, 1]");
  TokenSequence out;
  const MergeSkipFn skip = [&rng, p] { return rng.bernoulli(p); };
  for (const auto& span : tok.pretokenize(text)) {
    const auto piece = text.substr(span.begin, span.size());
    if (p == 0.0) {
      tok.encode_piece(piece, out);
    } else {
      tok.encode_piece(piece, out, skip);
    }
  }
  return out;
}

std::vector<std::size_t> right_aligned_groups(std::size_t run_length, std::size_t group_size) {
  if (group_size == 0) throw std::invalid_argument("group size must be at least 1");
  std::vector<std::size_t> groups;
  if (run_length == 0) return groups;
  groups.push_back((run_length - 1) % group_size + 1);
  for (std::size_t done = groups.front(); done < run_length; done += group_size) groups.push_back(group_size);
  return groups;
}

TokenSequence digits_right_encode(const Tokenizer& tok, std::string_view text, std::size_t group_size) {
  if (group_size == 0) throw std::invalid_argument("group size must be at least 1");
  TokenSequence out;
  std::size_t run_end = 0;  // end of the digit run already emitted
  for (const auto& span : tok.pretokenize(text)) {
    std::size_t pos = std::max(span.begin, run_end);
    while (pos < span.end) {
      if (is_ascii_digit(text[pos])) {
        // Maximal run, possibly continuing across pretoken boundaries.
        std::size_t end = pos;
        while (end < text.size() && is_ascii_digit(text[end])) ++end;
        push_digit_run(tok, text.substr(pos, end - pos), group_size, out);
        run_end = end;
        pos = end;
      } else {
        std::size_t end = pos;
        while (end < span.end && !is_ascii_digit(text[end])) ++end;
        tok.encode_piece(text.substr(pos, end - pos), out);
        pos = end;
      }
    }
  }
  return out;
}

SchemeOutput apply_scheme(const Tokenizer& tok, std::string_view text, const SchemeConfig& cfg,
                          SegmentationCache* cache) {
  cfg.validate();
  SchemeOutput result;
  result.config = cfg;
  switch (cfg.scheme) {
    case Scheme::canonical:
      result.tokens = tok.encode(text);
      break;
    case Scheme::random: {
      Rng rng(cfg.seed);
      result.tokens = random_tokenize_text(tok, text, rng, {cfg.exclude_identity}, cache);
      break;
    }
    case Scheme::character:
      result.tokens = char_tokenize(tok, text, cfg.force_bytes);
      break;
    case Scheme::dropout: {
      Rng rng(cfg.seed);
      result.tokens = dropout_encode(tok, text, cfg.p, rng);
      break;
    }
    case Scheme::digits_right:
      result.tokens = digits_right_encode(tok, text, cfg.digit_group_size);
      break;
  }
  return result;
}

}  // namespace noncanon
