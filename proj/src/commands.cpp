#include "noncanon/commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "noncanon/error.hpp"
#include "noncanon/graders.hpp"
#include "noncanon/grammar.hpp"
#include "noncanon/jsonl.hpp"
#include "noncanon/metrics.hpp"
#include "noncanon/probes.hpp"
#include "noncanon/segmentation.hpp"

namespace noncanon {
namespace {

using nlohmann::json;

bool is_meta(const json& j) {
  const auto it = j.find("type");
  return it != j.end() && it->is_string() && (*it == "header" || *it == "footer");
}

std::string require_string(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw FormatError(where + ": missing string field '" + key + "'");
  return it->get<std::string>();
}

json scheme_params(const SchemeConfig& cfg) {
  json j = {{"seed", cfg.seed}};
  switch (cfg.scheme) {
    case Scheme::dropout: j["p"] = cfg.p; break;
    case Scheme::digits_right: j["digit_group_size"] = cfg.digit_group_size; break;
    case Scheme::random: j["exclude_identity"] = cfg.exclude_identity; break;
    case Scheme::character: j["force_bytes"] = cfg.force_bytes; break;
    case Scheme::canonical: break;
  }
  return j;
}

struct WorkItem {
  std::string id;
  std::string text;
  std::size_t line = 0;
  std::optional<std::string> input_error;
};

struct WorkResult {
  std::vector<json> records;
  std::optional<std::string> error;
};

template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

int encode_file(const Tokenizer& tok, const EncodeOptions& opts, const SchemeConfig& cfg,
                const std::filesystem::path& output, SegmentationCache& cache, std::ostream& err) {
  JsonlReader reader(opts.input);
  JsonlWriter writer(output);
  writer.write({{"type", "header"},
                {"tool", kToolName},
                {"version", kToolVersion},
                {"tokenizer", tok.fingerprint()},
                {"vocab_size", tok.vocab().size()},
                {"rng", Rng::kName},
                {"seed", cfg.seed},
                {"repeat", opts.repeat},
                {"defaults", cfg.to_json()}});

  const std::size_t repeat = std::max<std::size_t>(1, opts.repeat);
  const std::size_t batch = std::max<std::size_t>(1, opts.batch_size);
  std::size_t written = 0;
  std::size_t errors = 0;
  std::vector<WorkItem> items;
  std::vector<WorkResult> results;
  bool done = false;

  while (!done) {
    items.clear();
    while (items.size() < batch) {
      std::optional<json> j;
      try {
        j = reader.next();
      } catch (const FormatError& e) {
        items.push_back({"", "", reader.line_number(), e.what()});
        continue;
      }
      if (!j) {
        done = true;
        break;
      }
      WorkItem item;
      item.line = reader.line_number();
      const auto id = j->find("id");
      const auto text = j->find("text");
      if (id == j->end() || !id->is_string()) {
        item.input_error = "missing string field 'id'";
      } else if (text == j->end() || !text->is_string()) {
        item.id = id->get<std::string>();
        item.input_error = "missing string field 'text'";
      } else {
        item.id = id->get<std::string>();
        item.text = text->get<std::string>();
      }
      items.push_back(std::move(item));
    }

    results.assign(items.size(), {});
    parallel_for(items.size(), opts.jobs, [&](std::size_t i) {
      const auto& item = items[i];
      auto& res = results[i];
      if (item.input_error) {
        res.error = item.input_error;
        return;
      }
      try {
        for (std::size_t r = 0; r < repeat; ++r) {
          SchemeConfig rc = cfg;
          rc.seed = derive_seed(cfg.seed, item.id, r);
          res.records.push_back(
              encode_record(tok, item.id, item.text, rc, &cache, repeat > 1 ? std::optional(r) : std::nullopt));
        }
      } catch (const std::exception& e) {
        res.records.clear();
        res.error = e.what();
      }
    });

    for (std::size_t i = 0; i < items.size(); ++i) {
      if (results[i].error) {
        ++errors;
        err << json{{"error", *results[i].error}, {"id", items[i].id}, {"line", items[i].line}}.dump() << '\n';
        continue;
      }
      for (const auto& rec : results[i].records) {
        writer.write(rec);
        ++written;
      }
    }
  }
  writer.write({{"type", "footer"}, {"records", written}, {"errors", errors}, {"partial", errors > 0}});
  writer.flush();
  return errors > 0 ? kExitData : kExitOk;
}

struct StreamingHistogram {
  std::vector<Ratio> edges;
  RatioHistogram hist;
  std::vector<double> sums;
  double total_sum = 0.0;
  std::size_t count = 0;

  explicit StreamingHistogram(std::vector<Ratio> e) : edges(std::move(e)) {
    hist = bucket_by_ratio({}, edges);
    sums.assign(hist.buckets.size(), 0.0);
  }

  void add(std::span<const GranularityRecord> chunk) {
    const auto part = bucket_by_ratio(chunk, edges);
    for (std::size_t b = 0; b < part.buckets.size(); ++b) {
      hist.buckets[b].count += part.buckets[b].count;
      sums[b] += part.buckets[b].mean_ratio * static_cast<double>(part.buckets[b].count);
    }
    hist.below += part.below;
    hist.above += part.above;
    for (const auto& r : chunk) total_sum += r.ratio().value();
    count += chunk.size();
  }

  json to_json() const {
    json buckets = json::array();
    for (std::size_t b = 0; b < hist.buckets.size(); ++b) {
      const auto& bk = hist.buckets[b];
      buckets.push_back({{"lower", bk.lower.to_string()},
                         {"upper", bk.upper.to_string()},
                         {"count", bk.count},
                         {"mean_ratio", bk.count ? sums[b] / static_cast<double>(bk.count) : 0.0}});
    }
    return {{"buckets", buckets}, {"below", hist.below}, {"above", hist.above}};
  }
};

GranularityRecord granularity_of(const json& j, const std::string& where) {
  GranularityRecord rec;
  rec.id = j.value("id", std::string());
  const auto canon = j.find("canonical_length");
  const auto alt = j.find("length");
  if (canon != j.end() && alt != j.end() && canon->is_number_unsigned() && alt->is_number_unsigned()) {
    rec.canonical_length = canon->get<std::size_t>();
    rec.alternative_length = alt->get<std::size_t>();
    return rec;
  }
  throw FormatError(where + ": missing 'length' / 'canonical_length' fields");
}

double accuracy_of_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  const auto it = j.find("accuracy");
  if (it == j.end() || !it->is_number()) throw FormatError(path.string() + ": missing numeric 'accuracy'");
  return it->get<double>();
}

std::string generation_text(const json& j, const std::string& where) {
  for (const char* key : {"generation", "output", "text"}) {
    const auto it = j.find(key);
    if (it != j.end() && it->is_string()) return it->get<std::string>();
  }
  throw FormatError(where + ": missing string field 'generation'");
}

}  // namespace

Tokenizer load_tokenizer(const TokenizerPaths& paths) {
  const TokenizerOptions opts = paths.pretok_config ? TokenizerOptions::load(*paths.pretok_config) : TokenizerOptions{};
  return Tokenizer::load(paths.vocab, paths.merges, opts);
}

std::string format_p(double p) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, p);
  return std::string(buf, ptr);
}

std::string expand_p(const std::string& pattern, double p) {
  std::string out = pattern;
  const std::string value = format_p(p);
  for (auto pos = out.find("{p}"); pos != std::string::npos; pos = out.find("{p}", pos + value.size())) {
    out.replace(pos, 3, value);
  }
  return out;
}

json encode_record(const Tokenizer& tok, const std::string& id, std::string_view text, const SchemeConfig& cfg,
                   SegmentationCache* cache, std::optional<std::size_t> sample) {
  const auto out = apply_scheme(tok, text, cfg, cache);
  const auto canonical_length =
      cfg.scheme == Scheme::canonical ? out.tokens.size() : tok.encode(text).size();
  if (decode(out.tokens) != text) throw EncodingError("internal error: tokens do not decode to the input");
  json units = json::array();
  for (const auto& u : out.tokens.units) units.push_back(tok.display_unit(u));
  json rec = {{"id", id},
              {"scheme", std::string(to_string(cfg.scheme))},
              {"params", scheme_params(cfg)},
              {"ids", out.tokens.ids},
              {"units", std::move(units)},
              {"length", out.tokens.size()},
              {"canonical_length", canonical_length}};
  if (sample) rec["sample"] = *sample;
  rec["ratio"] = canonical_length > 0 ? json(length_ratio(out.tokens.size(), canonical_length).to_string()) : json();
  return rec;
}

int run_guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ProviderError& e) {
    err << "error: " << e.what() << '\n';
    return kExitProvider;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

int cmd_encode(const EncodeOptions& opts, std::ostream& err) {
  const auto tok = load_tokenizer(opts.tokenizer);
  std::vector<double> ps = opts.p_values;
  if (ps.empty()) ps.push_back(opts.scheme.p);
  const auto out = opts.output.string();
  if (ps.size() > 1 && out.find("{p}") == std::string::npos) {
    throw std::invalid_argument("several p values need an output path containing {p}");
  }
  SegmentationCache cache(tok.vocab());
  int status = kExitOk;
  for (double p : ps) {
    SchemeConfig cfg = opts.scheme;
    cfg.p = p;
    cfg.validate();
    status = std::max(status, encode_file(tok, opts, cfg, expand_p(out, p), cache, err));
  }
  return status;
}

int cmd_count(const CountOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.token.has_value() == opts.file.has_value()) throw std::invalid_argument("give exactly one of a token or --file");
  const auto tok = load_tokenizer(opts.tokenizer);
  std::size_t zeros = 0;
  auto emit = [&](const std::string& token) {
    if (token.empty()) throw std::invalid_argument("empty token");
    const auto n = count_segmentations(token, tok.vocab());
    if (n == 0) ++zeros;
    out << n << '\n';
  };
  if (opts.token) {
    emit(*opts.token);
  } else {
    std::ifstream in(*opts.file, std::ios::binary);
    if (!in) throw DataError("cannot open " + opts.file->string());
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) {
        out << 0 << '\n';
        ++zeros;
        continue;
      }
      emit(line);
    }
  }
  if (zeros > 0) {
    err << "warning: " << zeros << " token(s) have no segmentation\n";
    return kExitData;
  }
  return kExitOk;
}

int cmd_enumerate(const EnumerateOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.token.empty()) throw std::invalid_argument("empty token");
  if (opts.limit == 0) throw std::invalid_argument("limit must be positive");
  const auto tok = load_tokenizer(opts.tokenizer);
  const auto segs = enumerate_segmentations(opts.token, tok.vocab(), opts.limit);
  for (const auto& seg : segs) {
    json units = json::array();
    for (const auto& u : seg) units.push_back(tok.display_unit(u));
    out << units.dump() << '\n';
  }
  if (segs.empty()) {
    err << "warning: token has no segmentation\n";
    return kExitData;
  }
  return kExitOk;
}

int cmd_stats(const StatsOptions& opts, std::ostream& out, std::ostream& /*err*/) {
  if (opts.inputs.empty()) throw std::invalid_argument("no input files");
  constexpr std::size_t kChunk = 4096;
  json files = json::array();
  StreamingHistogram overall(opts.edges);
  for (const auto& path : opts.inputs) {
    StreamingHistogram hist(opts.edges);
    JsonlReader reader(path);
    std::vector<GranularityRecord> chunk;
    std::size_t skipped = 0;
    auto drain = [&] {
      hist.add(chunk);
      overall.add(chunk);
      chunk.clear();
    };
    while (auto j = reader.next()) {
      if (is_meta(*j)) continue;
      auto rec = granularity_of(*j, path.string() + ":" + std::to_string(reader.line_number()));
      if (rec.canonical_length == 0) {
        ++skipped;
        continue;
      }
      chunk.push_back(std::move(rec));
      if (chunk.size() == kChunk) drain();
    }
    drain();
    json f = {{"path", path.string()},
              {"records", hist.count},
              {"skipped_empty", skipped},
              {"mean_ratio", hist.count ? hist.total_sum / static_cast<double>(hist.count) : 0.0},
              {"histogram", hist.to_json()}};
    files.push_back(std::move(f));
  }
  json edges = json::array();
  for (const auto& e : opts.edges) edges.push_back(e.to_string());
  json report = {{"edges", edges},
                 {"files", files},
                 {"records", overall.count},
                 {"mean_ratio", overall.count ? overall.total_sum / static_cast<double>(overall.count) : 0.0},
                 {"histogram", overall.to_json()}};
  out << report.dump(2) << '\n';
  return kExitOk;
}

int cmd_gen(const GenOptions& opts, std::ostream& /*err*/) {
  Rng rng(opts.seed);
  std::vector<TaskExample> examples;
  switch (opts.kind) {
    case TaskKind::count_chars: {
      if (!opts.tokenizer) throw std::invalid_argument("count_chars needs a tokenizer");
      const auto tok = load_tokenizer(*opts.tokenizer);
      examples = gen_count_chars(tok.vocab(), opts.n, rng);
      break;
    }
    case TaskKind::acronym:
      examples = gen_acronyms(opts.n, opts.acronym_length, rng);
      break;
    case TaskKind::arithmetic:
      examples = gen_arithmetic(opts.n, opts.digits, rng);
      break;
    case TaskKind::word_repeat:
    case TaskKind::identify_misspelling: {
      if (!opts.tokenizer) throw std::invalid_argument("probes need a tokenizer");
      if (!opts.wordlist) throw std::invalid_argument("probes need a word list");
      const auto tok = load_tokenizer(*opts.tokenizer);
      auto words = WordList::load(*opts.wordlist).words();
      words.erase(std::remove_if(words.begin(), words.end(), [](const std::string& w) { return w.size() < 2; }),
                  words.end());
      if (words.size() < opts.n) throw DataError("word list has fewer than n usable words");
      rng.shuffle(words);
      ProbeOptions po;
      po.alternative = opts.probe_scheme;
      po.demo_words.assign(words.begin() + static_cast<std::ptrdiff_t>(opts.n), words.end());
      for (std::size_t i = 0; i < opts.n; ++i) {
        Rng local(derive_seed(opts.seed, words[i], i));
        auto ex = build_probe(opts.kind, words[i], tok, po, local);
        char buf[32];
        std::snprintf(buf, sizeof buf, "-%06zu", i);
        ex.id = std::string(to_string(opts.kind)) + buf;
        examples.push_back(std::move(ex));
      }
      break;
    }
    case TaskKind::multiple_choice:
      throw std::invalid_argument("multiple_choice datasets are not generated");
  }
  JsonlWriter writer(opts.output);
  for (const auto& ex : examples) writer.write(ex.to_json());
  writer.flush();
  return kExitOk;
}

int cmd_grade(const GradeOptions& opts, std::ostream& out, std::ostream& err) {
  std::unordered_map<std::string, std::string> generations;
  std::vector<std::string> unmatched;
  {
    JsonlReader reader(opts.generations);
    while (auto j = reader.next()) {
      if (is_meta(*j)) continue;
      const std::string where = opts.generations.string() + ":" + std::to_string(reader.line_number());
      auto id = require_string(*j, "id", where);
      generations[id] = generation_text(*j, where);
    }
  }
  json verdicts = json::array();
  std::vector<std::string> missing;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::map<std::string, std::pair<std::size_t, std::size_t>> by_kind;
  {
    JsonlReader reader(opts.dataset);
    while (auto j = reader.next()) {
      if (is_meta(*j)) continue;
      const auto ex = TaskExample::from_json(*j);
      const auto it = generations.find(ex.id);
      bool ok = false;
      if (it == generations.end()) {
        missing.push_back(ex.id);
      } else {
        ok = grade(ex, it->second);
        generations.erase(it);
      }
      auto& k = by_kind[std::string(to_string(ex.kind))];
      ++total;
      ++k.second;
      if (ok) {
        ++correct;
        ++k.first;
      }
      verdicts.push_back({{"id", ex.id}, {"kind", std::string(to_string(ex.kind))}, {"correct", ok}});
    }
  }
  for (const auto& [id, _] : generations) unmatched.push_back(id);
  std::sort(unmatched.begin(), unmatched.end());

  const double accuracy = total ? 100.0 * static_cast<double>(correct) / static_cast<double>(total) : 0.0;
  json report = {{"records", verdicts}, {"correct", correct}, {"total", total}, {"accuracy", accuracy}};
  json kinds = json::object();
  for (const auto& [kind, c] : by_kind) {
    kinds[kind] = {{"correct", c.first},
                   {"total", c.second},
                   {"accuracy", 100.0 * static_cast<double>(c.first) / static_cast<double>(c.second)}};
  }
  report["by_kind"] = kinds;
  report["missing_generations"] = missing;
  report["unmatched_generations"] = unmatched;

  std::optional<double> canon = opts.canonical_score;
  if (opts.canonical_report) canon = accuracy_of_report(*opts.canonical_report);
  if (canon) {
    report["canonical_accuracy"] = *canon;
    report["retention"] = retention(*canon, accuracy);
  }
  out << report.dump(2) << '\n';
  if (!missing.empty() || !unmatched.empty()) {
    err << "warning: " << missing.size() << " example(s) without a generation, " << unmatched.size()
        << " generation(s) without an example\n";
    return kExitData;
  }
  return kExitOk;
}

int cmd_score(const ScoreOptions& opts, std::ostream& out, std::ostream& /*err*/) {
  const auto words = WordList::load(opts.wordlist);
  std::unique_ptr<GrammarProvider> provider;
  if (opts.grammar_endpoint && !opts.grammar_endpoint->empty()) {
    HttpGrammarConfig cfg;
    cfg.endpoint = *opts.grammar_endpoint;
    cfg.timeout = opts.timeout;
    cfg.max_in_flight = std::max<std::size_t>(1, opts.jobs);
    if (opts.grammar_protocol == "languagetool") {
      cfg.protocol = GrammarProtocol::languagetool;
    } else if (opts.grammar_protocol != "plain") {
      throw std::invalid_argument("unknown grammar protocol '" + opts.grammar_protocol + "'");
    }
    provider = std::make_unique<HttpGrammarProvider>(cfg);
  }

  MetricReport report;
  std::vector<std::string> texts;
  {
    JsonlReader reader(opts.generations);
    while (auto j = reader.next()) {
      if (is_meta(*j)) continue;
      const std::string where = opts.generations.string() + ":" + std::to_string(reader.line_number());
      GenerationScore s;
      s.id = j->value("id", std::string());
      texts.push_back(generation_text(*j, where));
      report.records.push_back(std::move(s));
    }
  }
  std::vector<std::optional<std::string>> failures(texts.size());
  parallel_for(texts.size(), provider ? opts.jobs : 1, [&](std::size_t i) {
    auto& s = report.records[i];
    s.spelling = spelling_score(texts[i], words);
    s.words = word_count(texts[i]);
    if (!provider) return;
    if (s.spelling < kSpellingGate) {
      s.grammaticality = 0.0;
      return;
    }
    try {
      s.mistakes = provider->count_mistakes(texts[i]);
      s.grammaticality = grammaticality_score(*s.mistakes, s.words, s.spelling);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });
  for (const auto& f : failures) {
    if (f) throw ProviderError(*f);
  }
  double spell = 0.0;
  double gram = 0.0;
  for (const auto& s : report.records) {
    spell += s.spelling;
    if (s.grammaticality) gram += *s.grammaticality;
  }
  const auto n = static_cast<double>(report.records.size());
  report.mean_spelling = report.records.empty() ? 0.0 : spell / n;
  if (provider) report.mean_grammaticality = report.records.empty() ? 0.0 : gram / n;
  out << report.to_json().dump(2) << '\n';
  return kExitOk;
}

int cmd_sft_format(const SftFormatOptions& opts, std::ostream& err) {
  const auto tok = load_tokenizer(opts.tokenizer);
  JsonlReader reader(opts.input);
  JsonlWriter writer(opts.output);
  std::size_t written = 0;
  std::size_t skipped = 0;
  while (auto j = reader.next()) {
    if (is_meta(*j)) continue;
    const std::string where = opts.input.string() + ":" + std::to_string(reader.line_number());
    const auto response = require_string(*j, "response", where);
    const auto instruction = j->value("instruction", std::string());
    try {
      auto rec = format_sft(instruction, response, opts.mode, tok, opts.instruction_tokens);
      json o = rec.to_json();
      if (j->contains("id")) o["id"] = (*j)["id"];
      writer.write(o);
      ++written;
    } catch (const DataError& e) {
      ++skipped;
      err << json{{"skipped", j->value("id", json())}, {"reason", e.what()}}.dump() << '\n';
    }
  }
  writer.flush();
  err << json{{"records", written}, {"skipped", skipped}}.dump() << '\n';
  return kExitOk;
}

}  // namespace noncanon
