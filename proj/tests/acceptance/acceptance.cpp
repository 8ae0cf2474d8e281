// Acceptance run: one PASS/FAIL line per criterion. Thresholds are fixed here.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "noncanon/graders.hpp"
#include "noncanon/granularity.hpp"
#include "noncanon/metrics.hpp"
#include "noncanon/probes.hpp"
#include "noncanon/schemes.hpp"
#include "noncanon/segmentation.hpp"
#include "noncanon/sft.hpp"
#include "noncanon/tasks.hpp"
#include "support/fixtures.hpp"

using namespace noncanon;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kCountBudgetSeconds = 1.0;
constexpr double kUniformityBudgetSeconds = 30.0;
constexpr double kParityBudgetSeconds = 10.0;
constexpr double kRoundTripBudgetSeconds = 60.0;
constexpr double kChiSquareAlpha = 0.01;
constexpr double kUniformPassShare = 0.95;
constexpr std::size_t kUniformTokens = 20;
constexpr std::size_t kUniformSeeds = 10;
constexpr std::size_t kUniformDraws = 10000;
constexpr double kKendallAlpha = 0.05;
constexpr double kRetentionTolerance = 0.01;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int places = 3) {
  std::ostringstream s;
  s.precision(places);
  s << std::fixed << v;
  return s.str();
}

std::vector<std::string> strings_over(std::string_view alphabet, std::size_t max_len) {
  std::vector<std::string> out, frontier{""};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::string> next;
    for (const auto& s : frontier) {
      for (char c : alphabet) next.push_back(s + c);
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

// 1
Outcome segmentation_counts() {
  const auto& vocab = fixtures::toy().vocab();
  const auto strings = strings_over("abc", 8);
  std::vector<SegmentationCount> counts;
  counts.reserve(strings.size());
  const auto t0 = Clock::now();
  for (const auto& s : strings) counts.push_back(count_segmentations(s, vocab));
  const double elapsed = seconds_since(t0);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < strings.size(); ++i) {
    if (counts[i] != oracle::brute_force_segmentations(strings[i], fixtures::toy_units()).size()) ++mismatches;
  }
  const bool abc = count_segmentations("abc", vocab) == 4;
  return {mismatches == 0 && abc && elapsed < kCountBudgetSeconds,
          std::to_string(strings.size()) + " strings, " + std::to_string(mismatches) + " mismatches vs brute force, " +
              "abc->" + count_segmentations("abc", vocab).str() + ", " + fmt(elapsed) + "s (< " +
              fmt(kCountBudgetSeconds, 1) + "s)"};
}

// 2
Outcome uniformity() {
  struct Case {
    std::string token;
    const Vocabulary* vocab;
  };
  std::vector<Case> cases;
  const auto& toy = fixtures::toy().vocab();
  for (const auto& s : strings_over("abc", 5)) {
    const auto n = count_segmentations(s, toy);
    if (n >= 2 && n <= 50 && cases.size() < 8) cases.push_back({s, &toy});
  }
  const auto& real = fixtures::real_gpt2();
  std::set<std::string> seen;
  std::vector<std::string> real_tokens;
  for (const auto& line : fixtures::corpus()) {
    for (const auto& u : real.encode(line.text).units) {
      if (!seen.insert(u).second) continue;
      const auto n = count_segmentations(u, real.vocab());
      if (n >= 2 && n <= 50) real_tokens.push_back(u);
    }
  }
  const std::size_t want_real = 14;
  for (std::size_t i = 0; i < want_real && !real_tokens.empty(); ++i) {
    cases.push_back({real_tokens[i * real_tokens.size() / want_real], &real.vocab()});
  }

  const auto t0 = Clock::now();
  std::size_t passed = 0, total = 0;
  for (const auto& c : cases) {
    const auto all = enumerate_segmentations(c.token, *c.vocab, 100);
    std::map<Segmentation, std::size_t> index;
    for (std::size_t i = 0; i < all.size(); ++i) index[all[i]] = i;
    SegmentationTable table(c.token, *c.vocab);
    for (std::size_t seed = 0; seed < kUniformSeeds; ++seed) {
      Rng rng(derive_seed(20240611, c.token, seed));
      std::vector<std::size_t> counts(all.size(), 0);
      for (std::size_t d = 0; d < kUniformDraws; ++d) ++counts[index.at(table.sample(rng))];
      ++total;
      if (oracle::chi_square_uniform_p(counts) > kChiSquareAlpha) ++passed;
    }
  }
  const double elapsed = seconds_since(t0);
  const double share = total ? static_cast<double>(passed) / static_cast<double>(total) : 0.0;
  return {cases.size() >= kUniformTokens && share >= kUniformPassShare && elapsed < kUniformityBudgetSeconds,
          std::to_string(cases.size()) + " tokens x " + std::to_string(kUniformSeeds) + " seeds x " +
              std::to_string(kUniformDraws) + " draws, " + std::to_string(passed) + "/" + std::to_string(total) +
              " pass chi-square at p > 0.01 (" + fmt(100 * share, 1) + "%, need >= 95%), " + fmt(elapsed) + "s"};
}

// 3
Outcome canonical_parity() {
  const auto lines = fixtures::corpus();
  std::size_t exact = 0, total = 0;
  const auto t0 = Clock::now();
  for (const auto& [name, tok] : {std::pair{"reference_gpt2.jsonl", &fixtures::real_gpt2()},
                                  std::pair{"reference_llama3.jsonl", &fixtures::real_llama3()}}) {
    const auto ref = fixtures::reference(name);
    for (std::size_t i = 0; i < lines.size() && i < ref.size(); ++i) {
      ++total;
      if (ref[i].first == lines[i].id && tok->encode(lines[i].text).ids == ref[i].second) ++exact;
    }
  }
  const double elapsed = seconds_since(t0);
  return {lines.size() >= 1000 && exact == total && total == 2 * lines.size() && elapsed < kParityBudgetSeconds,
          std::to_string(exact) + "/" + std::to_string(total) + " lines exact (" + std::to_string(lines.size()) +
              " lines x 2 pretokenizers), " + fmt(elapsed) + "s"};
}

// 4
Outcome round_trip() {
  const auto& tok = fixtures::real_gpt2();
  SegmentationCache cache(tok.vocab());
  std::vector<SchemeConfig> cfgs{{Scheme::canonical},        {Scheme::random},           {Scheme::character},
                                 {Scheme::dropout, 0.0},     {Scheme::dropout, 0.5},     {Scheme::dropout, 1.0},
                                 {Scheme::digits_right}};
  std::mt19937_64 gen(4242);
  std::size_t failures = 0, checks = 0;
  const auto t0 = Clock::now();
  for (std::size_t i = 0; i < 10000; ++i) {
    const auto text = oracle::random_text(gen, 64);
    for (auto cfg : cfgs) {
      cfg.seed = derive_seed(99, "round-trip", i);
      ++checks;
      if (decode(apply_scheme(tok, text, cfg, &cache).tokens) != text) ++failures;
    }
  }
  const double elapsed = seconds_since(t0);
  return {failures == 0 && elapsed < kRoundTripBudgetSeconds,
          std::to_string(checks) + " decodes over 10000 strings x 7 configurations, " + std::to_string(failures) +
              " failures, " + fmt(elapsed) + "s"};
}

// 5
Outcome dropout() {
  const auto& tok = fixtures::real_gpt2();
  const auto lines = fixtures::corpus();
  std::size_t p0_diff = 0, p1_diff = 0;
  for (const auto& line : lines) {
    Rng r0(derive_seed(5, line.id)), r1(derive_seed(6, line.id));
    if (dropout_encode(tok, line.text, 0.0, r0) != tok.encode(line.text)) ++p0_diff;
    const auto all = dropout_encode(tok, line.text, 1.0, r1);
    if (all.ids != tok.base_units(line.text)) ++p1_diff;
  }
  std::vector<double> ps, means;
  for (int k = 1; k <= 9; ++k) {
    const double p = k / 10.0;
    double sum = 0;
    std::size_t n = 0;
    for (const auto& line : lines) {
      const auto canon = tok.encode(line.text);
      if (canon.empty()) continue;
      Rng rng(derive_seed(2024, line.id, static_cast<std::uint64_t>(k)));
      sum += length_ratio(dropout_encode(tok, line.text, p, rng), canon).value();
      ++n;
    }
    ps.push_back(p);
    means.push_back(sum / static_cast<double>(n));
  }
  bool monotone = true;
  for (std::size_t i = 1; i < means.size(); ++i) monotone = monotone && means[i] >= means[i - 1];
  const auto kt = oracle::kendall_tau(ps, means);
  std::string curve;
  for (double m : means) curve += (curve.empty() ? "" : ",") + fmt(m, 3);
  return {p0_diff == 0 && p1_diff == 0 && monotone && kt.tau > 0 && kt.p_value < kKendallAlpha,
          "p=0 differs on " + std::to_string(p0_diff) + "/" + std::to_string(lines.size()) + " lines, p=1 differs from "
              "base units on " + std::to_string(p1_diff) + ", mean ratios [" + curve + "], tau=" + fmt(kt.tau) +
              " p=" + fmt(kt.p_value, 6)};
}

// 6
Outcome digit_grouping() {
  const auto& tok = fixtures::real_gpt2();
  const bool ex1 = digits_right_encode(tok, "1000000").units == std::vector<std::string>{"1", "000", "000"};
  const bool ex2 =
      digits_right_encode(tok, "8492079913").units == std::vector<std::string>{"8", "492", "079", "913"};
  std::mt19937_64 gen(6);
  std::size_t bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t len = 1 + gen() % 60;
    std::string run;
    for (std::size_t k = 0; k < len; ++k) run.push_back(static_cast<char>('0' + gen() % 10));
    // Half the runs sit inside text; the run must still be grouped on its own.
    const bool embedded = i % 2 == 1;
    const std::string before = embedded ? "Total: " : "";
    const std::string after = embedded ? " units." : "";
    const auto seq = digits_right_encode(tok, before + run + after);
    const auto want = oracle::group_digits_from_right(run, 3);
    std::vector<std::string> got;
    for (const auto& u : seq.units) {
      if (!u.empty() && std::all_of(u.begin(), u.end(), [](char c) { return c >= '0' && c <= '9'; })) got.push_back(u);
    }
    const bool sizes_ok = want.size() == (len + 2) / 3;
    if (got != want || !sizes_ok || decode(seq) != before + run + after) ++bad;
  }
  return {ex1 && ex2 && bad == 0, std::string("1000000 ") + (ex1 ? "ok" : "wrong") + ", 8492079913 " +
                                      (ex2 ? "ok" : "wrong") + ", " + std::to_string(bad) +
                                      "/10000 random runs violate the right-aligned pattern"};
}

// 7
Outcome listed_segmentations() {
  const auto segs = enumerate_segmentations(" cat", fixtures::real_gpt2().vocab(), 1000);
  std::size_t found = 0;
  for (const Segmentation& want :
       std::vector<Segmentation>{{" cat"}, {" ", "cat"}, {" ", "c", "at"}, {" ", "c", "a", "t"}}) {
    found += std::find(segs.begin(), segs.end(), want) != segs.end();
  }
  return {found == 4, std::to_string(found) + "/4 listed segmentations present among " + std::to_string(segs.size())};
}

// 8
Outcome metric_formulas() {
  const bool g1 = grammaticality_score(0, 20, 0.9) == 1.0;
  const bool g2 = grammaticality_score(5, 20, 0.9) == 0.75;
  bool gate = true;
  for (double s : {0.0, 0.25, 0.3, 0.49, 0.4999}) {
    for (std::size_t m : {0u, 3u, 20u}) gate = gate && grammaticality_score(m, 20, s) == 0.0;
  }
  const double r1 = retention(86.4, 84.6);
  const double r2 = retention(50.0, 46.3);
  const bool ret = std::abs(r1 - 97.92) <= kRetentionTolerance && std::abs(r2 - 92.60) <= kRetentionTolerance;
  return {g1 && g2 && gate && ret, "grammaticality 1.0/0.75/gate " + std::string(g1 && g2 && gate ? "ok" : "wrong") +
                                       ", retention " + fmt(r1, 4) + " and " + fmt(r2, 4)};
}

// 9
Outcome gold_consistency() {
  const std::size_t n = 1000;
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;
  auto check = [&](const std::vector<TaskExample>& exs) {
    for (const auto& ex : exs) {
      auto& t = tally[std::string(to_string(ex.kind))];
      ++t.second;
      if (grade(ex, gold_as_generation(ex))) ++t.first;
    }
  };
  Rng rng(909);
  check(gen_count_chars(fixtures::real_gpt2().vocab(), n, rng));
  const auto acr = gen_acronyms(n, 5, rng);
  check(acr);
  const auto arith = gen_arithmetic(n, 10, rng);
  check(arith);

  auto words = WordList::load(oracle::data("wordlist_en_10k.txt")).words();
  std::erase_if(words, [](const std::string& w) { return w.size() < 2; });
  ProbeOptions po;
  po.demo_words.assign(words.begin(), words.begin() + 20);
  std::vector<TaskExample> repeat, missp;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& w = words[100 + i];
    Rng r(derive_seed(909, w, i));
    repeat.push_back(build_probe(TaskKind::word_repeat, w, fixtures::real_gpt2(), po, r));
    missp.push_back(build_probe(TaskKind::identify_misspelling, w, fixtures::real_gpt2(), po, r));
  }
  check(repeat);
  check(missp);

  bool all = true;
  std::string detail;
  for (const auto& [kind, t] : tally) {
    all = all && t.first == t.second && t.second == n;
    detail += kind + " " + std::to_string(t.first) + "/" + std::to_string(t.second) + ", ";
  }
  std::size_t bad_operands = 0;
  for (const auto& ex : arith) {
    const auto a = ex.details.at("a").get<std::int64_t>();
    const auto b = ex.details.at("b").get<std::int64_t>();
    if (std::to_string(a).size() != 10 || std::to_string(b).size() != 10) ++bad_operands;
  }
  std::vector<std::size_t> letters(26, 0);
  for (const auto& ex : acr) {
    for (char c : std::get<std::string>(ex.gold)) ++letters[c - 'a'];
  }
  const double p = oracle::chi_square_uniform_p(letters);
  return {all && bad_operands == 0 && p > kChiSquareAlpha,
          detail + std::to_string(bad_operands) + " non-10-digit operands, acronym letter chi-square p=" + fmt(p, 4)};
}

// 10
Outcome sft_fidelity() {
  const auto& tok = fixtures::real_gpt2();
  const std::string instruction =
      "Provide a detailed analysis of Candace Parker's defensive techniques in her recent games, excluding the "
      "words \"aggressive\" and \"blocking\", in the format of a sports commentary script.";
  const std::string split_prefix =
      "[Sports Commentary Script]\n[Opening Scene: A packed basketball arena, with fans eagerly awaiting the "
      "analysis of Candace Parker\xE2\x80\x99s recent performances on the court.]\nCommentator 1: Welcome back, "
      "basketball fans!";
  const std::string response =
      split_prefix + " Tonight, we're diving into the defensive prowess of Candace Parker...";

  // Expected renderings of the worked example, up to where it is elided.
  const std::string chat_row = "<|user|>" + instruction + " <|assistant|>[Sports Commentary Script]\n[Opening Scene";
  const std::string qa_row = "Question: " + instruction + " Answer: [Sports Commentary Script]\n[Opening Scene";
  const std::string plain_row = instruction + " [Sports Commentary Script]\n[Opening Scene";
  const std::string remove_row = "<|user|>" + split_prefix +
                                 " <|assistant|>Tonight, we're diving into the defensive prowess of Candace Parker...";

  auto starts = [](const std::string& s, const std::string& p) { return s.compare(0, p.size(), p) == 0; };
  const bool chat = starts(format_sft(instruction, response, AblationMode::chat, tok).text, chat_row);
  const bool qa = starts(format_sft(instruction, response, AblationMode::qa_template, tok).text, qa_row);
  const bool plain = starts(format_sft(instruction, response, AblationMode::no_template, tok).text, plain_row);
  // The worked example's split point, counted in this vocabulary's canonical tokens.
  const std::size_t example_n = tok.encode(split_prefix).size();
  const std::size_t own_n = tok.encode(instruction).size();
  const bool removed =
      format_sft(instruction, response, AblationMode::remove_instruction, tok, example_n).text == remove_row;

  // Split-at-n on 100 pairs from the corpus; n and the response ids come from
  // the reference tokenizer's fixture, not from this library.
  const auto lines = fixtures::corpus();
  const auto ref = fixtures::reference("reference_gpt2.jsonl");
  std::size_t pairs = 0, split_ok = 0;
  for (std::size_t i = 0; i + 1 < lines.size() && pairs < 100; ++i) {
    const auto& instr = lines[i];
    const std::size_t n = ref[i].second.size();
    if (n < 3 || instr.text.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::size_t j = (i * 7 + 13) % lines.size();
    std::size_t tries = 0;
    while (tries++ < lines.size() && ref[j].second.size() <= n + 2) j = (j + 1) % lines.size();
    if (ref[j].second.size() <= n + 2) continue;
    const auto& resp_ids = ref[j].second;
    std::string head = tok.decode(std::span(resp_ids).first(n));
    std::string tail = tok.decode(std::span(resp_ids).subspan(n));
    // Whitespace is trimmed only at the split; the template supplies the space there.
    while (!head.empty() && std::isspace(static_cast<unsigned char>(head.back()))) head.pop_back();
    while (!tail.empty() && std::isspace(static_cast<unsigned char>(tail.front()))) tail.erase(tail.begin());
    if (tail.empty()) continue;
    ++pairs;
    try {
      const auto rec = format_sft(instr.text, lines[j].text, AblationMode::remove_instruction, tok);
      if (rec.instruction_tokens == n && rec.instruction == head && rec.response == tail &&
          rec.text == "<|user|>" + head + " <|assistant|>" + tail) {
        ++split_ok;
      } else if (std::getenv("NONCANON_ACCEPT_DEBUG")) {
        std::fprintf(stderr, "pair %zu: n=%zu/%zu head=[%s]/[%s] tail=[%s]/[%s]\n", i, rec.instruction_tokens, n,
                     rec.instruction.c_str(), head.c_str(), rec.response.c_str(), tail.c_str());
      }
    } catch (const std::exception& e) {
      if (std::getenv("NONCANON_ACCEPT_DEBUG")) std::fprintf(stderr, "pair %zu: %s\n", i, e.what());
    }
  }
  std::string detail = std::string("chat ") + (chat ? "ok" : "wrong") + ", qa_template " + (qa ? "ok" : "wrong") +
                       ", no_template " + (plain ? "ok" : "wrong") + ", remove_instruction " +
                       (removed ? "ok" : "wrong") + " (n=" + std::to_string(example_n) +
                       " from the worked split point; the instruction itself is " + std::to_string(own_n) +
                       " tokens in the fixture vocabulary), split-at-n " + std::to_string(split_ok) + "/" +
                       std::to_string(pairs) + " pairs";
  return {chat && qa && plain && removed && pairs == 100 && split_ok == 100, detail};
}

// 11
Outcome cli_reproducibility() {
  const std::string cli = NONCANON_CLI;
  const auto dir = std::filesystem::temp_directory_path() / ("noncanon_accept_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::string base = "\"" + cli + "\" encode --vocab " + oracle::fixture("real/vocab.json") + " --merges " +
                           oracle::fixture("real/merges.txt") + " --pretok-config " +
                           oracle::fixture("real/pretok_gpt2.json") + " --input " + oracle::fixture("corpus.jsonl") +
                           " --scheme random --seed 31337";
  auto run = [&](const std::string& name, const std::string& extra) {
    const auto out = dir / name;
    const std::string cmd = base + " " + extra + " --output " + out.string();
    if (std::system(cmd.c_str()) != 0) return std::string("<failed>");
    std::ifstream in(out, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };
  const auto a = run("a.jsonl", "--jobs 1");
  const auto b = run("b.jsonl", "--jobs 1");
  const auto c = run("c.jsonl", "--jobs 4 --batch-size 64");
  std::filesystem::remove_all(dir);
  const bool same_seed = a == b && a != "<failed>";
  const bool same_jobs = a == c;
  return {same_seed && same_jobs && !a.empty(),
          std::string("same seed twice ") + (same_seed ? "identical" : "DIFFERENT") + ", jobs 1 vs 4 " +
              (same_jobs ? "identical" : "DIFFERENT") + " (" + std::to_string(a.size()) + " bytes)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Segmentation count correctness", segmentation_counts},
      {"Uniform segmentation sampling", uniformity},
      {"Canonical parity with reference ids", canonical_parity},
      {"Round-trip for every scheme", round_trip},
      {"Dropout identities and monotone granularity", dropout},
      {"Right-aligned digit grouping", digit_grouping},
      {"Listed segmentations of \" cat\"", listed_segmentations},
      {"Metric formulas", metric_formulas},
      {"Task gold self-consistency", gold_consistency},
      {"SFT format fidelity", sft_fidelity},
      {"CLI reproducibility", cli_reproducibility},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %zu: %s -- %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
