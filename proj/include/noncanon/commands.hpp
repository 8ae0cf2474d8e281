#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "noncanon/granularity.hpp"
#include "noncanon/schemes.hpp"
#include "noncanon/sft.hpp"
#include "noncanon/tasks.hpp"
#include "noncanon/tokenizer.hpp"

namespace noncanon {

inline constexpr std::string_view kToolName = "noncanon";
inline constexpr std::string_view kToolVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitProvider = 3 };

struct TokenizerPaths {
  std::filesystem::path vocab;
  std::filesystem::path merges;
  std::optional<std::filesystem::path> pretok_config;  // default: gpt2 pattern
};

Tokenizer load_tokenizer(const TokenizerPaths& paths);

struct EncodeOptions {
  TokenizerPaths tokenizer;
  std::filesystem::path input;
  std::filesystem::path output;  // must contain "{p}" when several p values are given
  SchemeConfig scheme;           // scheme.seed is the global seed
  std::vector<double> p_values;  // dropout grid; empty means {scheme.p}
  std::size_t repeat = 1;        // samples per record
  std::size_t jobs = 1;
  std::size_t batch_size = 512;
};

struct CountOptions {
  TokenizerPaths tokenizer;
  std::optional<std::string> token;
  std::optional<std::filesystem::path> file;  // one token per line
};

struct EnumerateOptions {
  TokenizerPaths tokenizer;
  std::string token;
  std::size_t limit = 1000;
};

struct StatsOptions {
  std::vector<std::filesystem::path> inputs;
  std::vector<Ratio> edges;
};

struct GenOptions {
  TaskKind kind = TaskKind::count_chars;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::optional<TokenizerPaths> tokenizer;      // count_chars and probes
  std::optional<std::filesystem::path> wordlist;  // probes
  std::filesystem::path output;
  std::size_t digits = 10;         // arithmetic
  std::size_t acronym_length = 5;  // acronym
  SchemeConfig probe_scheme{Scheme::character};
};

struct GradeOptions {
  std::filesystem::path dataset;
  std::filesystem::path generations;
  std::optional<std::filesystem::path> canonical_report;
  std::optional<double> canonical_score;
};

struct ScoreOptions {
  std::filesystem::path generations;
  std::filesystem::path wordlist;
  std::optional<std::string> grammar_endpoint;
  std::chrono::milliseconds timeout{10'000};
  std::string grammar_protocol = "plain";
  std::size_t jobs = 4;
};

struct SftFormatOptions {
  TokenizerPaths tokenizer;
  std::filesystem::path input;
  std::filesystem::path output;
  AblationMode mode = AblationMode::chat;
  std::optional<std::size_t> instruction_tokens;
};

// Each command returns an ExitCode; reports go to `out`, diagnostics to `err`.
int cmd_encode(const EncodeOptions& options, std::ostream& err);
int cmd_count(const CountOptions& options, std::ostream& out, std::ostream& err);
int cmd_enumerate(const EnumerateOptions& options, std::ostream& out, std::ostream& err);
int cmd_stats(const StatsOptions& options, std::ostream& out, std::ostream& err);
int cmd_gen(const GenOptions& options, std::ostream& err);
int cmd_grade(const GradeOptions& options, std::ostream& out, std::ostream& err);
int cmd_score(const ScoreOptions& options, std::ostream& out, std::ostream& err);
int cmd_sft_format(const SftFormatOptions& options, std::ostream& err);

// Runs `body`, mapping exceptions to exit codes and printing them to `err`.
int run_guarded(const std::function<int()>& body, std::ostream& err);

// "{p}" in `pattern` replaced by the shortest decimal spelling of p.
std::string expand_p(const std::string& pattern, double p);
std::string format_p(double p);

// One encoded record. `seed` is the per-record seed actually used.
nlohmann::json encode_record(const Tokenizer& tok, const std::string& id, std::string_view text,
                             const SchemeConfig& cfg, SegmentationCache* cache, std::optional<std::size_t> sample);

}  // namespace noncanon
