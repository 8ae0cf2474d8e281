#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "noncanon/commands.hpp"

using namespace noncanon;

namespace {

struct TokenizerFlags {
  std::string vocab;
  std::string merges;
  std::string pretok;

  void attach(CLI::App* app, bool required = true) {
    auto* v = app->add_option("--vocab", vocab, "vocab.json");
    auto* m = app->add_option("--merges", merges, "merges.txt");
    if (required) {
      v->required();
      m->required();
    }
    app->add_option("--pretok-config", pretok, "pretokenizer config (JSON)");
  }
  bool given() const { return !vocab.empty() && !merges.empty(); }
  TokenizerPaths paths() const {
    TokenizerPaths p{vocab, merges, std::nullopt};
    if (!pretok.empty()) p.pretok_config = pretok;
    return p;
  }
};

std::vector<double> parse_p_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double p = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad --p value '" + item + "'");
    out.push_back(p);
  }
  if (out.empty()) throw std::invalid_argument("empty --p list");
  return out;
}

std::vector<Ratio> parse_edges(const std::string& text) {
  std::vector<Ratio> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_ratio(item));
  }
  return out;
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Canonical and non-canonical BPE tokenization toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  // encode
  auto* encode = app.add_subcommand("encode", "tokenize a JSONL corpus with a scheme");
  TokenizerFlags enc_tok;
  enc_tok.attach(encode);
  EncodeOptions enc;
  std::string enc_input, enc_output, enc_scheme = "canonical", enc_p;
  encode->add_option("--input", enc_input, "JSONL with id and text")->required();
  encode->add_option("--output", enc_output, "output JSONL; {p} expands to the dropout p")->required();
  encode->add_option("--scheme", enc_scheme, "canonical|random|char|dropout|digits-right");
  encode->add_option("--p", enc_p, "dropout probability, or a comma-separated grid");
  encode->add_option("--seed", enc.scheme.seed, "global seed");
  encode->add_option("--digit-group-size", enc.scheme.digit_group_size);
  encode->add_flag("--exclude-identity", enc.scheme.exclude_identity, "random: never keep a token whole");
  encode->add_flag("--force-bytes", enc.scheme.force_bytes, "char: always use byte units");
  encode->add_option("--repeat", enc.repeat, "samples per record");
  encode->add_option("--jobs", enc.jobs, "worker threads");
  encode->add_option("--batch-size", enc.batch_size);

  // count
  auto* count = app.add_subcommand("count", "number of segmentations of a token");
  TokenizerFlags cnt_tok;
  cnt_tok.attach(count);
  std::string cnt_token, cnt_file;
  count->add_option("token", cnt_token, "raw token text");
  count->add_option("--file", cnt_file, "one token per line");

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "list segmentations of a token");
  TokenizerFlags en_tok;
  en_tok.attach(enumerate);
  EnumerateOptions en;
  enumerate->add_option("token", en.token, "raw token text")->required();
  enumerate->add_option("--limit", en.limit);

  // stats
  auto* stats = app.add_subcommand("stats", "length-ratio histogram of encoded files");
  std::vector<std::string> st_inputs;
  std::string st_buckets = "1,1.5,2,2.5,3,4,5";
  stats->add_option("--input,inputs", st_inputs, "encoded JSONL files")->required();
  stats->add_option("--buckets", st_buckets, "comma-separated bucket edges");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a task dataset");
  TokenizerFlags gen_tok;
  gen_tok.attach(gen, false);
  GenOptions go;
  std::string gen_kind, gen_output, gen_wordlist, gen_scheme = "char";
  gen->add_option("--task", gen_kind, "count_chars|acronym|arithmetic|word_repeat|identify_misspelling")->required();
  gen->add_option("--n", go.n)->required();
  gen->add_option("--seed", go.seed);
  gen->add_option("--output", gen_output)->required();
  gen->add_option("--digits", go.digits, "arithmetic operand digits");
  gen->add_option("--length", go.acronym_length, "acronym length");
  gen->add_option("--wordlist", gen_wordlist, "probe words");
  gen->add_option("--scheme", gen_scheme, "probe alternative scheme");
  gen->add_option("--p", go.probe_scheme.p, "probe dropout probability");

  // grade
  auto* grade = app.add_subcommand("grade", "grade generations against a dataset");
  GradeOptions gr;
  std::string gr_dataset, gr_generations, gr_canon_report;
  double gr_canon_score = -1;
  grade->add_option("--dataset", gr_dataset)->required();
  grade->add_option("--input,--generations", gr_generations, "JSONL with id and generation")->required();
  grade->add_option("--canonical-report", gr_canon_report, "report from the canonical run");
  grade->add_option("--canonical-score", gr_canon_score, "canonical accuracy in percent");

  // score
  auto* score = app.add_subcommand("score", "spelling and grammaticality of generations");
  ScoreOptions sc;
  std::string sc_input, sc_wordlist, sc_endpoint;
  long long sc_timeout = -1;
  score->add_option("--input", sc_input, "JSONL with id and generation")->required();
  score->add_option("--wordlist", sc_wordlist)->required();
  score->add_option("--grammar-endpoint", sc_endpoint, "http://host:port/path");
  score->add_option("--grammar-protocol", sc.grammar_protocol, "plain|languagetool");
  score->add_option("--timeout", sc_timeout, "grammar request timeout (ms)");
  score->add_option("--jobs", sc.jobs, "concurrent grammar requests");

  // sft-format
  auto* sft = app.add_subcommand("sft-format", "render instruction/response pairs");
  TokenizerFlags sft_tok;
  sft_tok.attach(sft);
  SftFormatOptions so;
  std::string sft_input, sft_output, sft_mode = "chat";
  std::size_t sft_n = 0;
  sft->add_option("--input", sft_input, "JSONL with instruction and response")->required();
  sft->add_option("--output", sft_output)->required();
  sft->add_option("--mode", sft_mode, "chat|full_gradient|qa_template|no_template|remove_instruction");
  auto* sft_n_opt = sft->add_option("--instruction-tokens", sft_n, "override n for remove_instruction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  auto& err = std::cerr;
  auto& out = std::cout;
  return run_guarded(
      [&]() -> int {
        if (encode->parsed()) {
          enc.tokenizer = enc_tok.paths();
          enc.input = enc_input;
          enc.output = enc_output;
          enc.scheme.scheme = parse_scheme(enc_scheme);
          if (!enc_p.empty()) enc.p_values = parse_p_list(enc_p);
          return cmd_encode(enc, err);
        }
        if (count->parsed()) {
          CountOptions co{cnt_tok.paths(), std::nullopt, std::nullopt};
          if (!cnt_token.empty()) co.token = cnt_token;
          if (!cnt_file.empty()) co.file = cnt_file;
          return cmd_count(co, out, err);
        }
        if (enumerate->parsed()) {
          en.tokenizer = en_tok.paths();
          return cmd_enumerate(en, out, err);
        }
        if (stats->parsed()) {
          StatsOptions st;
          for (const auto& s : st_inputs) st.inputs.emplace_back(s);
          st.edges = parse_edges(st_buckets);
          return cmd_stats(st, out, err);
        }
        if (gen->parsed()) {
          go.kind = parse_task_kind(gen_kind);
          go.output = gen_output;
          if (gen_tok.given()) go.tokenizer = gen_tok.paths();
          if (!gen_wordlist.empty()) go.wordlist = gen_wordlist;
          go.probe_scheme.scheme = parse_scheme(gen_scheme);
          go.probe_scheme.validate();
          return cmd_gen(go, err);
        }
        if (grade->parsed()) {
          gr.dataset = gr_dataset;
          gr.generations = gr_generations;
          if (!gr_canon_report.empty()) gr.canonical_report = gr_canon_report;
          if (gr_canon_score >= 0) gr.canonical_score = gr_canon_score;
          return cmd_grade(gr, out, err);
        }
        if (score->parsed()) {
          sc.generations = sc_input;
          sc.wordlist = sc_wordlist;
          const auto endpoint = sc_endpoint.empty() ? env_or("NONCANON_GRAMMAR_ENDPOINT", "") : sc_endpoint;
          if (!endpoint.empty()) sc.grammar_endpoint = endpoint;
          if (sc_timeout < 0) sc_timeout = std::stoll(env_or("NONCANON_GRAMMAR_TIMEOUT_MS", "10000"));
          if (sc_timeout <= 0) throw std::invalid_argument("timeout must be positive");
          sc.timeout = std::chrono::milliseconds(sc_timeout);
          return cmd_score(sc, out, err);
        }
        if (sft->parsed()) {
          so.tokenizer = sft_tok.paths();
          so.input = sft_input;
          so.output = sft_output;
          so.mode = parse_ablation_mode(sft_mode);
          if (sft_n_opt->count() > 0) so.instruction_tokens = sft_n;
          return cmd_sft_format(so, err);
        }
        return kExitUsage;
      },
      err);
}
