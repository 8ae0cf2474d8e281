#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <semaphore>
#include <string>
#include <string_view>

namespace noncanon {

// Counts grammatical mistakes in a text. Implementations throw
// ProviderError on failure.
class GrammarProvider {
 public:
  virtual ~GrammarProvider() = default;
  virtual std::size_t count_mistakes(std::string_view text) = 0;
};

enum class GrammarProtocol {
  // POST text/plain; the response body is an integer or {"mistakes": N}.
  plain,
  // LanguageTool /v2/check: form-encoded text+language, mistakes = |matches|.
  languagetool,
};

struct HttpGrammarConfig {
  std::string endpoint;  // http://host[:port]/path
  std::chrono::milliseconds timeout{10'000};
  GrammarProtocol protocol = GrammarProtocol::plain;
  std::string language = "en-US";
  std::size_t max_in_flight = 4;
};

class HttpGrammarProvider final : public GrammarProvider {
 public:
  // Throws std::invalid_argument for an endpoint that is not http://.
  explicit HttpGrammarProvider(HttpGrammarConfig config);
  std::size_t count_mistakes(std::string_view text) override;

 private:
  HttpGrammarConfig config_;
  std::string host_;  // scheme://host:port
  std::string path_;
  std::counting_semaphore<1024> in_flight_;
};

// Parses a plain-protocol response body. Throws ProviderError.
std::size_t parse_mistake_count(std::string_view body);

// Parses a LanguageTool /v2/check JSON response. Throws ProviderError.
std::size_t parse_languagetool_matches(std::string_view body);

}  // namespace noncanon
