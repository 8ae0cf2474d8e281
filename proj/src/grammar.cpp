#include "noncanon/grammar.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "httplib.h"
#include "json.hpp"
#include "noncanon/error.hpp"

namespace noncanon {
namespace {

class InFlightSlot {
 public:
  explicit InFlightSlot(std::counting_semaphore<1024>& sem) : sem_(sem) { sem_.acquire(); }
  ~InFlightSlot() { sem_.release(); }
  InFlightSlot(const InFlightSlot&) = delete;
  InFlightSlot& operator=(const InFlightSlot&) = delete;

 private:
  std::counting_semaphore<1024>& sem_;
};

std::ptrdiff_t clamp_slots(std::size_t n) { return static_cast<std::ptrdiff_t>(std::clamp<std::size_t>(n, 1, 1024)); }

}  // namespace

HttpGrammarProvider::HttpGrammarProvider(HttpGrammarConfig config)
    : config_(std::move(config)), in_flight_(clamp_slots(config_.max_in_flight)) {
  constexpr std::string_view scheme = "http://";
  if (config_.endpoint.rfind(scheme, 0) != 0) {
    throw std::invalid_argument("grammar endpoint must start with http://");
  }
  const auto slash = config_.endpoint.find('/', scheme.size());
  host_ = config_.endpoint.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : config_.endpoint.substr(slash);
}

std::size_t HttpGrammarProvider::count_mistakes(std::string_view text) {
  InFlightSlot slot(in_flight_);
  httplib::Client client(host_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Result res;
  if (config_.protocol == GrammarProtocol::languagetool) {
    httplib::Params params{{"text", std::string(text)}, {"language", config_.language}};
    res = client.Post(path_, params);
  } else {
    res = client.Post(path_, std::string(text), "text/plain; charset=utf-8");
  }
  if (!res) throw ProviderError("grammar provider request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw ProviderError("grammar provider returned HTTP " + std::to_string(res->status));
  return config_.protocol == GrammarProtocol::languagetool ? parse_languagetool_matches(res->body)
                                                           : parse_mistake_count(res->body);
}

std::size_t parse_mistake_count(std::string_view body) {
  const auto first = body.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw ProviderError("empty grammar provider response");
  body.remove_prefix(first);
  body = body.substr(0, body.find_last_not_of(" \t\r\n") + 1);
  if (body.front() == '{') {
    try {
      auto j = nlohmann::json::parse(body);
      const auto& m = j.at("mistakes");
      if (!m.is_number_unsigned()) throw ProviderError("'mistakes' must be a non-negative integer");
      return m.get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
      throw ProviderError(std::string("bad grammar provider response: ") + e.what());
    }
  }
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), n);
  if (ec != std::errc() || ptr != body.data() + body.size()) {
    throw ProviderError("bad grammar provider response: '" + std::string(body) + "'");
  }
  return n;
}

std::size_t parse_languagetool_matches(std::string_view body) {
  try {
    auto j = nlohmann::json::parse(body);
    return j.at("matches").size();
  } catch (const nlohmann::json::exception& e) {
    throw ProviderError(std::string("bad LanguageTool response: ") + e.what());
  }
}

}  // namespace noncanon
