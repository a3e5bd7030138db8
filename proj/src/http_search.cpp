#include <cstdlib>

#include "httplib.h"
#include "json.hpp"
#include "spdf/error.hpp"
#include "spdf/searchlink.hpp"

namespace spdf::search {

HttpProvider::Config HttpProvider::Config::from_env() {
  Config c;
  if (const char* url = std::getenv("SPDF_SEARCH_URL")) c.endpoint = url;
  if (c.endpoint.empty()) fail(ErrorKind::InvalidArgument, "SPDF_SEARCH_URL is not set");
  if (const char* var = std::getenv("SPDF_SEARCH_KEY_VAR"); var && *var) {
    if (const char* key = std::getenv(var)) c.api_key = key;
  }
  if (const char* t = std::getenv("SPDF_SEARCH_TIMEOUT"); t && *t) {
    char* end = nullptr;
    const long secs = std::strtol(t, &end, 10);
    if (*end != '\0' || secs <= 0) fail(ErrorKind::InvalidArgument, "SPDF_SEARCH_TIMEOUT must be a positive integer");
    c.timeout = std::chrono::seconds(secs);
  }
  return c;
}

HttpProvider::HttpProvider(Config config) : config_(std::move(config)) {
  const auto scheme_end = config_.endpoint.find("://");
  if (scheme_end == std::string::npos) fail(ErrorKind::InvalidArgument, "search endpoint needs a scheme: " + config_.endpoint);
  const auto path_start = config_.endpoint.find('/', scheme_end + 3);
  origin_ = config_.endpoint.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : config_.endpoint.substr(path_start);
}

std::uint64_t HttpProvider::hits(const std::string& query) {
  httplib::Client client(origin_);
  if (!client.is_valid()) fail(ErrorKind::InvalidArgument, "unsupported search endpoint: " + config_.endpoint);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  const auto res = client.Get(path_, httplib::Params{{"q", query}}, headers);
  if (!res) fail(ErrorKind::Unavailable, "search provider unreachable: " + httplib::to_string(res.error()));
  if (res->status >= 500 || res->status == 429) {
    fail(ErrorKind::Unavailable, "search provider returned HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) fail(ErrorKind::InvalidArgument, "search provider returned HTTP " + std::to_string(res->status));
  try {
    const auto body = nlohmann::json::parse(res->body);
    const auto& n = body.is_object() ? body.at("hits") : body;
    if (!n.is_number_unsigned()) fail(ErrorKind::Parse, "search provider hit count is not a non-negative integer");
    return n.get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("malformed search provider response: ") + e.what());
  }
}

}  // namespace spdf::search
