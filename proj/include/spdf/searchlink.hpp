#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "spdf/corpus.hpp"

namespace spdf::search {

/// KW_ij: both persons' keywords plus the assignment's, case-folded and deduplicated.
std::set<std::string> build_keywords(const corpus::Person& p_i, const corpus::Person& p_j,
                                     const corpus::Assignment& assignment);

/// Conjunctive query: keywords in lexicographic order joined by single spaces.
std::string query_string(const std::set<std::string>& keywords);

class SearchProvider {
 public:
  virtual ~SearchProvider() = default;
  /// Number of relevant results for `query`. Throws Error(Unavailable) when the backend is down.
  virtual std::uint64_t hits(const std::string& query) = 0;
};

/// Replays a JSON object mapping query strings to hit counts; absent keys count 0.
class FixtureProvider final : public SearchProvider {
 public:
  explicit FixtureProvider(std::map<std::string, std::uint64_t> table) : table_(std::move(table)) {}
  static FixtureProvider from_file(const std::filesystem::path& path);

  std::uint64_t hits(const std::string& query) override;
  const std::map<std::string, std::uint64_t>& table() const { return table_; }

 private:
  std::map<std::string, std::uint64_t> table_;
};

/// GET <endpoint>?q=<query>, answering {"hits": n}. The API key, when configured, is
/// sent as a bearer token.
class HttpProvider final : public SearchProvider {
 public:
  struct Config {
    std::string endpoint;  // http(s)://host[:port]/path
    std::string api_key;
    std::chrono::seconds timeout{10};

    /// SPDF_SEARCH_URL, SPDF_SEARCH_KEY_VAR (name of the variable holding the key),
    /// SPDF_SEARCH_TIMEOUT (seconds).
    static Config from_env();
  };

  explicit HttpProvider(Config config);
  std::uint64_t hits(const std::string& query) override;

 private:
  Config config_;
  std::string origin_;
  std::string path_;
};

std::uint64_t query_hits(SearchProvider& provider, const std::set<std::string>& keywords);

/// log(1+n) / log(1+n_max); 0 when n_max is 0.
double se_score(std::uint64_t n, std::uint64_t n_max);

struct SearchEvidence {
  std::string p_i;  // p_i < p_j
  std::string p_j;
  std::string assignment;
  std::set<std::string> keywords;
  std::uint64_t hits = 0;
  double se_norm = 0.0;

  bool operator==(const SearchEvidence&) const = default;
};

/// Queries every pair of people who both submitted the assignment and normalizes by
/// the assignment-wide maximum.
std::vector<SearchEvidence> collect_evidence(const corpus::Project& project, std::string_view assignment,
                                             SearchProvider& provider);

}  // namespace spdf::search
