#include "spdf/searchlink.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "json.hpp"
#include "spdf/error.hpp"
#include "spdf/text.hpp"

namespace spdf::search {
using nlohmann::json;

namespace {

std::string fold(std::string_view s) { return text::encode_utf8(text::case_fold(text::decode_utf8(s))); }

}  // namespace

std::set<std::string> build_keywords(const corpus::Person& p_i, const corpus::Person& p_j,
                                     const corpus::Assignment& assignment) {
  std::set<std::string> out;
  for (const auto* src : {&p_i.keywords, &p_j.keywords, &assignment.keywords}) {
    for (const auto& k : *src) {
      auto f = fold(k);
      if (!f.empty()) out.insert(std::move(f));
    }
  }
  return out;
}

std::string query_string(const std::set<std::string>& keywords) {
  std::string q;
  for (const auto& k : keywords) {
    if (!q.empty()) q.push_back(' ');
    q += k;
  }
  return q;
}

FixtureProvider FixtureProvider::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot read search fixture: " + path.string());
  std::map<std::string, std::uint64_t> table;
  try {
    const auto j = json::parse(in);
    if (!j.is_object()) fail(ErrorKind::Parse, path.string() + ": fixture must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (!value.is_number_unsigned()) fail(ErrorKind::Parse, path.string() + ": count for '" + key + "' is not a non-negative integer");
      table[key] = value.get<std::uint64_t>();
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, path.string() + ": " + e.what());
  }
  return FixtureProvider(std::move(table));
}

std::uint64_t FixtureProvider::hits(const std::string& query) {
  auto it = table_.find(query);
  return it == table_.end() ? 0 : it->second;
}

std::uint64_t query_hits(SearchProvider& provider, const std::set<std::string>& keywords) {
  if (keywords.empty()) fail(ErrorKind::InvalidArgument, "search query needs at least one keyword");
  return provider.hits(query_string(keywords));
}

double se_score(std::uint64_t n, std::uint64_t n_max) {
  if (n_max == 0) {
    if (n != 0) fail(ErrorKind::InvalidArgument, "hit count exceeds the maximum");
    return 0.0;
  }
  if (n > n_max) fail(ErrorKind::InvalidArgument, "hit count exceeds the maximum");
  return std::log1p(static_cast<double>(n)) / std::log1p(static_cast<double>(n_max));
}

std::vector<SearchEvidence> collect_evidence(const corpus::Project& project, std::string_view assignment,
                                             SearchProvider& provider) {
  const auto& a = project.assignment(assignment);
  const auto docs = project.documents_for(assignment);
  std::vector<std::string> authors;
  for (const auto* d : docs) authors.push_back(d->author);
  std::sort(authors.begin(), authors.end());
  authors.erase(std::unique(authors.begin(), authors.end()), authors.end());

  std::vector<SearchEvidence> out;
  for (std::size_t i = 0; i < authors.size(); ++i) {
    for (std::size_t j = i + 1; j < authors.size(); ++j) {
      SearchEvidence e;
      e.p_i = authors[i];
      e.p_j = authors[j];
      e.assignment = a.id;
      e.keywords = build_keywords(project.person(e.p_i), project.person(e.p_j), a);
      e.hits = e.keywords.empty() ? 0 : query_hits(provider, e.keywords);
      out.push_back(std::move(e));
    }
  }
  std::uint64_t n_max = 0;
  for (const auto& e : out) n_max = std::max(n_max, e.hits);
  for (auto& e : out) e.se_norm = se_score(e.hits, n_max);
  return out;
}

}  // namespace spdf::search
