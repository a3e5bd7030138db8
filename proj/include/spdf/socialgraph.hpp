#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "spdf/corpus.hpp"

namespace spdf::social {

enum class Activity { Follow, MutualFollow, Support };

std::string_view activity_name(Activity a);

struct SocialAction {
  std::string network;
  Activity activity = Activity::Follow;
  std::optional<std::string> support_kind;  // share, comment, like, ... for Support
  std::optional<double> weight;             // user-defined; defaults per activity when absent
  std::string from;                         // person ids; canonical order for MutualFollow
  std::string to;

  double effective_weight() const;
  bool operator==(const SocialAction&) const = default;
};

double default_weight(Activity a);

/// Saturating sum min(1, sum of weights) over all actions of one unordered pair.
double sn_score(std::span<const SocialAction> actions);

/// All actions between one unordered pair of people.
struct Connection {
  std::string p_i;  // p_i < p_j
  std::string p_j;
  std::vector<SocialAction> actions;

  double sn_score() const { return social::sn_score(actions); }
  /// A follow or mutual follow exists on `network`, in either direction.
  bool follows_on(std::string_view network) const;
};

using PersonPair = std::pair<std::string, std::string>;
PersonPair canonical_pair(std::string_view a, std::string_view b);

/// Connections keyed by canonical person pair.
class ConnectionIndex {
 public:
  ConnectionIndex() = default;
  explicit ConnectionIndex(std::span<const SocialAction> actions);

  const Connection* find(std::string_view a, std::string_view b) const;
  double sn(std::string_view a, std::string_view b) const;
  const std::map<PersonPair, Connection>& all() const { return by_pair_; }

 private:
  std::map<PersonPair, Connection> by_pair_;
};

/// Levenshtein distance over code points.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
/// UTF-8 convenience overload.
std::size_t levenshtein(std::string_view a, std::string_view b);

struct DirectoryEntry {
  std::string network;
  std::string handle;
  std::string display_name;

  bool operator==(const DirectoryEntry&) const = default;
};

std::vector<DirectoryEntry> parse_directory(const nlohmann::json& j);
std::vector<DirectoryEntry> read_directory(const std::filesystem::path& path);

inline constexpr double kAcceptThreshold = 0.25;

struct IdentityMatch {
  std::string person;
  std::string network;
  std::string candidate_handle;
  std::string display_name;
  std::size_t distance = 0;
  double normalized = 0.0;  // distance / max(|a|, |b|)
  bool accepted = false;
  bool ambiguous = false;

  bool operator==(const IdentityMatch&) const = default;
};

/// Ranks every directory entry against the person's name. Ambiguity is judged per
/// network: two or more accepted candidates tied at the best distance.
std::vector<IdentityMatch> resolve_identities(const corpus::Person& person, std::span<const DirectoryEntry> directory);

enum class IdentityDecision { Confirmed, Rejected };

/// (network, handle) -> person, built from manifest accounts, unambiguous matches and
/// investigator decisions. Ambiguous matches stay pending until confirmed.
class IdentityTable {
 public:
  using Key = std::pair<std::string, std::string>;  // network, handle

  static IdentityTable build(const corpus::Project& project, std::span<const DirectoryEntry> directory,
                             const std::map<Key, std::pair<std::string, IdentityDecision>>& decisions = {});

  std::optional<std::string> person_for(std::string_view network, std::string_view handle) const;
  const std::map<Key, std::string>& confirmed() const { return confirmed_; }
  const std::vector<IdentityMatch>& pending() const { return pending_; }
  const std::vector<IdentityMatch>& matches() const { return matches_; }

 private:
  std::map<Key, std::string> confirmed_;
  std::vector<IdentityMatch> pending_;
  std::vector<IdentityMatch> matches_;
};

struct SkippedAction {
  std::size_t line = 0;
  std::string reason;
};

struct ActionImport {
  std::vector<SocialAction> actions;
  std::vector<SkippedAction> skipped;
};

/// JSON lines: {"network","from","to","activity","weight"?}.
ActionImport read_actions(std::istream& in, const IdentityTable& identities);
ActionImport import_actions(const std::filesystem::path& path, const IdentityTable& identities);

nlohmann::json action_to_json(const SocialAction& a);
nlohmann::json match_to_json(const IdentityMatch& m);
SocialAction action_from_json(const nlohmann::json& j);

}  // namespace spdf::social
