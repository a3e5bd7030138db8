#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "spdf/corpus.hpp"
#include "spdf/glmstats.hpp"
#include "spdf/ranking.hpp"
#include "spdf/searchlink.hpp"
#include "spdf/simengine.hpp"
#include "spdf/socialgraph.hpp"

namespace spdf {

/// Seconds since the epoch; honours SOURCE_DATE_EPOCH for reproducible runs.
std::int64_t current_time();

struct SocialIngestReport {
  std::size_t actions = 0;
  std::vector<social::SkippedAction> skipped;
  std::vector<social::IdentityMatch> pending;
};

/// One project with all gathered evidence and investigator decisions, persisted as
/// `state.json` (snapshot, replaced atomically) plus `journal.jsonl` (append-only
/// status changes, fsynced before a change is acknowledged).
///
/// Readers share the lock; every mutation holds it exclusively.
class Workspace {
 public:
  using IdentityDecisions = std::map<social::IdentityTable::Key, std::pair<std::string, social::IdentityDecision>>;

  static Workspace create(const std::filesystem::path& dir, corpus::Project project);
  static Workspace open(const std::filesystem::path& dir);
  static bool exists(const std::filesystem::path& dir);

  Workspace(Workspace&& other) noexcept;
  Workspace& operator=(Workspace&&) = delete;

  const std::filesystem::path& dir() const { return dir_; }

  // Evidence gathering. Assignment empty = every assignment.
  void run_similarity(std::string_view assignment = {}, std::optional<sim::FingerprintParams> params = {});
  std::size_t import_similarity(const std::filesystem::path& csv);
  std::size_t import_similarity(std::istream& csv);
  SocialIngestReport ingest_social(std::vector<social::DirectoryEntry> directory, std::string actions_jsonl);
  SocialIngestReport decide_identity(const std::string& network, const std::string& handle, const std::string& person,
                                     social::IdentityDecision decision);
  void ingest_search(search::SearchProvider& provider, std::string_view assignment = {});
  void set_weights(std::string_view assignment, const corpus::Weights& weights);

  ranking::PairAssessment set_status(const std::string& pair, ranking::Status status, const std::string& actor,
                                     std::optional<std::uint64_t> expected_revision = {});

  // Queries.
  corpus::Project project() const;
  std::vector<sim::SimilarityRecord> similarity(std::string_view assignment) const;
  std::vector<ranking::PairAssessment> ranked_table(std::string_view assignment,
                                                    ranking::Factor sort = ranking::Factor::Total) const;
  ranking::PairAssessment pair(std::string_view pair_id) const;
  nlohmann::json pair_detail(std::string_view pair_id) const;
  ranking::FactorClusterStats clusters(std::string_view assignment, ranking::Factor factor) const;
  std::set<ranking::DocumentPair> confirmed(std::string_view assignment) const;
  std::vector<glm::FeatureRow> features(std::string_view assignment = {}) const;
  glm::ComparisonReport evaluate() const;
  std::vector<social::IdentityMatch> identities() const;
  std::vector<social::IdentityMatch> pending_identities() const;
  std::vector<ranking::JournalEntry> journal() const;
  nlohmann::json graph(std::string_view assignment = {}) const;
  nlohmann::json matrix(std::string_view assignment, ranking::Factor factor) const;

 private:
  Workspace() = default;

  struct State {
    corpus::Project project;
    std::map<std::string, std::vector<sim::SimilarityRecord>> similarity;
    std::vector<social::DirectoryEntry> directory;
    IdentityDecisions identity_decisions;
    std::string actions_jsonl;
    std::vector<search::SearchEvidence> search;
  };

  // Derived from State; rebuilt after social changes.
  void rebuild_social();
  void persist_snapshot() const;
  std::vector<ranking::PairAssessment> table_locked(std::string_view assignment, ranking::Factor sort) const;
  std::vector<std::string> assignment_ids(std::string_view assignment) const;

  std::filesystem::path dir_;
  State state_;
  ranking::StatusBook statuses_;
  social::IdentityTable identities_;
  social::ConnectionIndex connections_;
  std::vector<social::SkippedAction> skipped_;
  mutable std::shared_mutex mutex_;
};

}  // namespace spdf
