#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "spdf/corpus.hpp"
#include "spdf/searchlink.hpp"
#include "spdf/simengine.hpp"
#include "spdf/socialgraph.hpp"

namespace spdf::ranking {

enum class Status { NotChecked, Rejected, Confirmed };
enum class Factor { Cs, Sn, Se, Total };

std::string_view status_name(Status s);
Status parse_status(std::string_view s);
std::string_view factor_name(Factor f);
Factor parse_factor(std::string_view s);

/// Cluster colour used by the review views.
std::string_view status_color(Status s);

/// "<assignment>:<p_i>:<p_j>" with p_i < p_j.
std::string pair_id(std::string_view assignment, std::string_view a, std::string_view b);

struct PairAssessment {
  std::string id;
  std::string p_i;
  std::string p_j;
  std::string assignment;
  std::string doc_i;  // d(p_i)
  std::string doc_j;  // d(p_j)
  double s_ij = 0.0;  // directed similarities, 0 without a record
  double s_ji = 0.0;
  double cs = 0.0;
  double sn = 0.0;
  double se = 0.0;
  std::uint64_t se_hits = 0;
  double total = 0.0;
  Status status = Status::NotChecked;
  std::optional<std::int64_t> decided_at;  // unix seconds
  std::uint64_t revision = 0;

  double factor(Factor f) const;
};

/// w_cs*cs + w_sn*sn + w_se*se.
double total_score(double cs, double sn, double se, const corpus::Weights& weights);

struct StatusEntry {
  Status status = Status::NotChecked;
  std::optional<std::int64_t> decided_at;
  std::uint64_t revision = 0;
};

struct JournalEntry {
  std::string pair;
  Status prior = Status::NotChecked;
  Status status = Status::NotChecked;
  std::string actor;
  std::int64_t at = 0;
  std::uint64_t revision = 0;  // revision after the change
};

nlohmann::json journal_to_json(const JournalEntry& e);
JournalEntry journal_from_json(const nlohmann::json& j);

/// Investigator decisions keyed by pair id, with an append-only journal.
class StatusBook {
 public:
  const StatusEntry* find(std::string_view pair) const;
  /// Applies a change and returns its journal entry; every call is journaled.
  JournalEntry apply(const std::string& pair, Status status, const std::string& actor, std::int64_t now);
  /// Replays a journal entry (used when restoring from disk).
  void replay(const JournalEntry& e);

  const std::map<std::string, StatusEntry, std::less<>>& entries() const { return entries_; }
  const std::vector<JournalEntry>& journal() const { return journal_; }

 private:
  std::map<std::string, StatusEntry, std::less<>> entries_;
  std::vector<JournalEntry> journal_;
};

struct RankingInputs {
  const corpus::Project* project = nullptr;
  std::string assignment;
  std::span<const sim::SimilarityRecord> similarity;
  const social::ConnectionIndex* connections = nullptr;
  std::span<const search::SearchEvidence> search;
  const StatusBook* statuses = nullptr;
  std::optional<corpus::Weights> weights;  // overrides the assignment's weights
};

/// Sorts descending by `by`, then cs descending, then pair id ascending.
void sort_assessments(std::vector<PairAssessment>& rows, Factor by = Factor::Total);

/// One assessment per unordered pair of submitting authors with some non-zero factor.
std::vector<PairAssessment> build_ranked_table(const RankingInputs& in, Factor sort = Factor::Total);

using DocumentPair = std::pair<std::string, std::string>;

/// Document pairs of every confirmed assessment.
std::set<DocumentPair> confirmed_set(std::span<const PairAssessment> rows);

struct FactorClusterStats {
  Factor factor = Factor::Total;
  double min = 0.0;
  double max = 0.0;
  std::optional<double> mean_confirmed;
  std::optional<double> mean_not_checked;
  std::optional<double> mean_rejected;
};

FactorClusterStats cluster_stats(std::span<const PairAssessment> rows, Factor factor);

nlohmann::json assessment_to_json(const PairAssessment& a);
nlohmann::json cluster_stats_to_json(const FactorClusterStats& s);

/// CSV `p_i,p_j,assignment,cs,sn,se,total,status`.
void write_ranked_csv(std::ostream& out, std::span<const PairAssessment> rows);

}  // namespace spdf::ranking
