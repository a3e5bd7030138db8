#include "spdf/ranking.hpp"

#include <algorithm>
#include <ostream>
#include <tuple>

#include "spdf/error.hpp"

namespace spdf::ranking {
using nlohmann::json;

std::string_view status_name(Status s) {
  switch (s) {
    case Status::NotChecked: return "not_checked";
    case Status::Rejected: return "rejected";
    case Status::Confirmed: return "confirmed";
  }
  return "not_checked";
}

Status parse_status(std::string_view s) {
  if (s == "not_checked") return Status::NotChecked;
  if (s == "rejected") return Status::Rejected;
  if (s == "confirmed") return Status::Confirmed;
  fail(ErrorKind::InvalidArgument, "unknown status: " + std::string(s));
}

std::string_view factor_name(Factor f) {
  switch (f) {
    case Factor::Cs: return "cs";
    case Factor::Sn: return "sn";
    case Factor::Se: return "se";
    case Factor::Total: return "total";
  }
  return "total";
}

Factor parse_factor(std::string_view s) {
  if (s == "cs") return Factor::Cs;
  if (s == "sn") return Factor::Sn;
  if (s == "se") return Factor::Se;
  if (s == "total") return Factor::Total;
  fail(ErrorKind::InvalidArgument, "unknown factor: " + std::string(s));
}

std::string_view status_color(Status s) {
  switch (s) {
    case Status::Confirmed: return "red";
    case Status::NotChecked: return "orange";
    case Status::Rejected: return "green";
  }
  return "orange";
}

std::string pair_id(std::string_view assignment, std::string_view a, std::string_view b) {
  if (b < a) std::swap(a, b);
  std::string id(assignment);
  id += ':';
  id += a;
  id += ':';
  id += b;
  return id;
}

double PairAssessment::factor(Factor f) const {
  switch (f) {
    case Factor::Cs: return cs;
    case Factor::Sn: return sn;
    case Factor::Se: return se;
    case Factor::Total: return total;
  }
  return total;
}

double total_score(double cs, double sn, double se, const corpus::Weights& weights) {
  weights.validate();
  for (double v : {cs, sn, se}) {
    if (!(v >= 0.0 && v <= 1.0)) fail(ErrorKind::InvalidArgument, "factor values must lie in [0,1]");
  }
  return weights.cs * cs + weights.sn * sn + weights.se * se;
}

const StatusEntry* StatusBook::find(std::string_view pair) const {
  auto it = entries_.find(pair);
  return it == entries_.end() ? nullptr : &it->second;
}

JournalEntry StatusBook::apply(const std::string& pair, Status status, const std::string& actor, std::int64_t now) {
  auto& e = entries_[pair];
  JournalEntry j{pair, e.status, status, actor, now, e.revision + 1};
  replay(j);
  return j;
}

void StatusBook::replay(const JournalEntry& j) {
  auto& e = entries_[j.pair];
  e.status = j.status;
  e.revision = j.revision;
  if (j.status == Status::NotChecked) {
    e.decided_at.reset();
  } else {
    e.decided_at = j.at;
  }
  journal_.push_back(j);
}

json journal_to_json(const JournalEntry& e) {
  return {{"pair", e.pair},   {"prior", status_name(e.prior)}, {"status", status_name(e.status)},
          {"actor", e.actor}, {"at", e.at},                    {"revision", e.revision}};
}

JournalEntry journal_from_json(const json& j) {
  return {j.at("pair").get<std::string>(),    parse_status(j.at("prior").get<std::string>()),
          parse_status(j.at("status").get<std::string>()), j.at("actor").get<std::string>(),
          j.at("at").get<std::int64_t>(),     j.at("revision").get<std::uint64_t>()};
}

void sort_assessments(std::vector<PairAssessment>& rows, Factor by) {
  std::sort(rows.begin(), rows.end(), [by](const PairAssessment& a, const PairAssessment& b) {
    const double fa = a.factor(by);
    const double fb = b.factor(by);
    if (fa != fb) return fa > fb;
    if (a.cs != b.cs) return a.cs > b.cs;
    return a.id < b.id;
  });
}

std::vector<PairAssessment> build_ranked_table(const RankingInputs& in, Factor sort) {
  if (in.project == nullptr) fail(ErrorKind::InvalidArgument, "ranking needs a project");
  const auto& project = *in.project;
  const auto& assignment = project.assignment(in.assignment);
  const corpus::Weights weights = in.weights.value_or(assignment.weights);
  weights.validate();

  std::map<std::pair<std::string, std::string>, double> directed;
  for (const auto& r : in.similarity) directed[{r.doc_i, r.doc_j}] = r.s;
  std::map<social::PersonPair, const search::SearchEvidence*> evidence;
  for (const auto& e : in.search) {
    if (e.assignment == assignment.id) evidence[social::canonical_pair(e.p_i, e.p_j)] = &e;
  }

  const auto docs = project.documents_for(assignment.id);
  std::vector<PairAssessment> rows;
  for (std::size_t x = 0; x < docs.size(); ++x) {
    for (std::size_t y = x + 1; y < docs.size(); ++y) {
      const auto* di = docs[x];
      const auto* dj = docs[y];
      if (di->author == dj->author) continue;
      if (dj->author < di->author) std::swap(di, dj);
      PairAssessment a;
      a.p_i = di->author;
      a.p_j = dj->author;
      a.assignment = assignment.id;
      a.id = pair_id(assignment.id, a.p_i, a.p_j);
      a.doc_i = di->id;
      a.doc_j = dj->id;
      if (auto it = directed.find({a.doc_i, a.doc_j}); it != directed.end()) a.s_ij = it->second;
      if (auto it = directed.find({a.doc_j, a.doc_i}); it != directed.end()) a.s_ji = it->second;
      a.cs = std::max(a.s_ij, a.s_ji);
      a.sn = in.connections ? in.connections->sn(a.p_i, a.p_j) : 0.0;
      if (auto it = evidence.find({a.p_i, a.p_j}); it != evidence.end()) {
        a.se = it->second->se_norm;
        a.se_hits = it->second->hits;
      }
      if (a.cs == 0.0 && a.sn == 0.0 && a.se == 0.0) continue;
      a.total = total_score(a.cs, a.sn, a.se, weights);
      if (in.statuses) {
        if (const auto* st = in.statuses->find(a.id)) {
          a.status = st->status;
          a.decided_at = st->decided_at;
          a.revision = st->revision;
        }
      }
      rows.push_back(std::move(a));
    }
  }
  sort_assessments(rows, sort);
  return rows;
}

std::set<DocumentPair> confirmed_set(std::span<const PairAssessment> rows) {
  std::set<DocumentPair> out;
  for (const auto& r : rows) {
    if (r.status == Status::Confirmed) out.emplace(r.doc_i, r.doc_j);
  }
  return out;
}

FactorClusterStats cluster_stats(std::span<const PairAssessment> rows, Factor factor) {
  if (rows.empty()) fail(ErrorKind::InvalidArgument, "cluster statistics need at least one assessment");
  FactorClusterStats s;
  s.factor = factor;
  s.min = rows.front().factor(factor);
  s.max = s.min;
  double sum[3] = {0, 0, 0};
  std::size_t count[3] = {0, 0, 0};
  for (const auto& r : rows) {
    const double v = r.factor(factor);
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
    const auto k = static_cast<std::size_t>(r.status);
    sum[k] += v;
    ++count[k];
  }
  auto mean = [&](Status st) -> std::optional<double> {
    const auto k = static_cast<std::size_t>(st);
    if (count[k] == 0) return std::nullopt;
    // clamp guards against rounding pushing a mean just outside [min, max]
    return std::clamp(sum[k] / static_cast<double>(count[k]), s.min, s.max);
  };
  s.mean_confirmed = mean(Status::Confirmed);
  s.mean_not_checked = mean(Status::NotChecked);
  s.mean_rejected = mean(Status::Rejected);
  return s;
}

json assessment_to_json(const PairAssessment& a) {
  json j = {{"id", a.id},         {"p_i", a.p_i},         {"p_j", a.p_j},
            {"assignment", a.assignment}, {"doc_i", a.doc_i}, {"doc_j", a.doc_j},
            {"s_ij", a.s_ij},     {"s_ji", a.s_ji},       {"cs", a.cs},
            {"sn", a.sn},         {"se", a.se},           {"se_hits", a.se_hits},
            {"total", a.total},   {"status", status_name(a.status)}, {"color", status_color(a.status)},
            {"revision", a.revision}};
  j["decided_at"] = a.decided_at ? json(*a.decided_at) : json(nullptr);
  return j;
}

json cluster_stats_to_json(const FactorClusterStats& s) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {{"factor", factor_name(s.factor)},
          {"min", s.min},
          {"max", s.max},
          {"clusters",
           {{"confirmed", {{"mean", opt(s.mean_confirmed)}, {"color", status_color(Status::Confirmed)}}},
            {"not_checked", {{"mean", opt(s.mean_not_checked)}, {"color", status_color(Status::NotChecked)}}},
            {"rejected", {{"mean", opt(s.mean_rejected)}, {"color", status_color(Status::Rejected)}}}}}};
}

void write_ranked_csv(std::ostream& out, std::span<const PairAssessment> rows) {
  out << "p_i,p_j,assignment,cs,sn,se,total,status\n";
  for (const auto& r : rows) {
    out << r.p_i << ',' << r.p_j << ',' << r.assignment << ',' << sim::format_real(r.cs) << ','
        << sim::format_real(r.sn) << ',' << sim::format_real(r.se) << ',' << sim::format_real(r.total) << ','
        << status_name(r.status) << '\n';
  }
}

}  // namespace spdf::ranking
