#include "spdf/workspace.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <tuple>

#include "spdf/error.hpp"

namespace spdf {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kStateVersion = 1;

// Closes fd itself when a write fails.
void write_all(int fd, std::string_view data, const fs::path& path) {
  while (!data.empty()) {
    const auto n = ::write(fd, data.data(), data.size());
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) {
      ::close(fd);
      fail(ErrorKind::Io, "write failed: " + path.string());
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

void durable_replace(const fs::path& path, std::string_view data) {
  const fs::path tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) fail(ErrorKind::Io, "cannot write " + tmp.string());
  write_all(fd, data, tmp);
  if (::fsync(fd) != 0) {
    ::close(fd);
    fail(ErrorKind::Io, "fsync failed: " + tmp.string());
  }
  ::close(fd);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::Io, "cannot replace " + path.string() + ": " + ec.message());
}

void durable_append(const fs::path& path, std::string_view line) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) fail(ErrorKind::Io, "cannot open journal " + path.string());
  write_all(fd, line, path);
  const int rc = ::fsync(fd);
  ::close(fd);
  if (rc != 0) fail(ErrorKind::Io, "fsync failed: " + path.string());
}

json span_json(const sim::Span& s) { return json::array({s.begin, s.end}); }
sim::Span span_from(const json& j) { return {j.at(0).get<std::size_t>(), j.at(1).get<std::size_t>()}; }

json record_json(const sim::SimilarityRecord& r) {
  json spans = json::array();
  for (const auto& [a, b] : r.matched_spans) spans.push_back(json::array({span_json(a), span_json(b)}));
  return {{"doc_i", r.doc_i}, {"doc_j", r.doc_j}, {"s_ij", r.s}, {"matched_spans", spans}};
}

sim::SimilarityRecord record_from(const json& j) {
  sim::SimilarityRecord r;
  r.doc_i = j.at("doc_i").get<std::string>();
  r.doc_j = j.at("doc_j").get<std::string>();
  r.s = j.at("s_ij").get<double>();
  for (const auto& sp : j.at("matched_spans")) r.matched_spans.emplace_back(span_from(sp.at(0)), span_from(sp.at(1)));
  return r;
}

json evidence_json(const search::SearchEvidence& e) {
  return {{"p_i", e.p_i}, {"p_j", e.p_j}, {"assignment", e.assignment},
          {"keywords", e.keywords}, {"hits", e.hits}, {"se_norm", e.se_norm}};
}

search::SearchEvidence evidence_from(const json& j) {
  search::SearchEvidence e;
  e.p_i = j.at("p_i").get<std::string>();
  e.p_j = j.at("p_j").get<std::string>();
  e.assignment = j.at("assignment").get<std::string>();
  e.keywords = j.at("keywords").get<std::set<std::string>>();
  e.hits = j.at("hits").get<std::uint64_t>();
  e.se_norm = j.at("se_norm").get<double>();
  return e;
}

}  // namespace

std::int64_t current_time() {
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (*end == '\0') return v;
  }
  return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
}

Workspace::Workspace(Workspace&& other) noexcept
    : dir_(std::move(other.dir_)),
      state_(std::move(other.state_)),
      statuses_(std::move(other.statuses_)),
      identities_(std::move(other.identities_)),
      connections_(std::move(other.connections_)),
      skipped_(std::move(other.skipped_)) {}

bool Workspace::exists(const fs::path& dir) { return fs::exists(dir / "state.json"); }

Workspace Workspace::create(const fs::path& dir, corpus::Project project) {
  fs::create_directories(dir);
  Workspace w;
  w.dir_ = dir;
  w.state_.project = std::move(project);
  std::error_code ec;
  fs::remove(dir / "journal.jsonl", ec);
  w.rebuild_social();
  w.persist_snapshot();
  return w;
}

Workspace Workspace::open(const fs::path& dir) {
  const fs::path state_path = dir / "state.json";
  std::ifstream in(state_path);
  if (!in) fail(ErrorKind::NotFound, "no workspace at " + dir.string());
  Workspace w;
  w.dir_ = dir;
  try {
    const json j = json::parse(in);
    if (j.at("version").get<int>() != kStateVersion) fail(ErrorKind::Parse, "unsupported workspace version");
    w.state_.project = corpus::project_from_json(j.at("project"));
    for (const auto& [aid, records] : j.at("similarity").items()) {
      auto& out = w.state_.similarity[aid];
      for (const auto& r : records) out.push_back(record_from(r));
    }
    w.state_.directory = social::parse_directory(j.at("directory"));
    for (const auto& d : j.at("identity_decisions")) {
      w.state_.identity_decisions[{d.at("network").get<std::string>(), d.at("handle").get<std::string>()}] = {
          d.at("person").get<std::string>(), d.at("decision").get<std::string>() == "confirmed"
                                                 ? social::IdentityDecision::Confirmed
                                                 : social::IdentityDecision::Rejected};
    }
    w.state_.actions_jsonl = j.at("actions_jsonl").get<std::string>();
    for (const auto& e : j.at("search")) w.state_.search.push_back(evidence_from(e));
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, "corrupt workspace " + state_path.string() + ": " + e.what());
  }

  // A trailing line without its newline was never acknowledged (the append is fsynced
  // before a change is reported), so it is dropped and the file truncated back to it.
  const fs::path journal_path = dir / "journal.jsonl";
  std::string content;
  if (std::ifstream journal(journal_path, std::ios::binary); journal) {
    content.assign(std::istreambuf_iterator<char>(journal), {});
  }
  if (const auto last = content.rfind('\n'); content.size() && last != content.size() - 1) {
    content.resize(last == std::string::npos ? 0 : last + 1);
    fs::resize_file(journal_path, content.size());
  }
  std::istringstream lines(content);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      w.statuses_.replay(ranking::journal_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      fail(ErrorKind::Parse, "corrupt journal line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  w.rebuild_social();
  return w;
}

void Workspace::persist_snapshot() const {
  json j;
  j["version"] = kStateVersion;
  j["project"] = corpus::project_to_json(state_.project);
  j["similarity"] = json::object();
  for (const auto& [aid, records] : state_.similarity) {
    auto& arr = j["similarity"][aid] = json::array();
    for (const auto& r : records) arr.push_back(record_json(r));
  }
  j["directory"] = json::array();
  for (const auto& d : state_.directory) {
    j["directory"].push_back({{"network", d.network}, {"handle", d.handle}, {"display_name", d.display_name}});
  }
  j["identity_decisions"] = json::array();
  for (const auto& [key, d] : state_.identity_decisions) {
    j["identity_decisions"].push_back(
        {{"network", key.first},
         {"handle", key.second},
         {"person", d.first},
         {"decision", d.second == social::IdentityDecision::Confirmed ? "confirmed" : "rejected"}});
  }
  j["actions_jsonl"] = state_.actions_jsonl;
  j["search"] = json::array();
  for (const auto& e : state_.search) j["search"].push_back(evidence_json(e));
  durable_replace(dir_ / "state.json", j.dump(1) + "\n");
}

void Workspace::rebuild_social() {
  identities_ = social::IdentityTable::build(state_.project, state_.directory, state_.identity_decisions);
  std::istringstream in(state_.actions_jsonl);
  auto imported = social::read_actions(in, identities_);
  connections_ = social::ConnectionIndex(imported.actions);
  skipped_ = std::move(imported.skipped);
}

std::vector<std::string> Workspace::assignment_ids(std::string_view assignment) const {
  std::vector<std::string> ids;
  if (!assignment.empty()) {
    ids.push_back(state_.project.assignment(assignment).id);
  } else {
    for (const auto& a : state_.project.assignments()) ids.push_back(a.id);
  }
  return ids;
}

void Workspace::run_similarity(std::string_view assignment, std::optional<sim::FingerprintParams> params) {
  std::unique_lock lock(mutex_);
  auto next = state_.similarity;
  for (const auto& aid : assignment_ids(assignment)) next[aid] = sim::all_pairs_similarity(state_.project, aid, params);
  state_.similarity = std::move(next);
  persist_snapshot();
}

std::size_t Workspace::import_similarity(const fs::path& csv) {
  std::ifstream in(csv);
  if (!in) fail(ErrorKind::Io, "cannot read similarity report: " + csv.string());
  return import_similarity(in);
}

std::size_t Workspace::import_similarity(std::istream& csv) {
  std::unique_lock lock(mutex_);
  auto records = sim::read_similarity_csv(csv, state_.project);
  std::map<std::string, std::vector<sim::SimilarityRecord>> grouped;
  for (auto& r : records) grouped[state_.project.document(r.doc_i).assignment].push_back(std::move(r));
  for (auto& [aid, recs] : grouped) state_.similarity[aid] = std::move(recs);
  persist_snapshot();
  return records.size();
}

SocialIngestReport Workspace::ingest_social(std::vector<social::DirectoryEntry> directory, std::string actions_jsonl) {
  std::unique_lock lock(mutex_);
  // Validate before touching state: malformed lines abort the whole ingest.
  const auto table = social::IdentityTable::build(state_.project, directory, state_.identity_decisions);
  std::istringstream probe(actions_jsonl);
  social::read_actions(probe, table);

  state_.directory = std::move(directory);
  state_.actions_jsonl = std::move(actions_jsonl);
  rebuild_social();
  persist_snapshot();
  SocialIngestReport r;
  for (const auto& [pair, c] : connections_.all()) r.actions += c.actions.size();
  r.skipped = skipped_;
  r.pending = identities_.pending();
  return r;
}

SocialIngestReport Workspace::decide_identity(const std::string& network, const std::string& handle,
                                              const std::string& person, social::IdentityDecision decision) {
  std::unique_lock lock(mutex_);
  state_.project.person(person);
  state_.identity_decisions[{network, handle}] = {person, decision};
  rebuild_social();
  persist_snapshot();
  SocialIngestReport r;
  for (const auto& [pair, c] : connections_.all()) r.actions += c.actions.size();
  r.skipped = skipped_;
  r.pending = identities_.pending();
  return r;
}

void Workspace::ingest_search(search::SearchProvider& provider, std::string_view assignment) {
  std::unique_lock lock(mutex_);
  const auto ids = assignment_ids(assignment);
  std::vector<search::SearchEvidence> fresh;
  for (const auto& aid : ids) {
    auto ev = search::collect_evidence(state_.project, aid, provider);
    fresh.insert(fresh.end(), std::make_move_iterator(ev.begin()), std::make_move_iterator(ev.end()));
  }
  std::erase_if(state_.search, [&](const search::SearchEvidence& e) {
    return std::find(ids.begin(), ids.end(), e.assignment) != ids.end();
  });
  state_.search.insert(state_.search.end(), fresh.begin(), fresh.end());
  std::sort(state_.search.begin(), state_.search.end(), [](const auto& a, const auto& b) {
    return std::tie(a.assignment, a.p_i, a.p_j) < std::tie(b.assignment, b.p_i, b.p_j);
  });
  persist_snapshot();
}

void Workspace::set_weights(std::string_view assignment, const corpus::Weights& weights) {
  weights.validate();
  std::unique_lock lock(mutex_);
  state_.project.mutable_assignment(assignment).weights = weights;
  persist_snapshot();
}

ranking::PairAssessment Workspace::set_status(const std::string& pair, ranking::Status status, const std::string& actor,
                                              std::optional<std::uint64_t> expected_revision) {
  std::unique_lock lock(mutex_);
  const auto colon = pair.find(':');
  if (colon == std::string::npos) fail(ErrorKind::NotFound, "unknown pair: " + pair);
  const auto assignment = pair.substr(0, colon);
  std::vector<ranking::PairAssessment> table;
  try {
    table = table_locked(assignment, ranking::Factor::Total);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotFound) fail(ErrorKind::NotFound, "unknown pair: " + pair);
    throw;
  }
  auto it = std::find_if(table.begin(), table.end(), [&](const auto& a) { return a.id == pair; });
  if (it == table.end()) fail(ErrorKind::NotFound, "unknown pair: " + pair);
  if (expected_revision && *expected_revision != it->revision) {
    fail(ErrorKind::Conflict, "pair " + pair + " is at revision " + std::to_string(it->revision) + ", not " +
                                  std::to_string(*expected_revision));
  }
  ranking::StatusBook next = statuses_;
  const auto entry = next.apply(pair, status, actor, current_time());
  durable_append(dir_ / "journal.jsonl", ranking::journal_to_json(entry).dump() + "\n");
  statuses_ = std::move(next);

  auto updated = *it;
  const auto* st = statuses_.find(pair);
  updated.status = st->status;
  updated.decided_at = st->decided_at;
  updated.revision = st->revision;
  return updated;
}

corpus::Project Workspace::project() const {
  std::shared_lock lock(mutex_);
  return state_.project;
}

std::vector<sim::SimilarityRecord> Workspace::similarity(std::string_view assignment) const {
  std::shared_lock lock(mutex_);
  state_.project.assignment(assignment);
  auto it = state_.similarity.find(std::string(assignment));
  return it == state_.similarity.end() ? std::vector<sim::SimilarityRecord>{} : it->second;
}

std::vector<ranking::PairAssessment> Workspace::table_locked(std::string_view assignment, ranking::Factor sort) const {
  ranking::RankingInputs in;
  in.project = &state_.project;
  in.assignment = std::string(assignment);
  auto sim_it = state_.similarity.find(in.assignment);
  if (sim_it != state_.similarity.end()) in.similarity = sim_it->second;
  in.connections = &connections_;
  in.search = state_.search;
  in.statuses = &statuses_;
  return ranking::build_ranked_table(in, sort);
}

std::vector<ranking::PairAssessment> Workspace::ranked_table(std::string_view assignment, ranking::Factor sort) const {
  std::shared_lock lock(mutex_);
  return table_locked(assignment, sort);
}

ranking::PairAssessment Workspace::pair(std::string_view pair_id) const {
  std::shared_lock lock(mutex_);
  const auto colon = pair_id.find(':');
  if (colon == std::string_view::npos) fail(ErrorKind::NotFound, "unknown pair: " + std::string(pair_id));
  const auto assignment = pair_id.substr(0, colon);
  std::vector<ranking::PairAssessment> table;
  try {
    table = table_locked(assignment, ranking::Factor::Total);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotFound) fail(ErrorKind::NotFound, "unknown pair: " + std::string(pair_id));
    throw;
  }
  for (auto& a : table) {
    if (a.id == pair_id) return a;
  }
  fail(ErrorKind::NotFound, "unknown pair: " + std::string(pair_id));
}

json Workspace::pair_detail(std::string_view pair_id) const {
  const auto a = pair(pair_id);
  std::shared_lock lock(mutex_);
  json j = ranking::assessment_to_json(a);
  j["similarity"] = json::array();
  if (auto it = state_.similarity.find(a.assignment); it != state_.similarity.end()) {
    for (const auto& r : it->second) {
      if ((r.doc_i == a.doc_i && r.doc_j == a.doc_j) || (r.doc_i == a.doc_j && r.doc_j == a.doc_i)) {
        j["similarity"].push_back(record_json(r));
      }
    }
  }
  j["actions"] = json::array();
  if (const auto* c = connections_.find(a.p_i, a.p_j)) {
    for (const auto& act : c->actions) j["actions"].push_back(social::action_to_json(act));
  }
  j["search"] = nullptr;
  for (const auto& e : state_.search) {
    if (e.assignment == a.assignment && e.p_i == a.p_i && e.p_j == a.p_j) j["search"] = evidence_json(e);
  }
  j["journal"] = json::array();
  for (const auto& e : statuses_.journal()) {
    if (e.pair == a.id) j["journal"].push_back(ranking::journal_to_json(e));
  }
  return j;
}

ranking::FactorClusterStats Workspace::clusters(std::string_view assignment, ranking::Factor factor) const {
  return ranking::cluster_stats(ranked_table(assignment), factor);
}

std::set<ranking::DocumentPair> Workspace::confirmed(std::string_view assignment) const {
  return ranking::confirmed_set(ranked_table(assignment));
}

std::vector<glm::FeatureRow> Workspace::features(std::string_view assignment) const {
  std::shared_lock lock(mutex_);
  std::vector<glm::FeatureRow> out;
  for (const auto& aid : assignment_ids(assignment)) {
    auto rows = table_locked(aid, ranking::Factor::Total);
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    auto f = glm::build_features(rows, connections_);
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

glm::ComparisonReport Workspace::evaluate() const { return glm::compare_models(features()); }

std::vector<social::IdentityMatch> Workspace::identities() const {
  std::shared_lock lock(mutex_);
  return identities_.matches();
}

std::vector<social::IdentityMatch> Workspace::pending_identities() const {
  std::shared_lock lock(mutex_);
  return identities_.pending();
}

std::vector<ranking::JournalEntry> Workspace::journal() const {
  std::shared_lock lock(mutex_);
  return statuses_.journal();
}

json Workspace::graph(std::string_view assignment) const {
  std::shared_lock lock(mutex_);
  json j;
  j["nodes"] = json::array();
  for (const auto& p : state_.project.people()) j["nodes"].push_back({{"id", p.id}, {"name", p.full_name}});
  j["edges"] = json::array();
  for (const auto& aid : assignment_ids(assignment)) {
    for (const auto& a : table_locked(aid, ranking::Factor::Total)) {
      j["edges"].push_back({{"pair", a.id},
                            {"source", a.p_i},
                            {"target", a.p_j},
                            {"assignment", a.assignment},
                            {"cs", a.cs},
                            {"sn", a.sn},
                            {"se", a.se},
                            {"total", a.total},
                            {"status", ranking::status_name(a.status)},
                            {"color", ranking::status_color(a.status)}});
    }
  }
  return j;
}

json Workspace::matrix(std::string_view assignment, ranking::Factor factor) const {
  std::shared_lock lock(mutex_);
  const auto& people = state_.project.people();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < people.size(); ++i) index[people[i].id] = i;
  const auto n = people.size();
  std::vector<std::vector<double>> values(n, std::vector<double>(n, 0.0));
  std::vector<std::vector<json>> status(n, std::vector<json>(n, nullptr));
  std::vector<std::vector<json>> pairs(n, std::vector<json>(n, nullptr));
  for (const auto& a : table_locked(assignment, ranking::Factor::Total)) {
    const auto i = index.at(a.p_i);
    const auto k = index.at(a.p_j);
    values[i][k] = values[k][i] = a.factor(factor);
    status[i][k] = status[k][i] = ranking::status_name(a.status);
    pairs[i][k] = pairs[k][i] = a.id;
  }
  json j;
  j["assignment"] = std::string(assignment);
  j["factor"] = ranking::factor_name(factor);
  j["people"] = json::array();
  for (const auto& p : people) j["people"].push_back(p.id);
  j["values"] = values;
  j["status"] = status;
  j["pairs"] = pairs;
  return j;
}

}  // namespace spdf
