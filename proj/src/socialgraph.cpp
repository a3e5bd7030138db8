#include "spdf/socialgraph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <tuple>

#include "spdf/error.hpp"
#include "spdf/text.hpp"

namespace spdf::social {
using nlohmann::json;

namespace {

struct ActivityName {
  std::string_view name;
  Activity activity;
};

constexpr ActivityName kActivities[] = {
    {"follow", Activity::Follow},     {"mutual_follow", Activity::MutualFollow},
    {"share", Activity::Support},     {"comment", Activity::Support},
    {"reply", Activity::Support},     {"retweet", Activity::Support},
    {"favorite", Activity::Support},  {"like", Activity::Support},
    {"plus1", Activity::Support},
};

std::optional<Activity> parse_activity(std::string_view s) {
  for (const auto& a : kActivities) {
    if (a.name == s) return a.activity;
  }
  return std::nullopt;
}

std::u32string fold_name(std::string_view name) { return text::case_fold(text::decode_utf8(name)); }

}  // namespace

std::string_view activity_name(Activity a) {
  switch (a) {
    case Activity::Follow: return "follow";
    case Activity::MutualFollow: return "mutual_follow";
    case Activity::Support: return "support";
  }
  return "unknown";
}

double default_weight(Activity a) {
  switch (a) {
    case Activity::MutualFollow: return 1.0;
    case Activity::Follow: return 0.5;
    case Activity::Support: return 0.25;
  }
  return 0.0;
}

double SocialAction::effective_weight() const { return weight.value_or(default_weight(activity)); }

double sn_score(std::span<const SocialAction> actions) {
  double sum = 0.0;
  for (const auto& a : actions) {
    const double w = a.effective_weight();
    if (!(w >= 0.0)) fail(ErrorKind::InvalidArgument, "negative action weight");
    sum += w;
  }
  return std::min(1.0, sum);
}

bool Connection::follows_on(std::string_view network) const {
  return std::any_of(actions.begin(), actions.end(), [&](const SocialAction& a) {
    return a.network == network && (a.activity == Activity::Follow || a.activity == Activity::MutualFollow);
  });
}

PersonPair canonical_pair(std::string_view a, std::string_view b) {
  return a < b ? PersonPair{std::string(a), std::string(b)} : PersonPair{std::string(b), std::string(a)};
}

ConnectionIndex::ConnectionIndex(std::span<const SocialAction> actions) {
  for (const auto& a : actions) {
    if (a.from == a.to) continue;
    auto key = canonical_pair(a.from, a.to);
    auto& c = by_pair_[key];
    c.p_i = key.first;
    c.p_j = key.second;
    c.actions.push_back(a);
  }
}

const Connection* ConnectionIndex::find(std::string_view a, std::string_view b) const {
  auto it = by_pair_.find(canonical_pair(a, b));
  return it == by_pair_.end() ? nullptr : &it->second;
}

double ConnectionIndex::sn(std::string_view a, std::string_view b) const {
  const auto* c = find(a, b);
  return c ? c->sn_score() : 0.0;
}

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(text::decode_utf8(a), text::decode_utf8(b));
}

std::vector<DirectoryEntry> parse_directory(const json& j) {
  std::vector<DirectoryEntry> out;
  try {
    for (const auto& e : j) {
      DirectoryEntry d{e.at("network").get<std::string>(), e.at("handle").get<std::string>(),
                       e.at("display_name").get<std::string>()};
      if (d.network.empty() || d.handle.empty() || d.display_name.empty()) {
        fail(ErrorKind::InvalidArgument, "directory entries must have non-empty network, handle and display_name");
      }
      out.push_back(std::move(d));
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, std::string("malformed account directory: ") + e.what());
  }
  return out;
}

std::vector<DirectoryEntry> read_directory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot read account directory: " + path.string());
  try {
    return parse_directory(json::parse(in));
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

std::vector<IdentityMatch> resolve_identities(const corpus::Person& person, std::span<const DirectoryEntry> directory) {
  const auto name = fold_name(person.full_name);
  std::vector<IdentityMatch> out;
  out.reserve(directory.size());
  for (const auto& e : directory) {
    const auto candidate = fold_name(e.display_name);
    IdentityMatch m;
    m.person = person.id;
    m.network = e.network;
    m.candidate_handle = e.handle;
    m.display_name = e.display_name;
    m.distance = levenshtein(name, candidate);
    const auto longest = std::max(name.size(), candidate.size());
    m.normalized = longest == 0 ? 0.0 : static_cast<double>(m.distance) / static_cast<double>(longest);
    m.accepted = m.normalized <= kAcceptThreshold;
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end(), [](const IdentityMatch& a, const IdentityMatch& b) {
    return std::tie(a.normalized, a.distance, a.network, a.candidate_handle, a.display_name) <
           std::tie(b.normalized, b.distance, b.network, b.candidate_handle, b.display_name);
  });

  std::map<std::string, std::pair<double, std::size_t>> best;  // network -> (normalized, count)
  for (const auto& m : out) {
    if (!m.accepted) continue;
    auto [it, inserted] = best.try_emplace(m.network, m.normalized, 0);
    if (m.normalized == it->second.first) ++it->second.second;
  }
  for (auto& m : out) {
    if (!m.accepted) continue;
    const auto& [score, count] = best.at(m.network);
    m.ambiguous = count >= 2 && m.normalized == score;
  }
  return out;
}

IdentityTable IdentityTable::build(const corpus::Project& project, std::span<const DirectoryEntry> directory,
                                   const std::map<Key, std::pair<std::string, IdentityDecision>>& decisions) {
  IdentityTable t;
  for (const auto& p : project.people()) {
    for (const auto& acc : p.accounts) t.confirmed_[{acc.network, acc.handle}] = p.id;
  }

  // Unambiguous acceptances per handle; a handle claimed by several people is ambiguous too.
  std::map<Key, std::vector<IdentityMatch>> claims;
  for (const auto& p : project.people()) {
    for (auto& m : resolve_identities(p, directory)) {
      if (m.accepted) {
        const auto& mine = t.matches_.emplace_back(m);
        claims[{mine.network, mine.candidate_handle}].push_back(mine);
      }
    }
  }
  for (auto& [key, cands] : claims) {
    if (t.confirmed_.contains(key)) continue;
    if (auto d = decisions.find(key); d != decisions.end()) {
      const auto& [person, decision] = d->second;
      if (decision == IdentityDecision::Confirmed) {
        t.confirmed_[key] = person;
        continue;
      }
      std::erase_if(cands, [&](const IdentityMatch& m) { return m.person == person; });
    }
    if (cands.empty()) continue;
    if (cands.size() == 1 && !cands.front().ambiguous) {
      t.confirmed_[key] = cands.front().person;
      continue;
    }
    for (auto& c : cands) {
      c.ambiguous = true;
      t.pending_.push_back(c);
    }
  }
  for (auto& m : t.matches_) {
    const Key key{m.network, m.candidate_handle};
    if (claims.at(key).size() > 1) m.ambiguous = true;
  }
  // Confirmations for handles no one matched automatically.
  for (const auto& [key, d] : decisions) {
    if (d.second == IdentityDecision::Confirmed && !t.confirmed_.contains(key)) t.confirmed_[key] = d.first;
  }
  return t;
}

std::optional<std::string> IdentityTable::person_for(std::string_view network, std::string_view handle) const {
  auto it = confirmed_.find({std::string(network), std::string(handle)});
  if (it == confirmed_.end()) return std::nullopt;
  return it->second;
}

ActionImport read_actions(std::istream& in, const IdentityTable& identities) {
  ActionImport out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "line " + std::to_string(lineno) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail(ErrorKind::Parse, where + "malformed JSON: " + e.what());
    }
    if (!j.is_object()) fail(ErrorKind::Parse, where + "expected a JSON object");
    std::string network, from, to, activity;
    std::optional<double> weight;
    try {
      network = j.at("network").get<std::string>();
      from = j.at("from").get<std::string>();
      to = j.at("to").get<std::string>();
      activity = j.at("activity").get<std::string>();
      if (j.contains("weight") && !j.at("weight").is_null()) weight = j.at("weight").get<double>();
    } catch (const json::exception& e) {
      fail(ErrorKind::Parse, where + e.what());
    }
    const auto act = parse_activity(activity);
    if (!act) fail(ErrorKind::Parse, where + "unknown activity '" + activity + "'");
    if (weight && !(*weight >= 0.0)) fail(ErrorKind::Parse, where + "negative weight");

    const auto pf = identities.person_for(network, from);
    const auto pt = identities.person_for(network, to);
    if (!pf || !pt) {
      out.skipped.push_back({lineno, "unresolved handle '" + (pf ? to : from) + "' on " + network});
      continue;
    }
    if (*pf == *pt) {
      out.skipped.push_back({lineno, "both handles belong to " + *pf});
      continue;
    }
    SocialAction a;
    a.network = network;
    a.activity = *act;
    if (*act == Activity::Support) a.support_kind = activity;
    a.weight = weight;
    a.from = *pf;
    a.to = *pt;
    if (*act == Activity::MutualFollow && a.to < a.from) std::swap(a.from, a.to);
    out.actions.push_back(std::move(a));
  }
  return out;
}

ActionImport import_actions(const std::filesystem::path& path, const IdentityTable& identities) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot read action file: " + path.string());
  return read_actions(in, identities);
}

json action_to_json(const SocialAction& a) {
  json j = {{"network", a.network}, {"activity", activity_name(a.activity)}, {"from", a.from}, {"to", a.to}};
  if (a.support_kind) j["support_kind"] = *a.support_kind;
  if (a.weight) j["weight"] = *a.weight;
  return j;
}

SocialAction action_from_json(const json& j) {
  SocialAction a;
  a.network = j.at("network").get<std::string>();
  const auto act = j.at("activity").get<std::string>();
  if (act == "support") {
    a.activity = Activity::Support;
  } else if (auto parsed = parse_activity(act)) {
    a.activity = *parsed;
  } else {
    fail(ErrorKind::Parse, "unknown activity '" + act + "'");
  }
  if (j.contains("support_kind")) a.support_kind = j.at("support_kind").get<std::string>();
  if (j.contains("weight")) a.weight = j.at("weight").get<double>();
  a.from = j.at("from").get<std::string>();
  a.to = j.at("to").get<std::string>();
  return a;
}

json match_to_json(const IdentityMatch& m) {
  return {{"person", m.person},         {"network", m.network},
          {"handle", m.candidate_handle}, {"display_name", m.display_name},
          {"distance", m.distance},     {"normalized", m.normalized},
          {"accepted", m.accepted},     {"ambiguous", m.ambiguous}};
}

}  // namespace spdf::social
